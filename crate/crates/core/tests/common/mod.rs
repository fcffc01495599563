//! Independent dense-array oracles for the canonical-storage operations.
//!
//! Everything here works on flat row-major n^m arrays with plain loops, on
//! purpose: these are the reference implementations the compressed path is
//! checked against, so they share no code with it.
#![allow(dead_code)] // each test target uses a different subset

use hpm_core::{MultiIndex, SymTensor64};
use rand::RngExt;
use rand_chacha::ChaCha8Rng;

pub struct DenseOracle {
    pub n: usize,
    pub m: usize,
    pub data: Vec<f64>,
}

impl DenseOracle {
    /// Random symmetric dense tensor: assign a random value to every sorted
    /// tuple and copy it to all permutations by lookup-on-sorted.
    pub fn random(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Self {
        let total = n.pow(m as u32);
        let mut data = vec![0.0f64; total];
        for flat in 0..total {
            let mut tuple = unflatten(flat, n, m);
            tuple.sort_unstable();
            let canon = flatten(&tuple, n);
            if canon == flat {
                data[flat] = rng.random_range(-1.0..1.0);
            }
        }
        for flat in 0..total {
            let mut tuple = unflatten(flat, n, m);
            tuple.sort_unstable();
            data[flat] = data[flatten(&tuple, n)];
        }
        DenseOracle { n, m, data }
    }

    /// The same tensor in canonical compressed form, built entry by entry.
    pub fn to_canonical(&self) -> SymTensor64 {
        let mut entries = Vec::new();
        for flat in 0..self.data.len() {
            let tuple = unflatten(flat, self.n, self.m);
            if tuple.windows(2).all(|w| w[0] <= w[1]) && self.data[flat] != 0.0 {
                entries.push((MultiIndex::new(&tuple, self.n).unwrap(), self.data[flat]));
            }
        }
        SymTensor64::from_entries(self.n, self.m, entries).unwrap()
    }

    pub fn inner(&self, other: &DenseOracle) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n)
            .map(|i| self.data[flatten(&vec![i; self.m], self.n)])
            .sum()
    }

    /// (A x^{⊗m-1})_i by direct summation over all (m-1)-tuples.
    pub fn contract(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0f64; self.n];
        let rest = self.n.pow(self.m as u32 - 1);
        for i in 0..self.n {
            let mut acc = 0.0;
            for tail in 0..rest {
                let tuple = unflatten(tail, self.n, self.m - 1);
                let mut full = vec![i];
                full.extend_from_slice(&tuple);
                let mut prod = self.data[flatten(&full, self.n)];
                for &j in &tuple {
                    prod *= x[j];
                }
                acc += prod;
            }
            out[i] = acc;
        }
        out
    }
}

pub fn flatten(tuple: &[usize], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &i| acc * n + i)
}

pub fn unflatten(mut flat: usize, n: usize, m: usize) -> Vec<usize> {
    let mut tuple = vec![0usize; m];
    for j in (0..m).rev() {
        tuple[j] = flat % n;
        flat /= n;
    }
    tuple
}

/// |a - b| measured against an explicit scale (for quantities whose natural
/// size is the product of input norms, not the possibly-cancelled result).
pub fn rel_close(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * scale.max(a.abs()).max(b.abs()).max(1e-30)
}
