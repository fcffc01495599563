//! Model-calculus oracles. The binary-pattern enumeration of the
//! expectation decomposition is the ground truth here: the combinatorial
//! function, the coefficient matrix, the sign identity, and the expected
//! tensor are all checked against it before anything else relies on them.

mod common;

use common::{flatten, unflatten};
use hpm_core::model::{
    alpha_from_p, bisection_alpha, expected_cut, expected_tensor, f_comb, l_matrix,
    motif_probability, p_from_alpha, sample_bisection, sample_counts, sample_cuts, sample_motif,
    Assignment, BisectionParams, CountsParams, CutsParams, ExpectationWeights, Motif, MotifParams,
};
use hpm_core::{MultiIndex, SymTensor64};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Literal expectation-decomposition entry: Σ over binary patterns z of
/// p_{Σz} · Π_j (z_j + (1-z_j)·y_j), for the given position labels.
fn decomposition_entry(p: &[f64], labels: &[i8]) -> f64 {
    let m = labels.len();
    let mut acc = 0.0;
    for pattern in 0u32..(1 << m) {
        let k = pattern.count_ones() as usize;
        let mut prod = 1.0;
        for (j, &y) in labels.iter().enumerate() {
            if (pattern >> j) & 1 == 0 {
                prod *= y as f64;
            }
        }
        acc += p[k] * prod;
    }
    acc
}

#[test]
fn f_comb_against_pattern_enumeration() {
    // Σ_k p_k f(m,l,k) must equal (-1)^l times the decomposition entry for
    // a tuple with l positive labels, for arbitrary p.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in [2usize, 4, 6] {
        for _ in 0..20 {
            let p: Vec<f64> = (0..=m).map(|_| rng.random_range(-1.0..1.0)).collect();
            for l in 0..=m {
                let labels: Vec<i8> = (0..m).map(|j| if j < l { 1 } else { -1 }).collect();
                let entry = decomposition_entry(&p, &labels);
                let mut f_sum = 0.0;
                for (k, &pk) in p.iter().enumerate() {
                    f_sum += pk * f_comb(m, l, k).unwrap() as f64;
                }
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                assert!(
                    (f_sum - sign * entry).abs() < 1e-10,
                    "m={m} l={l}: {f_sum} vs {}",
                    sign * entry
                );
            }
        }
    }
}

#[test]
fn l_matrix_against_pattern_enumeration() {
    // Row i of L maps p to the decomposition entry with i-1 positive labels.
    for m in [2usize, 4, 6] {
        let l_mat = l_matrix(m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
        for _ in 0..10 {
            let p: Vec<f64> = (0..=m).map(|_| rng.random_range(-1.0..1.0)).collect();
            for l in 0..=m {
                let labels: Vec<i8> = (0..m).map(|j| if j < l { 1 } else { -1 }).collect();
                let want = decomposition_entry(&p, &labels);
                let got: f64 = l_mat[l]
                    .iter()
                    .zip(p.iter())
                    .map(|(&lij, &pk)| lij as f64 * pk)
                    .sum();
                assert!((got - want).abs() < 1e-10, "m={m} l={l}");
            }
        }
    }
}

#[test]
fn sign_identity_for_solved_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for m in [2usize, 4, 6] {
        for _ in 0..100 {
            let alpha_vals: Vec<f64> = (0..=m).map(|_| rng.random_range(-2.0..2.0)).collect();
            let alpha = ExpectationWeights::from_full(alpha_vals.clone()).unwrap();
            let p = p_from_alpha(&alpha).unwrap();
            for l in 0..=m {
                let mut f_sum = 0.0;
                for (k, &pk) in p.iter().enumerate() {
                    f_sum += pk * f_comb(m, l, k).unwrap() as f64;
                }
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                assert!(
                    (f_sum - sign * alpha_vals[l]).abs() < 1e-10,
                    "m={m} l={l}: {f_sum} vs {}",
                    sign * alpha_vals[l]
                );
            }
        }
    }
}

#[test]
fn round_trip_residuals_stay_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for m in [2usize, 4, 6] {
        for _ in 0..100 {
            let alpha_vals: Vec<f64> = (0..=m).map(|_| rng.random_range(-2.0..2.0)).collect();
            let alpha = ExpectationWeights::from_full(alpha_vals).unwrap();
            let p = p_from_alpha(&alpha).unwrap();
            let back = alpha_from_p(&p).unwrap();
            for (a, b) in back.as_slice().iter().zip(alpha.as_slice()) {
                assert!((a - b).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn expected_tensor_realizes_the_decomposition() {
    // Dense expected tensor vs the literal decomposition sum, n ≤ 4.
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for (n, m) in [(2usize, 2usize), (4, 2), (2, 4), (4, 4)] {
        for _ in 0..5 {
            let alpha_vals: Vec<f64> = (0..=m).map(|_| rng.random_range(0.0..1.0)).collect();
            let alpha = ExpectationWeights::from_full(alpha_vals).unwrap();
            let y = Assignment::random_balanced(n, &mut rng).unwrap();
            let p = p_from_alpha(&alpha).unwrap();
            let dense = expected_tensor(&y, &alpha).unwrap().to_dense().unwrap();
            for flat in 0..dense.len() {
                let tuple = unflatten(flat, n, m);
                let labels: Vec<i8> = tuple.iter().map(|&i| y.labels()[i]).collect();
                let want = decomposition_entry(&p, &labels);
                assert!(
                    (dense[flat] - want).abs() < 1e-9,
                    "n={n} m={m} tuple {tuple:?}: {} vs {want}",
                    dense[flat]
                );
            }
        }
    }
}

fn empirical_gate(name: &str, mean: f64, expect: f64, per_sample_var: f64, samples: usize) {
    let se = (per_sample_var / samples as f64).sqrt();
    let slack = 5.0 * se + 1e-12;
    assert!(
        (mean - expect).abs() <= slack,
        "{name}: mean {mean} vs expected {expect} (allowed {slack})"
    );
}

#[test]
fn counts_sampler_is_unbiased_smoke() {
    let y = Assignment::new(vec![1, 1, 1, 1, -1, -1, -1, -1]).unwrap();
    let params = CountsParams {
        alpha_compact: vec![0.9, 0.1, 0.0],
        trials: 2,
        zero_repeats: false,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let probes = [
        MultiIndex::new(&[0, 0, 0, 0], 8).unwrap(),
        MultiIndex::new(&[0, 1, 2, 4], 8).unwrap(),
        MultiIndex::new(&[0, 4, 5, 6], 8).unwrap(),
    ];
    let samples = 600;
    let mut sums = [0.0f64; 3];
    for _ in 0..samples {
        let w: SymTensor64 = sample_counts(&params, &y, &mut rng).unwrap();
        for (k, idx) in probes.iter().enumerate() {
            sums[k] += w.get(idx);
        }
    }
    let alpha = ExpectationWeights::from_compact(&params.alpha_compact)
        .unwrap()
        .scale(2.0);
    let expected = expected_tensor(&y, &alpha).unwrap();
    for (k, idx) in probes.iter().enumerate() {
        let mean = sums[k] / samples as f64;
        let p = alpha.get(y.positive_count(idx)) / 2.0;
        empirical_gate("counts", mean, expected.get(idx), 2.0 * p * (1.0 - p), samples);
    }
}

#[test]
fn bisection_sampler_is_unbiased_smoke() {
    let y = Assignment::new(vec![1, 1, -1, -1, 1, -1]).unwrap();
    let params = BisectionParams {
        q: 0.3,
        zero_repeats: false,
    };
    let alpha = bisection_alpha(0.3f64, 4).unwrap();
    let probes = [
        MultiIndex::new(&[0, 1, 4, 4], 6).unwrap(), // all-positive with a repeat
        MultiIndex::new(&[0, 1, 2, 3], 6).unwrap(), // balanced
        MultiIndex::new(&[0, 2, 3, 5], 6).unwrap(), // one positive
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(67);
    let samples = 600;
    let mut sums = [0.0f64; 3];
    for _ in 0..samples {
        let w: SymTensor64 = sample_bisection(&params, &y, &mut rng, 4).unwrap();
        for (k, idx) in probes.iter().enumerate() {
            sums[k] += w.get(idx);
        }
    }
    for (k, idx) in probes.iter().enumerate() {
        let p = alpha.get(y.positive_count(idx));
        empirical_gate(
            "bisection",
            sums[k] / samples as f64,
            p,
            p * (1.0 - p),
            samples,
        );
    }
}

#[test]
fn cuts_sampler_matches_expected_cut_smoke() {
    let y = Assignment::new(vec![1, 1, 1, 1, -1, -1, -1, -1]).unwrap();
    let params = CutsParams {
        alpha_compact: vec![0.9, 0.1, 0.0],
        n: 8,
    };
    let tuples: [[usize; 4]; 2] = [[0, 1, 2, 3], [0, 1, 4, 5]];
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let samples = 400;
    let mut sums = [0.0f64; 2];
    let mut sq = [0.0f64; 2];
    for _ in 0..samples {
        let w: SymTensor64 = sample_cuts(&params, &y, &mut rng).unwrap();
        for (k, t) in tuples.iter().enumerate() {
            let v = w.get(&MultiIndex::new(t, 8).unwrap());
            sums[k] += v;
            sq[k] += v * v;
        }
    }
    for (k, t) in tuples.iter().enumerate() {
        let labels: Vec<i8> = t.iter().map(|&i| y.labels()[i]).collect();
        let want = expected_cut(&params.alpha_compact, &labels, 4, 4).unwrap();
        let mean = sums[k] / samples as f64;
        let var = (sq[k] / samples as f64 - mean * mean).max(1e-6);
        empirical_gate("cuts", mean, want, var, samples);
    }
}

/// Two trophic levels: mutual edges inside each pair, all four cross edges
/// pointing down. Eight edges, automorphism group of order four.
fn food_chain_motif() -> Motif {
    Motif::from_edges(
        4,
        &[
            (0, 1),
            (1, 0),
            (2, 3),
            (3, 2),
            (0, 2),
            (0, 3),
            (1, 2),
            (1, 3),
        ],
    )
    .unwrap()
}

#[test]
fn food_chain_probability_matches_published_coefficients() {
    let motif = food_chain_motif();
    let mut rng = ChaCha8Rng::seed_from_u64(83);
    for _ in 0..10 {
        let a11: f64 = rng.random_range(0.05..0.95);
        let a22: f64 = rng.random_range(0.05..0.95);
        let a12: f64 = rng.random_range(0.05..0.95);
        let a21: f64 = rng.random_range(0.05..0.95);
        let alpha4 = [a11, a22, a12, a21];

        // All labels positive: 6 α11^8 (1-α11)^4.
        let beta0 = motif_probability(&motif, &[1, 1, 1, 1], &alpha4).unwrap();
        let want0 = 6.0 * a11.powi(8) * (1.0 - a11).powi(4);
        assert!((beta0 - want0).abs() < 1e-12, "beta0 {beta0} vs {want0}");

        // Three positives: the two-term form with cross probabilities.
        let beta1 = motif_probability(&motif, &[1, 1, 1, -1], &alpha4).unwrap();
        let want1 = 3.0
            * a11.powi(4)
            * a12.powi(3)
            * a21
            * (1.0 - a11).powi(2)
            * (1.0 - a21).powi(2)
            + 3.0 * a11.powi(4) * a12 * a21.powi(3) * (1.0 - a11).powi(2) * (1.0 - a12).powi(2);
        assert!((beta1 - want1).abs() < 1e-12, "beta1 {beta1} vs {want1}");

        // All negatives mirror beta0 with α22.
        let beta4 = motif_probability(&motif, &[-1, -1, -1, -1], &alpha4).unwrap();
        let want4 = 6.0 * a22.powi(8) * (1.0 - a22).powi(4);
        assert!((beta4 - want4).abs() < 1e-12, "beta4 {beta4} vs {want4}");
    }
}

#[test]
fn motif_sampler_matches_enumeration_smoke() {
    let y = Assignment::new(vec![1, 1, 1, -1, -1, -1]).unwrap();
    let params = MotifParams {
        motif: food_chain_motif(),
        alpha4: [0.7, 0.6, 0.4, 0.3],
    };
    let probes = [
        MultiIndex::new(&[0, 1, 2, 3], 6).unwrap(),
        MultiIndex::new(&[0, 1, 3, 4], 6).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(97);
    let samples = 800;
    let mut sums = [0.0f64; 2];
    for _ in 0..samples {
        let w: SymTensor64 = sample_motif(&params, &y, &mut rng).unwrap();
        for (k, idx) in probes.iter().enumerate() {
            sums[k] += w.get(idx);
        }
    }
    for (k, idx) in probes.iter().enumerate() {
        let labels: Vec<i8> = idx.as_slice().iter().map(|&i| y.labels()[i as usize]).collect();
        let p = motif_probability(&params.motif, &labels, &params.alpha4).unwrap();
        empirical_gate("motif", sums[k] / samples as f64, p, p * (1.0 - p), samples);
    }
}

#[test]
fn sampled_entries_respect_the_entry_bound() {
    // Boundedness holds by construction for each sampler.
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    let y = Assignment::new(vec![1, 1, -1, -1, 1, -1, -1, 1]).unwrap();
    let counts = CountsParams {
        alpha_compact: vec![0.8, 0.3, 0.5],
        trials: 3,
        zero_repeats: false,
    };
    let w: SymTensor64 = sample_counts(&counts, &y, &mut rng).unwrap();
    assert!(w.entries().iter().all(|(_, v)| v.abs() <= 3.0));

    let bis = BisectionParams {
        q: 0.25,
        zero_repeats: true,
    };
    let w: SymTensor64 = sample_bisection(&bis, &y, &mut rng, 4).unwrap();
    assert!(w.entries().iter().all(|(_, v)| v.abs() <= 1.0));
    assert!(w.entries().iter().all(|(idx, _)| !idx.has_repeats()));

    let cuts = CutsParams {
        alpha_compact: vec![0.9, 0.2, 0.1],
        n: 8,
    };
    let bound = 70.0; // C(8,4)
    let w: SymTensor64 = sample_cuts(&cuts, &y, &mut rng).unwrap();
    assert!(w.entries().iter().all(|(_, v)| v.abs() <= bound));
}

#[test]
fn dense_expected_tensor_is_symmetric_by_construction() {
    let mut rng = ChaCha8Rng::seed_from_u64(127);
    let y = Assignment::random_balanced(4, &mut rng).unwrap();
    let alpha = ExpectationWeights::from_full(vec![0.9, 0.1, 0.0, 0.1, 0.9]).unwrap();
    let dense = expected_tensor(&y, &alpha).unwrap().to_dense().unwrap();
    for flat in 0..dense.len() {
        let mut tuple = unflatten(flat, 4, 4);
        tuple.sort_unstable();
        assert_eq!(dense[flat], dense[flatten(&tuple, 4)]);
    }
}
