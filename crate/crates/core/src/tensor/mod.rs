//! Canonical compressed storage for symmetric tensors.
//!
//! An order-m, dimension-n symmetric tensor is stored as a sorted list of
//! (canonical multi-index, value) pairs, where a canonical multi-index is a
//! non-decreasing m-tuple of 0-based indices. Absent entries are zero. The
//! multiplicity of a canonical index (the number of distinct permutations of
//! its tuple) is recomputed on demand, so weighted sums over canonical
//! entries reproduce sums over all n^m dense positions.

mod index;
pub mod text;

pub use index::{canonical_indices, CanonicalIndices, MultiIndex, MAX_ORDER};

use crate::error::{Error, Result};
use crate::scalar::{powu, real, Scalar};

/// Largest dense materialization `to_dense` will produce (number of entries).
const DENSE_LIMIT: u128 = 1 << 24;

/// Number of distinct entries of an order-m, dimension-n symmetric tensor:
/// the binomial coefficient C(m+n-1, m). Exact integer arithmetic; overflow
/// is an error, never a silent wraparound.
pub fn sym_dim(n: usize, m: usize) -> Result<u64> {
    if n < 1 || m < 1 {
        return Err(Error::InvalidShape(format!(
            "sym_dim requires n >= 1 and m >= 1, got n={n}, m={m}"
        )));
    }
    let a = (n as u64)
        .checked_add(m as u64 - 1)
        .ok_or(Error::Overflow("sym_dim"))?;
    let c = binomial(a, m as u64).ok_or(Error::Overflow("sym_dim"))?;
    u64::try_from(c).map_err(|_| Error::Overflow("sym_dim"))
}

/// Carathéodory bound: sym_dim(n, m) + 1.
pub fn caratheodory_count(n: usize, m: usize) -> Result<u64> {
    sym_dim(n, m)?
        .checked_add(1)
        .ok_or(Error::Overflow("caratheodory_count"))
}

/// C(a, b) in u128, None on overflow. Multiplicative form; every
/// intermediate division is exact.
pub(crate) fn binomial(a: u64, b: u64) -> Option<u128> {
    if b > a {
        return Some(0);
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc.checked_mul((a - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// All canonical indices with every multiplicity even, in sorted order.
/// These are exactly the positions pinned to 1 by the exact formulation.
pub fn sigma2_canonical_indices(n: usize, m: usize) -> Result<Vec<MultiIndex>> {
    if m % 2 != 0 {
        return Err(Error::OddOrder(m));
    }
    // Doubling a canonical (m/2)-tuple preserves lexicographic order.
    let mut out = Vec::new();
    for half in canonical_indices(n, m / 2)? {
        let mut idx = [0usize; MAX_ORDER];
        for (j, &v) in half.as_slice().iter().enumerate() {
            idx[2 * j] = v as usize;
            idx[2 * j + 1] = v as usize;
        }
        out.push(MultiIndex::new(&idx[..m], n)?);
    }
    Ok(out)
}

/// Dense n-vector of reals.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<T>(Vec<T>);

impl<T: Scalar> Vector<T> {
    pub fn new(components: Vec<T>) -> Self {
        Vector(components)
    }

    pub fn from_slice(components: &[T]) -> Self {
        Vector(components.to_vec())
    }

    pub fn zeros(n: usize) -> Self {
        Vector(vec![T::zero(); n])
    }

    pub fn ones(n: usize) -> Self {
        Vector(vec![T::one(); n])
    }

    /// Standard basis vector e_i.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![T::zero(); n];
        v[i] = T::one();
        Vector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn dot(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(&a, &b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        Vector(self.0.iter().map(|&a| a * s).collect())
    }

    pub fn add_scaled(&self, other: &Self, s: T) -> Self {
        Vector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a + s * b)
                .collect(),
        )
    }

    /// Unit vector in the same direction, or None for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let norm = self.norm();
        if norm == T::zero() {
            None
        } else {
            Some(self.scale(T::one() / norm))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == T::zero())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.0.iter()
    }
}

impl<T> std::ops::Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> std::ops::IndexMut<usize> for Vector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

/// Order-m, dimension-n symmetric tensor in canonical compressed storage.
///
/// Entries are kept sorted by canonical index and exact zeros are pruned,
/// so two tensors are equal iff their entry lists are equal. Tensors are
/// immutable after construction; operations build new tensors.
#[derive(Clone, Debug)]
pub struct SymmetricTensor<T> {
    n: usize,
    m: usize,
    entries: Vec<(MultiIndex, T)>,
}

impl<T: Scalar> PartialEq for SymmetricTensor<T> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.m == other.m && self.entries == other.entries
    }
}

fn check_shape(n: usize, m: usize) -> Result<()> {
    if n < 1 || n > u16::MAX as usize {
        return Err(Error::InvalidShape(format!(
            "dimension n={n} outside supported range [1, {}]",
            u16::MAX
        )));
    }
    if m < 1 || m > MAX_ORDER {
        return Err(Error::InvalidShape(format!(
            "order m={m} outside supported range [1, {MAX_ORDER}]"
        )));
    }
    Ok(())
}

impl<T: Scalar> SymmetricTensor<T> {
    /// The zero tensor.
    pub fn zeros(n: usize, m: usize) -> Result<Self> {
        check_shape(n, m)?;
        Ok(SymmetricTensor {
            n,
            m,
            entries: Vec::new(),
        })
    }

    /// Identity tensor: pure-diagonal entries 1, everything else 0.
    pub fn identity(n: usize, m: usize) -> Result<Self> {
        check_shape(n, m)?;
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let idx = MultiIndex::new(&vec![i; m], n)?;
            entries.push((idx, T::one()));
        }
        Ok(SymmetricTensor { n, m, entries })
    }

    /// The m-fold outer power u^{⊗m}: canonical entry c is ∏_j u_j^{μ_j(c)}.
    pub fn rank_one(u: &Vector<T>, m: usize) -> Result<Self> {
        let n = u.len();
        check_shape(n, m)?;
        let mut entries = Vec::new();
        for idx in canonical_indices(n, m)? {
            let mut v = T::one();
            for (i, mu) in idx.multiplicities() {
                v *= powu(u[i], mu as u32);
            }
            if v != T::zero() {
                entries.push((idx, v));
            }
        }
        Ok(SymmetricTensor { n, m, entries })
    }

    /// Build from (canonical index, value) pairs. Indices need not be sorted;
    /// duplicates are an error; zero values are dropped.
    pub fn from_entries(
        n: usize,
        m: usize,
        entries: impl IntoIterator<Item = (MultiIndex, T)>,
    ) -> Result<Self> {
        check_shape(n, m)?;
        let mut entries: Vec<(MultiIndex, T)> = entries.into_iter().collect();
        for (idx, _) in &entries {
            if idx.order() != m {
                return Err(Error::InvalidShape(format!(
                    "index {idx} has order {} in an order-{m} tensor",
                    idx.order()
                )));
            }
            if idx.max_index() >= n {
                return Err(Error::OutOfRange(format!(
                    "index {idx} exceeds dimension n={n}"
                )));
            }
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateIndex(w[0].0.to_string()));
            }
        }
        entries.retain(|(_, v)| *v != T::zero());
        Ok(SymmetricTensor { n, m, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Stored (nonzero) canonical entries in sorted order.
    pub fn entries(&self) -> &[(MultiIndex, T)] {
        &self.entries
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    /// Value at a canonical index (zero when absent).
    pub fn get(&self, idx: &MultiIndex) -> T {
        match self.entries.binary_search_by(|(k, _)| k.cmp(idx)) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => T::zero(),
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.m != other.m {
            return Err(Error::ShapeMismatch {
                expected_n: self.n,
                expected_m: self.m,
                got_n: other.n,
                got_m: other.m,
            });
        }
        Ok(())
    }

    /// Inner product ⟨A, B⟩ over all n^m dense positions, computed as a
    /// multiplicity-weighted sum over shared canonical entries.
    pub fn inner(&self, other: &Self) -> Result<T> {
        self.check_same_shape(other)?;
        let mut acc = T::zero();
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            match self.entries[i].0.cmp(&other.entries[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let mult = real::<T>(self.entries[i].0.permutation_count() as f64);
                    acc += mult * self.entries[i].1 * other.entries[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(acc)
    }

    /// Frobenius norm √⟨A, A⟩.
    pub fn frobenius(&self) -> T {
        let mut acc = T::zero();
        for (idx, v) in &self.entries {
            let mult = real::<T>(idx.permutation_count() as f64);
            acc += mult * *v * *v;
        }
        acc.sqrt()
    }

    /// Tensor trace: sum of the n pure-diagonal entries.
    pub fn trace(&self) -> T {
        self.entries
            .iter()
            .filter(|(idx, _)| idx.is_diagonal())
            .map(|&(_, v)| v)
            .sum()
    }

    /// Sum of all n^m dense entries (multiplicity-weighted canonical sum).
    pub fn dense_sum(&self) -> T {
        let mut acc = T::zero();
        for (idx, v) in &self.entries {
            acc += real::<T>(idx.permutation_count() as f64) * *v;
        }
        acc
    }

    /// Mean of all n^m dense entries.
    pub fn dense_mean(&self) -> T {
        let total = (self.n as f64).powi(self.m as i32);
        self.dense_sum() / real::<T>(total)
    }

    /// The contraction A x^{⊗(m-1)}: component i sums A_{i,i_2,...,i_m}
    /// x_{i_2}...x_{i_m} over all dense index tuples.
    pub fn contract(&self, x: &Vector<T>) -> Result<Vector<T>> {
        if x.len() != self.n {
            return Err(Error::ShapeMismatch {
                expected_n: self.n,
                expected_m: self.m,
                got_n: x.len(),
                got_m: self.m,
            });
        }
        let mut out = Vector::zeros(self.n);
        self.contractor().contract_into(x.as_slice(), out.as_mut_slice());
        Ok(out)
    }

    /// Precompute the contraction kernel for repeated `contract` calls
    /// against the same tensor.
    pub fn contractor(&self) -> Contractor<T> {
        Contractor::new(self)
    }

    /// A + s·B entrywise.
    pub fn add_scaled(&self, other: &Self, s: T) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            let take = if i == self.entries.len() {
                std::cmp::Ordering::Greater
            } else if j == other.entries.len() {
                std::cmp::Ordering::Less
            } else {
                self.entries[i].0.cmp(&other.entries[j].0)
            };
            let (idx, v) = match take {
                std::cmp::Ordering::Less => {
                    let e = self.entries[i];
                    i += 1;
                    e
                }
                std::cmp::Ordering::Greater => {
                    let e = other.entries[j];
                    j += 1;
                    (e.0, s * e.1)
                }
                std::cmp::Ordering::Equal => {
                    let e = (self.entries[i].0, self.entries[i].1 + s * other.entries[j].1);
                    i += 1;
                    j += 1;
                    e
                }
            };
            if v != T::zero() {
                entries.push((idx, v));
            }
        }
        Ok(SymmetricTensor {
            n: self.n,
            m: self.m,
            entries,
        })
    }

    /// s·A entrywise.
    pub fn scale(&self, s: T) -> Self {
        SymmetricTensor {
            n: self.n,
            m: self.m,
            entries: self
                .entries
                .iter()
                .filter_map(|&(idx, v)| {
                    let sv = s * v;
                    (sv != T::zero()).then_some((idx, sv))
                })
                .collect(),
        }
    }

    /// Replace the values at the given canonical indices.
    pub fn with_pinned(&self, pins: &[(MultiIndex, T)]) -> Result<Self> {
        let mut pins: Vec<(MultiIndex, T)> = pins.to_vec();
        pins.sort_by(|a, b| a.0.cmp(&b.0));
        let mut entries = Vec::with_capacity(self.entries.len() + pins.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < pins.len() {
            let take = if i == self.entries.len() {
                std::cmp::Ordering::Greater
            } else if j == pins.len() {
                std::cmp::Ordering::Less
            } else {
                self.entries[i].0.cmp(&pins[j].0)
            };
            let (idx, v) = match take {
                std::cmp::Ordering::Less => {
                    let e = self.entries[i];
                    i += 1;
                    e
                }
                std::cmp::Ordering::Greater => {
                    let e = pins[j];
                    j += 1;
                    e
                }
                std::cmp::Ordering::Equal => {
                    let e = pins[j];
                    i += 1;
                    j += 1;
                    e
                }
            };
            if v != T::zero() {
                entries.push((idx, v));
            }
        }
        Ok(SymmetricTensor {
            n: self.n,
            m: self.m,
            entries,
        })
    }

    /// Add c to every canonical entry (equivalently, add c·1^{⊗m}).
    pub fn shift_uniform(&self, c: T) -> Result<Self> {
        if c == T::zero() {
            return Ok(self.clone());
        }
        let mut entries = Vec::with_capacity(sym_dim(self.n, self.m)? as usize);
        let mut i = 0;
        for idx in canonical_indices(self.n, self.m)? {
            let stored = if i < self.entries.len() && self.entries[i].0 == idx {
                let v = self.entries[i].1;
                i += 1;
                v
            } else {
                T::zero()
            };
            let v = stored + c;
            if v != T::zero() {
                entries.push((idx, v));
            }
        }
        Ok(SymmetricTensor {
            n: self.n,
            m: self.m,
            entries,
        })
    }

    /// Row-major dense materialization (index = Σ i_j · n^{m-1-j}).
    /// Intended for small n; errors when n^m is unreasonably large.
    pub fn to_dense(&self) -> Result<Vec<T>> {
        let total = (self.n as u128)
            .checked_pow(self.m as u32)
            .filter(|&t| t <= DENSE_LIMIT)
            .ok_or(Error::DenseTooLarge {
                n: self.n,
                m: self.m,
            })?;
        let mut dense = vec![T::zero(); total as usize];
        let mut tuple = vec![0usize; self.m];
        for (idx, v) in &self.entries {
            // Scatter the canonical value to every permutation of its tuple.
            for (j, &e) in idx.as_slice().iter().enumerate() {
                tuple[j] = e as usize;
            }
            scatter_permutations(&mut dense, &mut tuple, 0, self.n, *v);
        }
        Ok(dense)
    }

    /// Rebuild from a row-major dense array, which must be symmetric within
    /// absolute tolerance 1e-9. The stored value is taken from the canonical
    /// (sorted) position so the to_dense round trip is exact.
    pub fn from_dense(n: usize, m: usize, dense: &[T]) -> Result<Self> {
        check_shape(n, m)?;
        let total = (n as u128)
            .checked_pow(m as u32)
            .filter(|&t| t <= DENSE_LIMIT)
            .ok_or(Error::DenseTooLarge { n, m })?;
        if dense.len() != total as usize {
            return Err(Error::InvalidShape(format!(
                "dense array has {} entries, expected n^m = {total}",
                dense.len()
            )));
        }
        let tol = real::<T>(1e-9);
        let mut tuple = vec![0usize; m];
        for flat in 0..dense.len() {
            let mut rem = flat;
            for j in (0..m).rev() {
                tuple[j] = rem % n;
                rem /= n;
            }
            let mut sorted = tuple.clone();
            sorted.sort_unstable();
            let canon_flat = flat_index(&sorted, n);
            let diff = (dense[flat] - dense[canon_flat]).abs();
            if diff > tol {
                return Err(Error::AsymmetricDense {
                    index: format!("{tuple:?}"),
                    delta: diff.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        let mut entries = Vec::new();
        for idx in canonical_indices(n, m)? {
            let sorted: Vec<usize> = idx.as_slice().iter().map(|&e| e as usize).collect();
            let v = dense[flat_index(&sorted, n)];
            if v != T::zero() {
                entries.push((idx, v));
            }
        }
        Ok(SymmetricTensor { n, m, entries })
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|(_, v)| v.is_finite())
    }
}

fn flat_index(tuple: &[usize], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &i| acc * n + i)
}

/// Write `v` at every distinct permutation of `tuple[pos..]` (recursively).
fn scatter_permutations<T: Scalar>(
    dense: &mut [T],
    tuple: &mut [usize],
    pos: usize,
    n: usize,
    v: T,
) {
    if pos + 1 >= tuple.len() {
        dense[flat_index(tuple, n)] = v;
        return;
    }
    for k in pos..tuple.len() {
        // Skip values already placed at this position.
        if tuple[pos..k].contains(&tuple[k]) {
            continue;
        }
        tuple.swap(pos, k);
        scatter_permutations(dense, tuple, pos + 1, n, v);
        tuple.swap(pos, k);
    }
}

/// Precomputed contraction kernel mapping x to A x^{⊗(m-1)}.
///
/// For a canonical entry with multiplicities μ and distinct indices j, the
/// dense tuples starting at i contribute value · mult · μ_i/m ·
/// ∏_j x_j^{μ_j - [j=i]}. The skip-one products are formed with
/// prefix/suffix arrays to avoid division.
pub struct Contractor<T> {
    n: usize,
    terms: Vec<PlanTerm<T>>,
}

struct PlanTerm<T> {
    nfac: u8,
    fac_idx: [u16; MAX_ORDER],
    fac_exp: [u8; MAX_ORDER],
    coef: [T; MAX_ORDER],
}

impl<T: Scalar> Contractor<T> {
    fn new(tensor: &SymmetricTensor<T>) -> Self {
        let m = tensor.m as f64;
        let terms = tensor
            .entries
            .iter()
            .map(|(idx, v)| {
                let mult = idx.permutation_count() as f64;
                let mut term = PlanTerm {
                    nfac: 0,
                    fac_idx: [0; MAX_ORDER],
                    fac_exp: [0; MAX_ORDER],
                    coef: [T::zero(); MAX_ORDER],
                };
                for (i, mu) in idx.multiplicities() {
                    let f = term.nfac as usize;
                    term.fac_idx[f] = i as u16;
                    term.fac_exp[f] = mu as u8;
                    term.coef[f] = *v * real::<T>(mult * mu as f64 / m);
                    term.nfac += 1;
                }
                term
            })
            .collect();
        Contractor {
            n: tensor.n,
            terms,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `out[i] += contributions`; `out` is zeroed first.
    pub fn contract_into(&self, x: &[T], out: &mut [T]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(out.len(), self.n);
        for o in out.iter_mut() {
            *o = T::zero();
        }
        let mut pw = [T::one(); MAX_ORDER];
        let mut prefix = [T::one(); MAX_ORDER + 1];
        let mut suffix = [T::one(); MAX_ORDER + 1];
        for term in &self.terms {
            let nf = term.nfac as usize;
            for f in 0..nf {
                pw[f] = powu(x[term.fac_idx[f] as usize], term.fac_exp[f] as u32);
            }
            prefix[0] = T::one();
            for f in 0..nf {
                prefix[f + 1] = prefix[f] * pw[f];
            }
            suffix[nf] = T::one();
            for f in (0..nf).rev() {
                suffix[f] = suffix[f + 1] * pw[f];
            }
            for f in 0..nf {
                let xi = x[term.fac_idx[f] as usize];
                let own = powu(xi, term.fac_exp[f] as u32 - 1);
                let skip_one = prefix[f] * suffix[f + 1] * own;
                out[term.fac_idx[f] as usize] += term.coef[f] * skip_one;
            }
        }
    }

    /// ⟨A, x^{⊗m}⟩ together with the contraction vector.
    pub fn value_and_contract(&self, x: &[T], out: &mut [T]) -> T {
        self.contract_into(x, out);
        x.iter().zip(out.iter()).map(|(&a, &b)| a * b).sum()
    }
}
