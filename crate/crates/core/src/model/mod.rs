//! The homogeneous-polynomial model class: coefficient calculus between
//! expectation weights α and coefficients p, expectation construction, four
//! generative samplers (counts, hypergraph cuts, minimum bisection, motifs),
//! and the statistical-condition checker.

pub mod config;

use rand::seq::SliceRandom;
use rand::{Rng, RngExt};

use crate::error::{Error, Result};
use crate::scalar::{real, Scalar};
use crate::tensor::{binomial, canonical_indices, MultiIndex, SymmetricTensor, Vector};

/// Balanced two-group labeling: n entries in {+1, -1} summing to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    labels: Vec<i8>,
}

impl Assignment {
    pub fn new(labels: Vec<i8>) -> Result<Self> {
        if labels.len() % 2 != 0 {
            return Err(Error::InvalidAssignment(format!(
                "length must be even, got {}",
                labels.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::InvalidAssignment("empty labeling".into()));
        }
        if let Some(bad) = labels.iter().find(|&&l| l != 1 && l != -1) {
            return Err(Error::InvalidAssignment(format!(
                "labels must be +1 or -1, found {bad}"
            )));
        }
        let sum: i64 = labels.iter().map(|&l| l as i64).sum();
        if sum != 0 {
            return Err(Error::InvalidAssignment(format!(
                "groups must be balanced, label sum is {sum}"
            )));
        }
        Ok(Assignment { labels })
    }

    /// Uniformly random balanced labeling.
    pub fn random_balanced<R: Rng>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || n % 2 != 0 {
            return Err(Error::InvalidAssignment(format!(
                "n must be positive and even, got {n}"
            )));
        }
        let mut labels = vec![1i8; n];
        for l in labels.iter_mut().skip(n / 2) {
            *l = -1;
        }
        labels.shuffle(rng);
        Assignment::new(labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn is_positive(&self, i: usize) -> bool {
        self.labels[i] > 0
    }

    pub fn to_vector<T: Scalar>(&self) -> Vector<T> {
        Vector::new(
            self.labels
                .iter()
                .map(|&l| if l > 0 { T::one() } else { -T::one() })
                .collect(),
        )
    }

    pub fn flipped(&self) -> Self {
        Assignment {
            labels: self.labels.iter().map(|&l| -l).collect(),
        }
    }

    /// Equal as labelings of the two groups (global sign is meaningless for
    /// even-order objectives).
    pub fn matches_up_to_sign(&self, other: &Self) -> bool {
        self == other || *self == other.flipped()
    }

    /// Number of +1 labels at the positions of a canonical index, counting
    /// multiplicity.
    pub fn positive_count(&self, idx: &MultiIndex) -> usize {
        idx.as_slice()
            .iter()
            .filter(|&&i| self.labels[i as usize] > 0)
            .count()
    }
}

impl std::fmt::Display for Assignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (j, l) in self.labels.iter().enumerate() {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Expectation weights α: α_l is the expected entry value when exactly l of
/// the m positions carry a +1 label. Stored full-length (m+1).
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectationWeights<T> {
    alpha: Vec<T>,
}

impl<T: Scalar> ExpectationWeights<T> {
    pub fn from_full(alpha: Vec<T>) -> Result<Self> {
        if alpha.len() < 2 {
            return Err(Error::OutOfRange(
                "expectation weights need at least 2 entries".into(),
            ));
        }
        Ok(ExpectationWeights { alpha })
    }

    /// Expand the compact (m/2+1)-entry form by the symmetry α_l = α_{m-l}.
    pub fn from_compact(compact: &[T]) -> Result<Self> {
        if compact.is_empty() {
            return Err(Error::OutOfRange("empty compact weights".into()));
        }
        let m = 2 * (compact.len() - 1);
        if m == 0 {
            return Err(Error::OutOfRange(
                "compact weights must describe order >= 2".into(),
            ));
        }
        let alpha = (0..=m).map(|l| compact[l.min(m - l)]).collect();
        Ok(ExpectationWeights { alpha })
    }

    pub fn order(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn as_slice(&self) -> &[T] {
        &self.alpha
    }

    pub fn get(&self, l: usize) -> T {
        self.alpha[l]
    }

    pub fn scale(&self, s: T) -> Self {
        ExpectationWeights {
            alpha: self.alpha.iter().map(|&a| a * s).collect(),
        }
    }
}

/// Model instance record: order, coefficient parameter, variance bound, and
/// entrywise bound.
#[derive(Clone, Debug)]
pub struct HpmSpec<T> {
    pub n: usize,
    pub m: usize,
    /// Coefficient parameter p of length m+1.
    pub p: Vec<T>,
    /// Bound on E‖W − E\[W\]‖_F².
    pub sigma2_bound: T,
    /// Entrywise bound B.
    pub entry_bound: T,
}

impl<T: Scalar> HpmSpec<T> {
    pub fn new(n: usize, m: usize, p: Vec<T>, sigma2_bound: T, entry_bound: T) -> Result<Self> {
        if p.len() != m + 1 {
            return Err(Error::OutOfRange(format!(
                "coefficient parameter must have m+1 = {} entries, got {}",
                m + 1,
                p.len()
            )));
        }
        if sigma2_bound < T::zero() || entry_bound < T::zero() {
            return Err(Error::OutOfRange(
                "sigma2_bound and entry_bound must be nonnegative".into(),
            ));
        }
        Ok(HpmSpec {
            n,
            m,
            p,
            sigma2_bound,
            entry_bound,
        })
    }
}

// ---------------------------------------------------------------------------
// Coefficient calculus
// ---------------------------------------------------------------------------

/// The combinatorial function
/// f(m, l, k) = Σ_{s=max(0,k-l)}^{min(k,m-l)} (-1)^s C(l, k-s) C(m-l, s),
/// exact in integer arithmetic. An empty summation range yields 0.
pub fn f_comb(m: usize, l: usize, k: usize) -> Result<i64> {
    if l > m || k > m {
        return Err(Error::OutOfRange(format!(
            "f_comb requires 0 <= l, k <= m; got m={m}, l={l}, k={k}"
        )));
    }
    let lo = k.saturating_sub(l);
    let hi = k.min(m - l);
    let mut acc: i128 = 0;
    for s in lo..=hi {
        let c1 = binomial(l as u64, (k - s) as u64).ok_or(Error::Overflow("f_comb"))? as i128;
        let c2 = binomial((m - l) as u64, s as u64).ok_or(Error::Overflow("f_comb"))? as i128;
        let term = c1 * c2;
        if s % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    i64::try_from(acc).map_err(|_| Error::Overflow("f_comb"))
}

/// Signal level F(m, p): the minimum of the two binomially weighted sums of
/// Σ_k p_k f(m, l, k) over l = 1..m and l = 0..m-1.
pub fn big_f<T: Scalar>(m: usize, p: &[T]) -> Result<T> {
    if p.len() != m + 1 {
        return Err(Error::OutOfRange(format!(
            "p must have m+1 = {} entries, got {}",
            m + 1,
            p.len()
        )));
    }
    let g = |l: usize| -> Result<T> {
        let mut acc = T::zero();
        for (k, &pk) in p.iter().enumerate() {
            acc += pk * real::<T>(f_comb(m, l, k)? as f64);
        }
        Ok(acc)
    };
    let mut upper = T::zero();
    for l in 1..=m {
        let c = binomial((m - 1) as u64, (l - 1) as u64).ok_or(Error::Overflow("big_f"))?;
        upper += real::<T>(c as f64) * g(l)?;
    }
    let mut lower = T::zero();
    for l in 0..m {
        let c = binomial((m - 1) as u64, l as u64).ok_or(Error::Overflow("big_f"))?;
        lower += real::<T>(c as f64) * g(l)?;
    }
    Ok(upper.min(lower))
}

/// Closed form of F in terms of the expectation weights, with the
/// alternating signs that the f-based definition induces:
/// min(Σ_{l=0}^{m-1} (-1)^l C(m-1,l) α_l, Σ_{l=1}^{m} (-1)^l C(m-1,l-1) α_l).
pub fn big_f_from_alpha<T: Scalar>(alpha: &ExpectationWeights<T>) -> Result<T> {
    let m = alpha.order();
    let mut first = T::zero();
    for l in 0..m {
        let c = binomial((m - 1) as u64, l as u64).ok_or(Error::Overflow("big_f_from_alpha"))?;
        let sign = if l % 2 == 0 { T::one() } else { -T::one() };
        first += sign * real::<T>(c as f64) * alpha.get(l);
    }
    let mut second = T::zero();
    for l in 1..=m {
        let c =
            binomial((m - 1) as u64, (l - 1) as u64).ok_or(Error::Overflow("big_f_from_alpha"))?;
        let sign = if l % 2 == 0 { T::one() } else { -T::one() };
        second += sign * real::<T>(c as f64) * alpha.get(l);
    }
    Ok(first.min(second))
}

/// The (m+1)×(m+1) linear map between coefficients and expectation weights:
/// Lp = α. Row i, column j (1-based) is (-1)^{i-1} f(m, i-1, j-1).
pub fn l_matrix(m: usize) -> Result<Vec<Vec<i64>>> {
    if m < 1 {
        return Err(Error::OutOfRange("l_matrix requires m >= 1".into()));
    }
    let mut rows = Vec::with_capacity(m + 1);
    for l in 0..=m {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let mut row = Vec::with_capacity(m + 1);
        for k in 0..=m {
            row.push(sign * f_comb(m, l, k)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Solve Lp = α for p by partially pivoted elimination, with an explicit
/// residual check ‖Lp − α‖_∞ ≤ 1e-10 (scaled by the type's epsilon for
/// f32).
pub fn p_from_alpha<T: Scalar>(alpha: &ExpectationWeights<T>) -> Result<Vec<T>> {
    let m = alpha.order();
    let l_int = l_matrix(m)?;
    let size = m + 1;
    let mut a: Vec<Vec<T>> = l_int
        .iter()
        .map(|row| row.iter().map(|&v| real::<T>(v as f64)).collect())
        .collect();
    let mut b: Vec<T> = alpha.as_slice().to_vec();

    for col in 0..size {
        let pivot = (col..size)
            .max_by(|&i, &j| {
                a[i][col]
                    .abs()
                    .partial_cmp(&a[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if a[pivot][col].abs() <= real::<T>(1e-12) {
            return Err(Error::SingularSystem);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..size {
            let factor = a[row][col] / a[col][col];
            if factor == T::zero() {
                continue;
            }
            for k in col..size {
                let v = a[col][k];
                a[row][k] -= factor * v;
            }
            let bv = b[col];
            b[row] -= factor * bv;
        }
    }
    let mut p = vec![T::zero(); size];
    for row in (0..size).rev() {
        let mut acc = b[row];
        for k in row + 1..size {
            acc -= a[row][k] * p[k];
        }
        p[row] = acc / a[row][row];
    }

    let scale = alpha
        .as_slice()
        .iter()
        .fold(T::one(), |acc, &v| acc.max(v.abs()));
    let tolerance = real::<T>(1e-10).max(T::epsilon() * real::<T>(50.0) * scale);
    let mut residual = T::zero();
    for (i, row) in l_int.iter().enumerate() {
        let mut lp = T::zero();
        for (k, &v) in row.iter().enumerate() {
            lp += real::<T>(v as f64) * p[k];
        }
        residual = residual.max((lp - alpha.get(i)).abs());
    }
    if residual > tolerance {
        return Err(Error::ResidualTooLarge {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tolerance: tolerance.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(p)
}

/// α = Lp.
pub fn alpha_from_p<T: Scalar>(p: &[T]) -> Result<ExpectationWeights<T>> {
    if p.is_empty() {
        return Err(Error::OutOfRange("empty coefficient vector".into()));
    }
    let m = p.len() - 1;
    let l_int = l_matrix(m)?;
    let alpha = l_int
        .iter()
        .map(|row| {
            row.iter()
                .zip(p.iter())
                .map(|(&lij, &pj)| real::<T>(lij as f64) * pj)
                .sum()
        })
        .collect();
    ExpectationWeights::from_full(alpha)
}

// ---------------------------------------------------------------------------
// Expectation construction and statistical conditions
// ---------------------------------------------------------------------------

/// Expected affinity tensor: the canonical entry with l positive labels
/// (counting multiplicity) is α_l.
pub fn expected_tensor<T: Scalar>(
    y_star: &Assignment,
    alpha: &ExpectationWeights<T>,
) -> Result<SymmetricTensor<T>> {
    let n = y_star.len();
    let m = alpha.order();
    let mut entries = Vec::new();
    for idx in canonical_indices(n, m)? {
        let l = y_star.positive_count(&idx);
        let v = alpha.get(l);
        if v != T::zero() {
            entries.push((idx, v));
        }
    }
    SymmetricTensor::from_entries(n, m, entries)
}

/// Closed-form expected diagonal of the constructed dual variable, as a
/// (value at +1 nodes, value at -1 nodes) pair:
/// (n/2)^{m-1} Σ_l C(m-1, l-1) Σ_k p_k f(m,l,k) for l = 1..m on the positive
/// side, and the l = 0..m-1 analogue on the negative side.
pub fn expected_dual_diagonal<T: Scalar>(
    y_star: &Assignment,
    alpha: &ExpectationWeights<T>,
) -> Result<(T, T)> {
    let n = y_star.len();
    let m = alpha.order();
    let p = p_from_alpha(alpha)?;
    let g = |l: usize| -> Result<T> {
        let mut acc = T::zero();
        for (k, &pk) in p.iter().enumerate() {
            acc += pk * real::<T>(f_comb(m, l, k)? as f64);
        }
        Ok(acc)
    };
    let half_pow = real::<T>((n as f64 / 2.0).powi(m as i32 - 1));
    let mut pos = T::zero();
    for l in 1..=m {
        let c = binomial((m - 1) as u64, (l - 1) as u64)
            .ok_or(Error::Overflow("expected_dual_diagonal"))?;
        pos += real::<T>(c as f64) * g(l)?;
    }
    let mut neg = T::zero();
    for l in 0..m {
        let c = binomial((m - 1) as u64, l as u64)
            .ok_or(Error::Overflow("expected_dual_diagonal"))?;
        neg += real::<T>(c as f64) * g(l)?;
    }
    Ok((half_pow * pos, half_pow * neg))
}

/// Outcome of the statistical-condition check.
#[derive(Clone, Debug)]
pub struct RecoveryConditions<T> {
    pub f_value: T,
    pub f_positive: bool,
    pub lhs_b: T,
    pub rhs_b: T,
    pub lhs_sigma: T,
    pub rhs_sigma: T,
    pub satisfied: bool,
}

/// Evaluate the exact-partitioning conditions for a model instance:
/// F > 0, (2^{1-m}F − p₀)²/B² ≥ 16·ln(n)/n − 8·ln(c0)/n, and
/// (2^{1-m}F − p₀)²/σ² ≥ (4/c1)·n^{1-m}.
pub fn recovery_conditions<T: Scalar>(spec: &HpmSpec<T>, c0: f64, c1: f64) -> Result<RecoveryConditions<T>> {
    let f_value = big_f(spec.m, &spec.p)?;
    Ok(recovery_conditions_from(
        f_value,
        spec.p[0],
        spec.m,
        spec.n,
        spec.entry_bound,
        spec.sigma2_bound,
        c0,
        c1,
    ))
}

/// The condition arithmetic with F and p₀ supplied directly.
#[allow(clippy::too_many_arguments)]
pub fn recovery_conditions_from<T: Scalar>(
    f_value: T,
    p0: T,
    m: usize,
    n: usize,
    entry_bound: T,
    sigma2_bound: T,
    c0: f64,
    c1: f64,
) -> RecoveryConditions<T> {
    let nf = n as f64;
    let gap = real::<T>(2f64.powi(1 - m as i32)) * f_value - p0;
    let gap2 = gap * gap;
    let lhs_b = gap2 / (entry_bound * entry_bound);
    let rhs_b = real::<T>(16.0 * nf.ln() / nf - 8.0 * c0.ln() / nf);
    let lhs_sigma = gap2 / sigma2_bound;
    let rhs_sigma = real::<T>(4.0 / c1 * nf.powi(1 - m as i32));
    let f_positive = f_value > T::zero();
    RecoveryConditions {
        f_value,
        f_positive,
        lhs_b,
        rhs_b,
        lhs_sigma,
        rhs_sigma,
        satisfied: f_positive && lhs_b >= rhs_b && lhs_sigma >= rhs_sigma,
    }
}

// ---------------------------------------------------------------------------
// Model 1: high-order counts
// ---------------------------------------------------------------------------

/// Parameters of the counting model: compact weights over minority-group
/// size and the binomial trial count T.
#[derive(Clone, Debug)]
pub struct CountsParams<T> {
    pub alpha_compact: Vec<T>,
    pub trials: u32,
    /// When set, entries at repeated indices are zero instead of sampled.
    pub zero_repeats: bool,
}

impl<T: Scalar> CountsParams<T> {
    pub fn order(&self) -> usize {
        2 * (self.alpha_compact.len() - 1)
    }

    fn validate(&self) -> Result<()> {
        if self.alpha_compact.len() < 2 {
            return Err(Error::InvalidParam {
                key: "alpha".into(),
                message: "need at least 2 compact weights".into(),
            });
        }
        for &a in &self.alpha_compact {
            if a < T::zero() || a > T::one() {
                return Err(Error::InvalidParam {
                    key: "alpha".into(),
                    message: "probabilities must lie in [0, 1]".into(),
                });
            }
        }
        if self.trials == 0 {
            return Err(Error::InvalidParam {
                key: "T".into(),
                message: "trial count must be positive".into(),
            });
        }
        Ok(())
    }
}

/// One BIN(T, α_{min(l, m-l)}) draw per canonical multi-index, where l is
/// the number of +1 labels counting multiplicity. Symmetric by construction.
pub fn sample_counts<T: Scalar, R: Rng>(
    params: &CountsParams<T>,
    y_star: &Assignment,
    rng: &mut R,
) -> Result<SymmetricTensor<T>> {
    params.validate()?;
    let n = y_star.len();
    let m = params.order();
    let mut entries = Vec::new();
    for idx in canonical_indices(n, m)? {
        if params.zero_repeats && idx.has_repeats() {
            continue;
        }
        let l = y_star.positive_count(&idx);
        let p = params.alpha_compact[l.min(m - l)].to_f64().unwrap();
        let mut count = 0u32;
        for _ in 0..params.trials {
            if rng.random::<f64>() < p {
                count += 1;
            }
        }
        if count > 0 {
            entries.push((idx, real::<T>(count as f64)));
        }
    }
    SymmetricTensor::from_entries(n, m, entries)
}

/// Reparametrize the counting model: p solves the linear system for the
/// scaled weights, B = T, and σ² is the conservative sum of entrywise
/// binomial variances n^m · T · max_l α_l(1−α_l).
pub fn hpm_of_counts<T: Scalar>(params: &CountsParams<T>, n: usize) -> Result<HpmSpec<T>> {
    params.validate()?;
    let m = params.order();
    let t = real::<T>(params.trials as f64);
    let alpha = ExpectationWeights::from_compact(&params.alpha_compact)?.scale(t);
    let p = p_from_alpha(&alpha)?;
    let max_var = params
        .alpha_compact
        .iter()
        .map(|&a| a * (T::one() - a))
        .fold(T::zero(), |acc, v| acc.max(v));
    let sigma2 = real::<T>((n as f64).powi(m as i32)) * t * max_var;
    HpmSpec::new(n, m, p, sigma2, t)
}

// ---------------------------------------------------------------------------
// Model 3: minimum bisection
// ---------------------------------------------------------------------------

/// Parameters of the bisection model: per-position flip probability q.
#[derive(Clone, Debug)]
pub struct BisectionParams<T> {
    pub q: T,
    pub zero_repeats: bool,
}

impl<T: Scalar> BisectionParams<T> {
    fn validate(&self) -> Result<()> {
        if self.q <= T::zero() || self.q >= T::one() {
            return Err(Error::InvalidParam {
                key: "q".into(),
                message: "activation parameter must lie in (0, 1)".into(),
            });
        }
        Ok(())
    }
}

/// Per canonical multi-index: draw the activation vector b by copying each
/// position's label and flipping it with probability q; the entry is 1 iff
/// all activations agree. Repeated indices are sampled the same way unless
/// `zero_repeats` is set.
pub fn sample_bisection<T: Scalar, R: Rng>(
    params: &BisectionParams<T>,
    y_star: &Assignment,
    rng: &mut R,
    m: usize,
) -> Result<SymmetricTensor<T>> {
    params.validate()?;
    let n = y_star.len();
    let q = params.q.to_f64().unwrap();
    let mut entries = Vec::new();
    for idx in canonical_indices(n, m)? {
        if params.zero_repeats && idx.has_repeats() {
            continue;
        }
        let mut first = 0i8;
        let mut all_equal = true;
        for (j, &i) in idx.as_slice().iter().enumerate() {
            let mut b = y_star.labels()[i as usize];
            if rng.random::<f64>() < q {
                b = -b;
            }
            if j == 0 {
                first = b;
            } else if b != first {
                all_equal = false;
            }
        }
        if all_equal {
            entries.push((idx, T::one()));
        }
    }
    SymmetricTensor::from_entries(n, m, entries)
}

/// Expectation weights of the bisection model by exact enumeration of the
/// 2^m activation outcomes: α_l = P(all activations equal | l positive
/// labels).
pub fn bisection_alpha<T: Scalar>(q: T, m: usize) -> Result<ExpectationWeights<T>> {
    if m < 1 {
        return Err(Error::OutOfRange("order must be >= 1".into()));
    }
    if m > 20 {
        return Err(Error::TooLarge(format!("enumeration over 2^{m} outcomes")));
    }
    let qf = q.to_f64().unwrap();
    let mut alpha = Vec::with_capacity(m + 1);
    for l in 0..=m {
        // Labels: l positives then m-l negatives; enumerate flip patterns.
        let mut prob = 0.0f64;
        for pattern in 0u32..(1 << m) {
            let mut p = 1.0f64;
            let mut first = 0i8;
            let mut all_equal = true;
            for j in 0..m {
                let label: i8 = if j < l { 1 } else { -1 };
                let flipped = (pattern >> j) & 1 == 1;
                p *= if flipped { qf } else { 1.0 - qf };
                let b = if flipped { -label } else { label };
                if j == 0 {
                    first = b;
                } else if b != first {
                    all_equal = false;
                    break;
                }
            }
            if all_equal {
                prob += p;
            }
        }
        alpha.push(real::<T>(prob));
    }
    ExpectationWeights::from_full(alpha)
}

/// Reparametrize the bisection model (B = 1, conservative entrywise
/// Bernoulli variance bound).
pub fn hpm_of_bisection<T: Scalar>(
    params: &BisectionParams<T>,
    m: usize,
    n: usize,
) -> Result<HpmSpec<T>> {
    params.validate()?;
    let alpha = bisection_alpha(params.q, m)?;
    let p = p_from_alpha(&alpha)?;
    let max_var = alpha
        .as_slice()
        .iter()
        .map(|&a| a * (T::one() - a))
        .fold(T::zero(), |acc, v| acc.max(v));
    let sigma2 = real::<T>((n as f64).powi(m as i32)) * max_var;
    HpmSpec::new(n, m, p, sigma2, T::one())
}

// ---------------------------------------------------------------------------
// Model 2: hypergraph cuts (order fixed to 4)
// ---------------------------------------------------------------------------

/// Parameters of the hypergraph-cut model: the order-4 counting weights of
/// the underlying hypergraph and the vertex count.
#[derive(Clone, Debug)]
pub struct CutsParams<T> {
    pub alpha_compact: Vec<T>,
    pub n: usize,
}

impl<T: Scalar> CutsParams<T> {
    fn validate(&self) -> Result<()> {
        if self.alpha_compact.len() != 3 {
            return Err(Error::InvalidParam {
                key: "alpha".into(),
                message: "cut model is order 4 and needs 3 compact weights".into(),
            });
        }
        for &a in &self.alpha_compact {
            if a < T::zero() || a > T::one() {
                return Err(Error::InvalidParam {
                    key: "alpha".into(),
                    message: "probabilities must lie in [0, 1]".into(),
                });
            }
        }
        if self.n < 4 {
            return Err(Error::InvalidParam {
                key: "n".into(),
                message: "need at least 4 vertices".into(),
            });
        }
        Ok(())
    }
}

fn four_subsets(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Sample a 4-uniform hypergraph (one Bernoulli per 4-subset of distinct
/// vertices, Model-1 probabilities with T = 1), then store at each distinct
/// 4-subset its cut size: the number of hyperedges intersecting the subset,
/// excluding the subset itself. Repeated-index entries are 0.
pub fn sample_cuts<T: Scalar, R: Rng>(
    params: &CutsParams<T>,
    y_star: &Assignment,
    rng: &mut R,
) -> Result<SymmetricTensor<T>> {
    params.validate()?;
    let n = params.n;
    if y_star.len() != n {
        return Err(Error::InvalidAssignment(format!(
            "labeling has {} entries, model has n={n}",
            y_star.len()
        )));
    }
    let subsets = four_subsets(n);
    let mut edges: Vec<bool> = Vec::with_capacity(subsets.len());
    for s in &subsets {
        let l = s.iter().filter(|&&i| y_star.is_positive(i)).count();
        let p = params.alpha_compact[l.min(4 - l)].to_f64().unwrap();
        edges.push(rng.random::<f64>() < p);
    }
    let total_edges = edges.iter().filter(|&&e| e).count() as i64;
    let mut entries = Vec::new();
    for (si, s) in subsets.iter().enumerate() {
        // Edges disjoint from s, i.e. fully inside the other n-4 vertices.
        let mut inside = 0i64;
        for (ei, e) in subsets.iter().enumerate() {
            if edges[ei] && e.iter().all(|v| !s.contains(v)) {
                inside += 1;
            }
        }
        let own = if edges[si] { 1 } else { 0 };
        let cut = total_edges - inside - own;
        if cut != 0 {
            let idx = MultiIndex::new(s, n)?;
            entries.push((idx, real::<T>(cut as f64)));
        }
    }
    SymmetricTensor::from_entries(n, 4, entries)
}

/// Expected cut size of a distinct-vertex tuple under the cut model, by
/// linearity of expectation: Σ_j α_{min(j,4-j)} · [C(n⁺,j)C(n⁻,4-j) −
/// C(n⁺−s⁺,j)C(n⁻−s⁻,4-j)] − α_{min(l_S,4-l_S)}, where (s⁺, s⁻) counts the
/// tuple's labels and the bracket counts 4-subsets with j positives that
/// intersect the tuple.
pub fn expected_cut<T: Scalar>(
    alpha_compact: &[T],
    tuple_labels: &[i8],
    n_pos: usize,
    n_neg: usize,
) -> Result<T> {
    if alpha_compact.len() != 3 {
        return Err(Error::OutOfRange("need 3 compact weights".into()));
    }
    if tuple_labels.len() != 4 {
        return Err(Error::OutOfRange("tuple must have 4 labels".into()));
    }
    if n_pos != n_neg {
        return Err(Error::OutOfRange("groups must be balanced".into()));
    }
    let s_pos = tuple_labels.iter().filter(|&&l| l > 0).count();
    let s_neg = 4 - s_pos;
    if s_pos > n_pos || s_neg > n_neg {
        return Err(Error::OutOfRange("tuple labels exceed group sizes".into()));
    }
    let choose = |a: usize, b: usize| -> T {
        real::<T>(binomial(a as u64, b as u64).unwrap_or(0) as f64)
    };
    let mut acc = T::zero();
    for j in 0..=4usize {
        let total = choose(n_pos, j) * choose(n_neg, 4 - j);
        let avoiding = choose(n_pos - s_pos, j) * choose(n_neg - s_neg, 4 - j);
        acc += alpha_compact[j.min(4 - j)] * (total - avoiding);
    }
    acc -= alpha_compact[s_pos.min(4 - s_pos)];
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Model 4: motif clustering
// ---------------------------------------------------------------------------

/// A small directed graph with no self-loops, used both for motif patterns
/// and induced subgraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Motif {
    size: usize,
    adj: Vec<bool>,
}

impl Motif {
    pub fn empty(size: usize) -> Self {
        Motif {
            size,
            adj: vec![false; size * size],
        }
    }

    pub fn from_edges(size: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut motif = Motif::empty(size);
        for &(a, b) in edges {
            if a >= size || b >= size {
                return Err(Error::OutOfRange(format!(
                    "edge ({a}, {b}) out of range for {size} vertices"
                )));
            }
            if a == b {
                return Err(Error::OutOfRange(format!("self-loop at vertex {a}")));
            }
            motif.adj[a * size + b] = true;
        }
        Ok(motif)
    }

    pub fn complete(size: usize) -> Self {
        let mut motif = Motif::empty(size);
        for a in 0..size {
            for b in 0..size {
                if a != b {
                    motif.adj[a * size + b] = true;
                }
            }
        }
        motif
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a * self.size + b]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&e| e).count()
    }

    fn permuted(&self, perm: &[usize]) -> Vec<bool> {
        let s = self.size;
        let mut out = vec![false; s * s];
        for a in 0..s {
            for b in 0..s {
                if a != b && self.adj[a * s + b] {
                    out[perm[a] * s + perm[b]] = true;
                }
            }
        }
        out
    }
}

fn for_each_permutation<F: FnMut(&[usize])>(m: usize, mut f: F) {
    let mut perm: Vec<usize> = (0..m).collect();
    // Heap's algorithm.
    let mut c = vec![0usize; m];
    f(&perm);
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// True iff some relabeling of the motif's vertices maps it edge-for-edge
/// onto the induced graph, with exact edge-set equality (no extra edges).
pub fn motif_match(induced: &Motif, motif: &Motif) -> Result<bool> {
    if induced.size != motif.size {
        return Err(Error::ShapeMismatch {
            expected_n: motif.size,
            expected_m: 0,
            got_n: induced.size,
            got_m: 0,
        });
    }
    let mut found = false;
    for_each_permutation(motif.size, |perm| {
        if found {
            return;
        }
        if motif.permuted(perm) == induced.adj {
            found = true;
        }
    });
    Ok(found)
}

/// Parameters of the motif model: the pattern and the four group-pair edge
/// probabilities (α_{1,1}, α_{2,2}, α_{1,2}, α_{2,1}), group 1 being the +1
/// group.
#[derive(Clone, Debug)]
pub struct MotifParams<T> {
    pub motif: Motif,
    pub alpha4: [T; 4],
}

impl<T: Scalar> MotifParams<T> {
    fn validate(&self) -> Result<()> {
        for &a in &self.alpha4 {
            if a < T::zero() || a > T::one() {
                return Err(Error::InvalidParam {
                    key: "alpha4".into(),
                    message: "probabilities must lie in [0, 1]".into(),
                });
            }
        }
        if self.motif.size < 2 {
            return Err(Error::InvalidParam {
                key: "motif_edges".into(),
                message: "motif needs at least 2 vertices".into(),
            });
        }
        Ok(())
    }

    fn edge_probability(&self, from_positive: bool, to_positive: bool) -> T {
        match (from_positive, to_positive) {
            (true, true) => self.alpha4[0],
            (false, false) => self.alpha4[1],
            (true, false) => self.alpha4[2],
            (false, true) => self.alpha4[3],
        }
    }
}

/// Sample the full directed graph once (each ordered pair independently with
/// its group-pair probability), then mark each m-subset of distinct vertices
/// whose induced subgraph forms the motif exactly. Repeated-index entries
/// are 0.
pub fn sample_motif<T: Scalar, R: Rng>(
    params: &MotifParams<T>,
    y_star: &Assignment,
    rng: &mut R,
) -> Result<SymmetricTensor<T>> {
    params.validate()?;
    let n = y_star.len();
    let m = params.motif.size;
    let mut adj = vec![false; n * n];
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let p = params
                .edge_probability(y_star.is_positive(u), y_star.is_positive(v))
                .to_f64()
                .unwrap();
            adj[u * n + v] = rng.random::<f64>() < p;
        }
    }
    let mut entries = Vec::new();
    let mut subset = vec![0usize; m];
    // Enumerate m-subsets of [n] in lexicographic order.
    enumerate_subsets(n, m, &mut subset, 0, 0, &mut |s: &[usize]| {
        let mut induced = Motif::empty(m);
        for (ai, &a) in s.iter().enumerate() {
            for (bi, &b) in s.iter().enumerate() {
                if ai != bi && adj[a * n + b] {
                    induced.adj[ai * m + bi] = true;
                }
            }
        }
        if motif_match(&induced, &params.motif).expect("sizes match") {
            entries.push((MultiIndex::new(s, n).expect("valid subset"), T::one()));
        }
    });
    SymmetricTensor::from_entries(n, m, entries)
}

fn enumerate_subsets<F: FnMut(&[usize])>(
    n: usize,
    m: usize,
    subset: &mut Vec<usize>,
    depth: usize,
    start: usize,
    f: &mut F,
) {
    if depth == m {
        f(subset);
        return;
    }
    for v in start..n {
        if n - v < m - depth {
            break;
        }
        subset[depth] = v;
        enumerate_subsets(n, m, subset, depth + 1, v + 1, f);
    }
}

/// Exact probability that an m-tuple with the given labels forms the motif:
/// the sum, over distinct permuted images of the motif's edge set, of the
/// product over all ordered pairs of the edge (or non-edge) probability.
pub fn motif_probability<T: Scalar>(
    motif: &Motif,
    tuple_labels: &[i8],
    alpha4: &[T; 4],
) -> Result<T> {
    let m = motif.size;
    if tuple_labels.len() != m {
        return Err(Error::OutOfRange(format!(
            "expected {m} labels, got {}",
            tuple_labels.len()
        )));
    }
    if m > 5 {
        return Err(Error::TooLarge(
            "motif probability enumerates m! permutations; m <= 5 required".into(),
        ));
    }
    let params = MotifParams {
        motif: motif.clone(),
        alpha4: *alpha4,
    };
    params.validate()?;
    let mut images: Vec<Vec<bool>> = Vec::new();
    for_each_permutation(m, |perm| {
        let image = motif.permuted(perm);
        if !images.contains(&image) {
            images.push(image);
        }
    });
    let mut total = T::zero();
    for image in &images {
        let mut prob = T::one();
        for a in 0..m {
            for b in 0..m {
                if a == b {
                    continue;
                }
                let p = params
                    .edge_probability(tuple_labels[a] > 0, tuple_labels[b] > 0);
                prob *= if image[a * m + b] { p } else { T::one() - p };
            }
        }
        total += prob;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn strong_alpha() -> ExpectationWeights<f64> {
        ExpectationWeights::from_full(vec![0.9, 0.1, 0.0, 0.1, 0.9]).unwrap()
    }

    #[test]
    fn f_comb_first_row_is_alternating_binomials() {
        let row: Vec<i64> = (0..=4).map(|k| f_comb(4, 0, k).unwrap()).collect();
        assert_eq!(row, vec![1, -4, 6, -4, 1]);
    }

    #[test]
    fn f_comb_k_zero_is_one() {
        for m in [2usize, 4, 6] {
            for l in 0..=m {
                assert_eq!(f_comb(m, l, 0).unwrap(), 1);
            }
        }
    }

    #[test]
    fn f_comb_second_row() {
        let row: Vec<i64> = (0..=4).map(|k| f_comb(4, 1, k).unwrap()).collect();
        assert_eq!(row, vec![1, -2, 0, 2, -1]);
    }

    #[test]
    fn f_comb_rejects_out_of_range() {
        assert!(f_comb(4, 5, 0).is_err());
        assert!(f_comb(4, 0, 5).is_err());
    }

    #[test]
    fn l_matrix_order_four_matches_closed_form() {
        let l = l_matrix(4).unwrap();
        assert_eq!(
            l,
            vec![
                vec![1, -4, 6, -4, 1],
                vec![-1, 2, 0, -2, 1],
                vec![1, 0, -2, 0, 1],
                vec![-1, -2, 0, 2, 1],
                vec![1, 4, 6, 4, 1],
            ]
        );
    }

    #[test]
    fn l_matrix_is_signed_f() {
        for m in [2usize, 4, 6] {
            let l = l_matrix(m).unwrap();
            for i in 0..=m {
                for j in 0..=m {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    assert_eq!(l[i][j], sign * f_comb(m, i, j).unwrap());
                }
            }
        }
    }

    #[test]
    fn p_from_alpha_strong_setting() {
        let p = p_from_alpha(&strong_alpha()).unwrap();
        let expect = [0.0625, 0.0, 0.1125, 0.0, 0.1625];
        for (a, b) in p.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn constant_alpha_needs_only_top_coefficient() {
        let c = 0.37f64;
        let alpha = ExpectationWeights::from_full(vec![c; 5]).unwrap();
        let p = p_from_alpha(&alpha).unwrap();
        for (k, &pk) in p.iter().enumerate() {
            let expect = if k == 4 { c } else { 0.0 };
            assert!((pk - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_p_round_trip() {
        let alpha = ExpectationWeights::from_full(vec![0.3f64, -1.2, 0.05, 2.0, 0.9]).unwrap();
        let p = p_from_alpha(&alpha).unwrap();
        let back = alpha_from_p(&p).unwrap();
        for (a, b) in back.as_slice().iter().zip(alpha.as_slice()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn big_f_reference_values() {
        let p_strong = p_from_alpha(&strong_alpha()).unwrap();
        assert!((big_f(4, &p_strong).unwrap() - 0.5).abs() < 1e-12);
        let weak = ExpectationWeights::from_full(vec![0.6f64, 0.4, 0.0, 0.4, 0.6]).unwrap();
        let p_weak = p_from_alpha(&weak).unwrap();
        assert!((big_f(4, &p_weak).unwrap() + 1.0).abs() < 1e-12);
        // Constant tensor carries no signal.
        let p_const = p_from_alpha(&ExpectationWeights::from_full(vec![0.2f64; 5]).unwrap()).unwrap();
        assert!(big_f(4, &p_const).unwrap().abs() < 1e-12);
    }

    #[test]
    fn big_f_alpha_form_agrees() {
        let alphas = [
            vec![0.9f64, 0.1, 0.0, 0.1, 0.9],
            vec![0.6, 0.4, 0.0, 0.4, 0.6],
            vec![0.25, 0.5, 0.75, 0.5, 0.1],
        ];
        for a in alphas {
            let alpha = ExpectationWeights::from_full(a).unwrap();
            let p = p_from_alpha(&alpha).unwrap();
            let via_p = big_f(4, &p).unwrap();
            let via_alpha = big_f_from_alpha(&alpha).unwrap();
            assert!((via_p - via_alpha).abs() < 1e-10);
        }
    }

    #[test]
    fn expected_tensor_entries() {
        let y = Assignment::new(vec![1, 1, -1, -1]).unwrap();
        let t = expected_tensor(&y, &strong_alpha()).unwrap();
        let all_pos = MultiIndex::new(&[0, 0, 0, 0], 4).unwrap();
        assert_eq!(t.get(&all_pos), 0.9);
        let mixed = MultiIndex::new(&[0, 1, 2, 3], 4).unwrap();
        assert_eq!(t.get(&mixed), 0.0);
        let three = MultiIndex::new(&[0, 1, 1, 2], 4).unwrap();
        assert_eq!(t.get(&three), 0.1);
    }

    #[test]
    fn expected_tensor_constant_alpha() {
        let y = Assignment::new(vec![1, -1]).unwrap();
        let alpha = ExpectationWeights::from_full(vec![0.5f64; 3]).unwrap();
        let t = expected_tensor(&y, &alpha).unwrap();
        for (_, v) in t.entries() {
            assert_eq!(*v, 0.5);
        }
        assert_eq!(t.num_entries(), 3);
    }

    #[test]
    fn expected_dual_diagonal_strong_setting() {
        let y = Assignment::random_balanced(20, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let (pos, neg) = expected_dual_diagonal(&y, &strong_alpha()).unwrap();
        assert!((pos - 500.0).abs() < 1e-9, "positive-side value {pos}");
        assert!((neg - 500.0).abs() < 1e-9, "negative-side value {neg}");
        // Proof-side lower bound.
        let p = p_from_alpha(&strong_alpha()).unwrap();
        let f = big_f(4, &p).unwrap();
        let bound = 10f64.powi(3) * f;
        assert!(pos >= bound - 1e-9 && neg >= bound - 1e-9);
    }

    #[test]
    fn expected_dual_diagonal_constant_alpha_vanishes() {
        let y = Assignment::new(vec![1, 1, -1, -1]).unwrap();
        let alpha = ExpectationWeights::from_full(vec![0.7f64; 5]).unwrap();
        let (pos, neg) = expected_dual_diagonal(&y, &alpha).unwrap();
        assert!(pos.abs() < 1e-10 && neg.abs() < 1e-10);
    }

    #[test]
    fn expected_dual_diagonal_m2_brute_force() {
        // m = 2: E V*_ii = Σ_{i2} α_{l(i, i2)} y_i y_{i2} summed over all i2.
        for n in [4usize, 6, 8] {
            let y = Assignment::random_balanced(n, &mut ChaCha8Rng::seed_from_u64(n as u64))
                .unwrap();
            let alpha =
                ExpectationWeights::from_full(vec![0.8f64, 0.15, 0.65]).unwrap();
            let (pos, neg) = expected_dual_diagonal(&y, &alpha).unwrap();
            for i in 0..n {
                let yi = y.labels()[i] as f64;
                let mut acc = 0.0;
                for i2 in 0..n {
                    let l = (y.labels()[i] > 0) as usize + (y.labels()[i2] > 0) as usize;
                    acc += alpha.get(l) * yi * y.labels()[i2] as f64;
                }
                let expect = if y.labels()[i] > 0 { pos } else { neg };
                assert!((acc - expect).abs() < 1e-10, "node {i}: {acc} vs {expect}");
            }
        }
    }

    #[test]
    fn theorem1_strong_setting_gap_is_zero() {
        let params = CountsParams {
            alpha_compact: vec![0.9f64, 0.1, 0.0],
            trials: 1,
            zero_repeats: false,
        };
        let spec = hpm_of_counts(&params, 20).unwrap();
        let report = recovery_conditions(&spec, 1.0, 1.0).unwrap();
        assert!(report.f_positive);
        assert!(report.lhs_b.abs() < 1e-10);
        assert!(!report.satisfied);
    }

    #[test]
    fn theorem1_arithmetic_examples() {
        let r = recovery_conditions_from(1.0f64, 0.0, 4, 100, 1.0, 1.0, 1.0, 1.0);
        assert!((r.lhs_b - 1.0 / 64.0).abs() < 1e-10);
        assert!((r.rhs_b - 16.0 * (100f64).ln() / 100.0).abs() < 1e-10);
        assert!(r.lhs_b < r.rhs_b);
        assert!(!r.satisfied);

        let r2 = recovery_conditions_from(1.0f64, 0.0, 4, 100, 0.05, 1.0, 1.0, 1.0);
        assert!((r2.lhs_b - 6.25).abs() < 1e-10);
        assert!(r2.lhs_b >= r2.rhs_b);
    }

    #[test]
    fn theorem1_zero_denominators_give_infinite_lhs() {
        let r = recovery_conditions_from(1.0f64, 0.0, 4, 100, 0.0, 0.0, 1.0, 1.0);
        assert!(r.lhs_b.is_infinite() && r.lhs_b > 0.0);
        assert!(r.lhs_sigma.is_infinite());
        assert!(r.satisfied);
    }

    #[test]
    fn sample_counts_extremes() {
        let y = Assignment::new(vec![1, 1, -1, -1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sure = CountsParams {
            alpha_compact: vec![1.0, 1.0, 1.0],
            trials: 1,
            zero_repeats: false,
        };
        let w = sample_counts(&sure, &y, &mut rng).unwrap();
        assert!(w.entries().iter().all(|(_, v)| *v == 1.0));
        assert_eq!(w.num_entries(), 35); // sym_dim(4, 4)

        let never = CountsParams {
            alpha_compact: vec![0.0, 0.0, 0.0],
            trials: 3,
            zero_repeats: false,
        };
        let z = sample_counts(&never, &y, &mut rng).unwrap();
        assert_eq!(z.num_entries(), 0);
    }

    #[test]
    fn sample_counts_bounded_by_trials() {
        let y = Assignment::new(vec![1, -1, 1, -1, 1, -1]).unwrap();
        let params = CountsParams {
            alpha_compact: vec![0.7, 0.4, 0.5],
            trials: 5,
            zero_repeats: false,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let w = sample_counts(&params, &y, &mut rng).unwrap();
        for (_, v) in w.entries() {
            assert!(*v >= 0.0 && *v <= 5.0);
        }
    }

    #[test]
    fn hpm_of_counts_examples() {
        let params = CountsParams {
            alpha_compact: vec![0.9f64, 0.1, 0.0],
            trials: 1,
            zero_repeats: false,
        };
        let spec = hpm_of_counts(&params, 8).unwrap();
        assert_eq!(spec.entry_bound, 1.0);
        let expect_p = [0.0625, 0.0, 0.1125, 0.0, 0.1625];
        for (a, b) in spec.p.iter().zip(expect_p.iter()) {
            assert!((a - b).abs() < 1e-12);
        }

        let deterministic = CountsParams {
            alpha_compact: vec![1.0, 1.0, 1.0],
            trials: 2,
            zero_repeats: false,
        };
        assert_eq!(hpm_of_counts(&deterministic, 6).unwrap().sigma2_bound, 0.0);

        let half = CountsParams {
            alpha_compact: vec![0.5f64, 0.5, 0.5],
            trials: 4,
            zero_repeats: false,
        };
        let spec = hpm_of_counts(&half, 4).unwrap();
        assert!((spec.sigma2_bound - 256.0).abs() < 1e-9);
    }

    #[test]
    fn bisection_alpha_matches_printed_formulas() {
        let q = 0.3f64;
        let alpha = bisection_alpha(q, 4).unwrap();
        assert!((alpha.get(4) - (q.powi(4) + (1.0 - q).powi(4))).abs() < 1e-12);
        assert!((alpha.get(4) - 0.2482).abs() < 1e-12);
        assert!((alpha.get(3) - 0.1218).abs() < 1e-12);
        assert!((alpha.get(2) - 0.0882).abs() < 1e-12);
        // q = 1/2 washes everything to 2^{1-m}.
        let flat = bisection_alpha(0.5f64, 4).unwrap();
        for l in 0..=4 {
            assert!((flat.get(l) - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn bisection_enumeration_matches_closed_form_random_q() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let q: f64 = rng.random_range(0.01..0.99);
            let alpha = bisection_alpha(q, 4).unwrap();
            let r = 1.0 - q;
            let expect = [
                q.powi(4) + r.powi(4),
                q * r.powi(3) + q.powi(3) * r,
                2.0 * q.powi(2) * r.powi(2),
                q * r.powi(3) + q.powi(3) * r,
                q.powi(4) + r.powi(4),
            ];
            for l in 0..=4 {
                assert!((alpha.get(l) - expect[l]).abs() < 1e-12, "q={q}, l={l}");
            }
        }
    }

    #[test]
    fn sample_bisection_near_deterministic_q() {
        let y = Assignment::new(vec![1, 1, -1, -1]).unwrap();
        let params = BisectionParams {
            q: 1e-12,
            zero_repeats: false,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = sample_bisection(&params, &y, &mut rng, 4).unwrap();
        // b = y* almost surely: entry 1 iff all labels agree.
        for idx in canonical_indices(4, 4).unwrap() {
            let l = y.positive_count(&idx);
            let expect = if l == 0 || l == 4 { 1.0 } else { 0.0 };
            assert_eq!(w.get(&idx), expect, "index {idx}");
        }
    }

    #[test]
    fn sample_bisection_rejects_bad_q() {
        let y = Assignment::new(vec![1, -1]).unwrap();
        let params = BisectionParams {
            q: 0.0,
            zero_repeats: false,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(sample_bisection(&params, &y, &mut rng, 2).is_err());
    }

    #[test]
    fn expected_cut_all_edges() {
        // Every 4-subset of 8 vertices is an edge: each tuple's cut is
        // C(8,4) - C(4,4) - 1 = 68.
        let alpha = [1.0f64, 1.0, 1.0];
        for labels in [[1i8, 1, 1, 1], [1, 1, -1, -1], [1, -1, -1, -1]] {
            let c = expected_cut(&alpha, &labels, 4, 4).unwrap();
            assert!((c - 68.0).abs() < 1e-10, "labels {labels:?}: {c}");
        }
        let zero = expected_cut(&[0.0f64, 0.0, 0.0], &[1, 1, -1, -1], 4, 4).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn expected_cut_matches_exhaustive_sum() {
        // n = 8, mixed alpha, all-positive tuple (0,1,2,3); compare against a
        // direct sum over all 70 subsets.
        let alpha = [0.9f64, 0.1, 0.0];
        let labels: Vec<i8> = vec![1, 1, 1, 1, -1, -1, -1, -1];
        let tuple = [0usize, 1, 2, 3];
        let mut direct = 0.0;
        for s in four_subsets(8) {
            if s == tuple {
                continue;
            }
            if s.iter().any(|v| tuple.contains(v)) {
                let l = s.iter().filter(|&&v| labels[v] > 0).count();
                direct += alpha[l.min(4 - l)];
            }
        }
        let closed = expected_cut(&alpha, &[1, 1, 1, 1], 4, 4).unwrap();
        assert!((closed - direct).abs() < 1e-10, "{closed} vs {direct}");
    }

    #[test]
    fn sample_cuts_all_edges_case() {
        let y = Assignment::new(vec![1, 1, 1, 1, -1, -1, -1, -1]).unwrap();
        let params = CutsParams {
            alpha_compact: vec![1.0, 1.0, 1.0],
            n: 8,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let w = sample_cuts(&params, &y, &mut rng).unwrap();
        for s in four_subsets(8) {
            let idx = MultiIndex::new(&s, 8).unwrap();
            assert_eq!(w.get(&idx), 68.0);
        }
        // Repeated indices stay zero.
        assert_eq!(w.get(&MultiIndex::new(&[0, 0, 1, 2], 8).unwrap()), 0.0);

        let empty = CutsParams {
            alpha_compact: vec![0.0, 0.0, 0.0],
            n: 8,
        };
        let z = sample_cuts(&empty, &y, &mut rng).unwrap();
        assert_eq!(z.num_entries(), 0);
    }

    #[test]
    fn motif_match_examples() {
        let empty = Motif::empty(4);
        assert!(motif_match(&empty, &empty).unwrap());

        let cycle = Motif::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let relabeled = Motif::from_edges(4, &[(2, 0), (0, 3), (3, 1), (1, 2)]).unwrap();
        assert!(motif_match(&relabeled, &cycle).unwrap());

        let extra = Motif::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        assert!(!motif_match(&extra, &cycle).unwrap());
    }

    #[test]
    fn motif_probability_extremes() {
        let complete = Motif::complete(4);
        let p = motif_probability(&complete, &[1, 1, 1, 1], &[1.0f64, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(p, 1.0);
        let cycle = Motif::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let z = motif_probability(&cycle, &[1, 1, -1, -1], &[0.0f64, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(z, 0.0);
    }

    #[test]
    fn sample_motif_extremes() {
        let y = Assignment::new(vec![1, 1, -1, -1, 1, -1]).unwrap();
        let ones = [1.0f64, 1.0, 1.0, 1.0];
        let complete = MotifParams {
            motif: Motif::complete(4),
            alpha4: ones,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let w = sample_motif(&complete, &y, &mut rng).unwrap();
        assert_eq!(w.num_entries(), 15); // C(6,4) distinct subsets, all match

        let missing_edge = MotifParams {
            motif: Motif::from_edges(4, &[(0, 1), (1, 0), (2, 3)]).unwrap(),
            alpha4: ones,
        };
        let z = sample_motif(&missing_edge, &y, &mut rng).unwrap();
        assert_eq!(z.num_entries(), 0); // extra edges always present
    }

    #[test]
    fn assignment_validation() {
        assert!(Assignment::new(vec![1, -1, 1, -1]).is_ok());
        assert!(Assignment::new(vec![1, 1, -1]).is_err());
        assert!(Assignment::new(vec![1, 1, 1, -1]).is_err());
        assert!(Assignment::new(vec![1, 0, -1, -1]).is_err());
    }

    #[test]
    fn random_balanced_is_balanced_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let a = Assignment::random_balanced(10, &mut rng).unwrap();
        assert_eq!(a.labels().iter().map(|&l| l as i64).sum::<i64>(), 0);
        let mut rng2 = ChaCha8Rng::seed_from_u64(123);
        let b = Assignment::random_balanced(10, &mut rng2).unwrap();
        assert_eq!(a, b);
    }
}
