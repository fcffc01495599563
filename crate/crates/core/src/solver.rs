//! Projected-gradient solver for the relaxed partitioning problem, plus the
//! dual-certificate machinery, label extraction, agreement scoring, and an
//! exhaustive oracle for small instances.
//!
//! One gradient step adds ζW; the projection alternates a negative-direction
//! search (subtracting ⟨Y, v^{⊗m}⟩·v^{⊗m} whenever a direction v with
//! negative alignment is found) with re-centering to zero mean and pinning
//! the diagonal to 1.

use crate::error::{Error, Result};
use crate::model::Assignment;
use crate::scalar::{real, Scalar};
use crate::spectra::{lambda1_constrained, lambda_tmax, min_eig_f1, AscentConfig, EigenEstimate};
use crate::tensor::{sigma2_canonical_indices, MultiIndex, SymmetricTensor, Vector};

/// Configuration of the projected-gradient solver.
///
/// `descent_iters` is the iteration budget of the inner negative-direction
/// search; the solver invokes that search with `ascent.max_iters` replaced
/// by it.
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    /// Gradient step size ζ.
    pub zeta: f64,
    pub outer_iters: usize,
    pub inner_iters: usize,
    pub descent_iters: usize,
    /// Settings for the inner negative-direction search.
    pub ascent: AscentConfig,
    /// Pin all even-multiplicity canonical entries to 1 instead of only the
    /// diagonal. Experimental; default off.
    pub enforce_full_sigma2: bool,
    /// Re-center after every inner iteration, not only those that fired a
    /// correction.
    pub project_every_inner: bool,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            zeta: 0.05,
            outer_iters: 100,
            inner_iters: 40,
            descent_iters: 20,
            ascent: AscentConfig {
                step_gamma: 0.05,
                max_iters: 20,
                num_starts: 1,
                seed: 0,
                stall_tol: 1e-12,
            },
            enforce_full_sigma2: false,
            project_every_inner: false,
            seed: 0,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if self.zeta.is_nan() || self.zeta <= 0.0 {
            return Err(Error::OutOfRange(format!(
                "zeta must be positive, got {}",
                self.zeta
            )));
        }
        if self.outer_iters < 1 || self.inner_iters < 1 || self.descent_iters < 1 {
            return Err(Error::OutOfRange("iteration counts must be >= 1".into()));
        }
        Ok(())
    }
}

/// Objective of the combinatorial problem: ⟨W, y^{⊗m}⟩.
pub fn objective<T: Scalar>(w: &SymmetricTensor<T>, y: &Assignment) -> Result<T> {
    if y.len() != w.n() {
        return Err(Error::InvalidAssignment(format!(
            "labeling has {} entries, tensor has n={}",
            y.len(),
            w.n()
        )));
    }
    let rank_one = SymmetricTensor::rank_one(&y.to_vector::<T>(), w.m())?;
    w.inner(&rank_one)
}

#[derive(Clone, Debug)]
pub struct BruteForceResult<T> {
    pub y_opt: Assignment,
    pub value: T,
    pub tie: bool,
}

/// Exhaustive maximization of ⟨W, y^{⊗m}⟩ over balanced labelings with
/// labels\[0\] = +1 fixed (the global sign is irrelevant for even m).
/// Limited to n ≤ 16.
pub fn brute_force<T: Scalar>(w: &SymmetricTensor<T>) -> Result<BruteForceResult<T>> {
    let n = w.n();
    if n % 2 != 0 {
        return Err(Error::InvalidAssignment(format!(
            "brute force needs even n, got {n}"
        )));
    }
    if n > 16 {
        return Err(Error::TooLarge(format!(
            "brute force supports n <= 16, got {n}"
        )));
    }
    if w.m() % 2 != 0 {
        return Err(Error::OddOrder(w.m()));
    }
    // Precompute (positions, weighted value) per entry; the objective for a
    // labeling is Σ mult·W_c·∏_j y_{c_j}, and the product is a sign.
    let terms: Vec<(&MultiIndex, T)> = w
        .entries()
        .iter()
        .map(|(idx, v)| (idx, real::<T>(idx.permutation_count() as f64) * *v))
        .collect();
    let tie_tol = real::<T>(1e-12);

    let mut best: Option<(T, Vec<i8>)> = None;
    let mut tie = false;
    let mut labels = vec![-1i8; n];
    labels[0] = 1;
    let mut chosen: Vec<usize> = Vec::with_capacity(n / 2 - 1);

    // Choose n/2 - 1 further positive positions among 1..n.
    #[allow(clippy::too_many_arguments)]
    fn recurse<T: Scalar>(
        labels: &mut Vec<i8>,
        chosen: &mut Vec<usize>,
        start: usize,
        need: usize,
        terms: &[(&MultiIndex, T)],
        best: &mut Option<(T, Vec<i8>)>,
        tie: &mut bool,
        tie_tol: T,
    ) {
        if need == 0 {
            let mut value = T::zero();
            for (idx, wv) in terms {
                let mut negatives = 0usize;
                for &i in idx.as_slice() {
                    if labels[i as usize] < 0 {
                        negatives += 1;
                    }
                }
                if negatives % 2 == 0 {
                    value += *wv;
                } else {
                    value -= *wv;
                }
            }
            match best {
                None => *best = Some((value, labels.clone())),
                Some((bv, bl)) => {
                    if value > *bv + tie_tol {
                        *bv = value;
                        *bl = labels.clone();
                        *tie = false;
                    } else if value >= *bv - tie_tol {
                        *tie = true;
                        if value > *bv {
                            *bv = value;
                            *bl = labels.clone();
                        }
                    }
                }
            }
            return;
        }
        let n = labels.len();
        for i in start..n {
            if n - i < need {
                break;
            }
            labels[i] = 1;
            chosen.push(i);
            recurse(labels, chosen, i + 1, need - 1, terms, best, tie, tie_tol);
            chosen.pop();
            labels[i] = -1;
        }
    }

    recurse(
        &mut labels,
        &mut chosen,
        1,
        n / 2 - 1,
        &terms,
        &mut best,
        &mut tie,
        tie_tol,
    );
    let (value, labels) = best.expect("at least one balanced labeling");
    Ok(BruteForceResult {
        y_opt: Assignment::new(labels)?,
        value,
        tie,
    })
}

/// Subtract the dense mean times the all-one tensor, then pin the diagonal
/// (or, with `full_sigma2`, every even-multiplicity canonical entry) to 1.
pub fn project_balance<T: Scalar>(
    y: &SymmetricTensor<T>,
    full_sigma2: bool,
) -> Result<SymmetricTensor<T>> {
    let mean = y.dense_mean();
    let centered = y.shift_uniform(-mean)?;
    let pins: Vec<(MultiIndex, T)> = if full_sigma2 {
        sigma2_canonical_indices(y.n(), y.m())?
            .into_iter()
            .map(|idx| (idx, T::one()))
            .collect()
    } else {
        (0..y.n())
            .map(|i| {
                MultiIndex::new(&vec![i; y.m()], y.n()).map(|idx| (idx, T::one()))
            })
            .collect::<Result<_>>()?
    };
    centered.with_pinned(&pins)
}

/// One positive-semidefiniteness correction: when the estimate's direction v
/// has c_v = ⟨Y, v^{⊗m}⟩ < 0, return Y − c_v·v^{⊗m} (which zeroes the
/// alignment with v); otherwise return Y unchanged.
pub fn project_psd_step<T: Scalar>(
    y: &SymmetricTensor<T>,
    estimate: &EigenEstimate<T>,
) -> Result<(SymmetricTensor<T>, bool)> {
    if estimate.vector.is_zero() {
        return Ok((y.clone(), false));
    }
    let direction = SymmetricTensor::rank_one(&estimate.vector, y.m())?;
    let c_v = y.inner(&direction)?;
    if c_v < T::zero() {
        Ok((y.add_scaled(&direction, -c_v)?, true))
    } else {
        Ok((y.clone(), false))
    }
}

/// Per-outer-iteration diagnostics.
#[derive(Clone, Copy, Debug)]
pub struct OuterTrace<T> {
    pub objective: T,
    pub psd_corrections: usize,
}

/// Raw solver output before label extraction.
#[derive(Clone, Debug)]
pub struct PgdOutcome<T> {
    pub y: SymmetricTensor<T>,
    pub trace: Vec<OuterTrace<T>>,
}

/// Full solve record.
#[derive(Clone, Debug)]
pub struct SolveResult<T> {
    pub y: SymmetricTensor<T>,
    pub y_hat: Assignment,
    /// Agreement with the ground truth, when one was supplied.
    pub h: Option<T>,
    /// ⟨W, Y⟩ at the final iterate.
    pub objective: T,
    pub trace: Vec<OuterTrace<T>>,
}

/// The projected-gradient solver. Y starts at the identity tensor; each
/// outer iteration takes the gradient step Y += ζW and then runs
/// `inner_iters` correction rounds, each searching for a direction of
/// negative alignment and, when one fires, subtracting it and re-balancing.
/// A final balance projection is iterated until the dense mean is at
/// numerical zero, leaving the diagonal exactly 1.
pub fn pgd_solve<T: Scalar>(w: &SymmetricTensor<T>, cfg: &SolverConfig) -> Result<PgdOutcome<T>> {
    cfg.validate()?;
    let n = w.n();
    let m = w.m();
    if m % 2 != 0 {
        return Err(Error::OddOrder(m));
    }
    if n % 2 != 0 {
        return Err(Error::InvalidAssignment(format!(
            "solver needs even n, got {n}"
        )));
    }

    let mut y = SymmetricTensor::identity(n, m)?;
    let mut trace = Vec::with_capacity(cfg.outer_iters);
    let mut invocation = 0u64;

    for outer in 0..cfg.outer_iters {
        y = y.add_scaled(w, real::<T>(cfg.zeta))?;
        let mut corrections = 0usize;
        for _inner in 0..cfg.inner_iters {
            let ascent = AscentConfig {
                max_iters: cfg.descent_iters,
                seed: cfg
                    .seed
                    .wrapping_add(cfg.ascent.seed)
                    .wrapping_add(invocation.wrapping_mul(0x9e37_79b9)),
                ..cfg.ascent
            };
            invocation += 1;
            let estimate = min_eig_f1(&y, &ascent)?;
            let (projected, applied) = project_psd_step(&y, &estimate)?;
            y = projected;
            if applied {
                corrections += 1;
                y = project_balance(&y, cfg.enforce_full_sigma2)?;
            } else if cfg.project_every_inner {
                y = project_balance(&y, cfg.enforce_full_sigma2)?;
            }
        }
        // Iterate the final projection: pinning the diagonal perturbs the
        // mean by O(n^{1-m}), so a few rounds drive it to numerical zero.
        for _ in 0..8 {
            y = project_balance(&y, cfg.enforce_full_sigma2)?;
            if y.dense_mean().abs() <= real::<T>(1e-12) {
                break;
            }
        }
        if !y.is_finite() {
            return Err(Error::NonFinite {
                context: "pgd_solve".into(),
                iteration: outer,
            });
        }
        trace.push(OuterTrace {
            objective: w.inner(&y)?,
            psd_corrections: corrections,
        });
    }

    Ok(PgdOutcome { y, trace })
}

/// Agreement score h(Y) = ⟨Y, y*^{⊗m}⟩ / ⟨y*^{⊗m}, y*^{⊗m}⟩; the
/// denominator is n^m.
pub fn agreement<T: Scalar>(y: &SymmetricTensor<T>, y_star: &Assignment) -> Result<T> {
    let truth = SymmetricTensor::rank_one(&y_star.to_vector::<T>(), y.m())?;
    let num = y.inner(&truth)?;
    let den = real::<T>((y.n() as f64).powi(y.m() as i32));
    Ok(num / den)
}

/// Round the solver output to a balanced labeling: take the witness of the
/// best rank-one alignment, read off signs (zeros to +1), then repair the
/// balance by flipping majority labels with the smallest witness magnitude
/// (ties by lowest index). The global sign is normalized so labels\[0\] = +1.
pub fn extract_assignment<T: Scalar>(
    y: &SymmetricTensor<T>,
    cfg: &AscentConfig,
) -> Result<Assignment> {
    let n = y.n();
    if n % 2 != 0 {
        return Err(Error::InvalidAssignment(format!(
            "extraction needs even n, got {n}"
        )));
    }
    let top = lambda_tmax(y, cfg)?;
    let u = top.witness;
    let mut labels: Vec<i8> = u
        .iter()
        .map(|&v| if v < T::zero() { -1i8 } else { 1i8 })
        .collect();
    loop {
        let sum: i64 = labels.iter().map(|&l| l as i64).sum();
        if sum == 0 {
            break;
        }
        let majority: i8 = if sum > 0 { 1 } else { -1 };
        let candidate = labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == majority)
            .min_by(|(i, _), (j, _)| {
                u[*i]
                    .abs()
                    .partial_cmp(&u[*j].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(i.cmp(j))
            })
            .map(|(i, _)| i)
            .expect("majority side is nonempty while unbalanced");
        labels[candidate] = -majority;
    }
    if labels[0] < 0 {
        for l in labels.iter_mut() {
            *l = -*l;
        }
    }
    Assignment::new(labels)
}

/// The constructed dual diagonal: V*_{i,…,i} = y_i · (W y^{⊗m-1})_i, all
/// off-diagonal entries zero.
pub fn build_dual<T: Scalar>(
    w: &SymmetricTensor<T>,
    y: &Assignment,
) -> Result<SymmetricTensor<T>> {
    if y.len() != w.n() {
        return Err(Error::InvalidAssignment(format!(
            "labeling has {} entries, tensor has n={}",
            y.len(),
            w.n()
        )));
    }
    let contraction = w.contract(&y.to_vector::<T>())?;
    let entries: Vec<(MultiIndex, T)> = (0..w.n())
        .map(|i| {
            let sign = if y.is_positive(i) { T::one() } else { -T::one() };
            MultiIndex::new(&vec![i; w.m()], w.n()).map(|idx| (idx, sign * contraction[i]))
        })
        .collect::<Result<_>>()?;
    SymmetricTensor::from_entries(w.n(), w.m(), entries)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    SupportsOptimality,
    Refutes,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::SupportsOptimality => "supports_optimality",
            Verdict::Refutes => "refutes",
            Verdict::Inconclusive => "inconclusive",
        };
        write!(f, "{s}")
    }
}

/// Dual-certificate evaluation. The estimate of the constrained infimum is
/// an upper bound, so `SupportsOptimality` is heuristic evidence while
/// `Refutes` carries a genuine feasible witness of negative alignment.
#[derive(Clone, Debug)]
pub struct Certificate<T> {
    /// The constructed dual diagonal.
    pub v_star: SymmetricTensor<T>,
    pub lambda1_estimate: T,
    /// Always true: a positive estimate does not prove the infimum positive.
    pub heuristic: bool,
    pub verdict: Verdict,
    /// Unit vector achieving the estimate, feasible for the constraints.
    pub witness: Vector<T>,
}

/// Default threshold separating numerical noise from signal in the verdict.
pub const CERTIFICATE_THRESHOLD: f64 = 1e-8;

/// Build V* for the labeling and estimate inf ⟨V* − W, u^{⊗m}⟩ over unit u
/// orthogonal to 1 and to the labeling.
pub fn certify<T: Scalar>(
    w: &SymmetricTensor<T>,
    y: &Assignment,
    cfg: &AscentConfig,
    threshold: f64,
) -> Result<Certificate<T>> {
    let v_star = build_dual(w, y)?;
    let diff = v_star.add_scaled(w, -T::one())?;
    let forbidden = vec![Vector::<T>::ones(w.n()), y.to_vector::<T>()];
    let est = lambda1_constrained(&diff, &forbidden, cfg)?;
    let thr = real::<T>(threshold);
    let verdict = if est.value < -thr {
        Verdict::Refutes
    } else if est.value > thr {
        Verdict::SupportsOptimality
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate {
        v_star,
        lambda1_estimate: est.value,
        heuristic: true,
        verdict,
        witness: est.witness,
    })
}

/// Solve, extract, and score in one call. Extraction uses an 8-start search
/// seeded deterministically from the solver seed.
pub fn solve<T: Scalar>(
    w: &SymmetricTensor<T>,
    cfg: &SolverConfig,
    truth: Option<&Assignment>,
) -> Result<SolveResult<T>> {
    let outcome = pgd_solve(w, cfg)?;
    let extract_cfg = AscentConfig {
        num_starts: cfg.ascent.num_starts.max(8),
        max_iters: 500,
        seed: cfg.seed.wrapping_add(1_000_003),
        ..cfg.ascent
    };
    let y_hat = extract_assignment(&outcome.y, &extract_cfg)?;
    let h = truth.map(|t| agreement(&outcome.y, t)).transpose()?;
    let objective = w.inner(&outcome.y)?;
    Ok(SolveResult {
        y: outcome.y,
        y_hat,
        h,
        objective,
        trace: outcome.trace,
    })
}
