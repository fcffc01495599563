//! Tensor-eigenvalue estimation by multistart first-order search.
//!
//! Everything here is a heuristic estimator with a one-sided contract:
//! `lambda_tmax` evaluates feasible points only, so it is a lower bound on
//! the true maximum eigenvalue; `lambda_tmin` and `lambda1_constrained`
//! are upper bounds on the respective infima. Each estimator reports the
//! witness vector that achieved its value so callers can re-evaluate
//! independently.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::{powu, real, Scalar};
use crate::tensor::{SymmetricTensor, Vector};

/// Configuration for the gradient searches.
#[derive(Clone, Copy, Debug)]
pub struct AscentConfig {
    /// Gradient step factor γ.
    pub step_gamma: f64,
    /// Iteration budget per start.
    pub max_iters: usize,
    /// Independent random restarts.
    pub num_starts: usize,
    /// Base RNG seed; start s uses seed + s.
    pub seed: u64,
    /// Stall detection: stop once the objective grows by more than this.
    pub stall_tol: f64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        AscentConfig {
            step_gamma: 0.05,
            max_iters: 500,
            num_starts: 8,
            seed: 0,
            stall_tol: 1e-12,
        }
    }
}

impl AscentConfig {
    fn validate(&self) -> Result<()> {
        if self.step_gamma.is_nan() || self.step_gamma <= 0.0 {
            return Err(Error::OutOfRange(format!(
                "step_gamma must be positive, got {}",
                self.step_gamma
            )));
        }
        if self.num_starts < 1 {
            return Err(Error::OutOfRange("num_starts must be >= 1".into()));
        }
        Ok(())
    }

    fn rng_for_start(&self, start: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(start as u64))
    }
}

/// Result of the negative-eigenvalue search.
#[derive(Clone, Debug)]
pub struct EigenEstimate<T> {
    /// ⟨A, x̂^{⊗m}⟩ at the returned unit vector (0 for the zero vector).
    pub value: T,
    /// Unit witness, or the zero vector when no negative direction was found.
    pub vector: Vector<T>,
    pub certified_negative: bool,
}

/// A variational bound together with the unit vector achieving it.
#[derive(Clone, Debug)]
pub struct Extremum<T> {
    pub value: T,
    pub witness: Vector<T>,
}

fn random_unit<T: Scalar, R: Rng>(n: usize, rng: &mut R) -> Vector<T> {
    loop {
        let v = Vector::new(
            (0..n)
                .map(|_| real::<T>(<StandardNormal as Distribution<f64>>::sample(
                    &StandardNormal,
                    rng,
                )))
                .collect(),
        );
        if let Some(u) = v.normalized() {
            return u;
        }
    }
}

fn ensure_finite<T: Scalar>(x: &Vector<T>, context: &str, iteration: usize) -> Result<()> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: context.to_string(),
            iteration,
        });
    }
    Ok(())
}

/// Search for a direction with ⟨A, x^{⊗m}⟩ < 0 by unconstrained descent of
/// f₁(x) = ⟨I, x^{⊗m}⟩²/(2m) + ⟨A, x^{⊗m}⟩/m with gradient
/// ⟨I, x^{⊗m}⟩ I x^{⊗m-1} + A x^{⊗m-1}.
///
/// Each start stops early once f₁ or ⟨A, x^{⊗m}⟩ turns negative (a
/// certified direction), or when f₁ starts to grow. The best (most
/// negative) normalized witness across starts is returned; if no start
/// certifies negativity the zero vector is returned instead.
pub fn min_eig_f1<T: Scalar>(
    a: &SymmetricTensor<T>,
    cfg: &AscentConfig,
) -> Result<EigenEstimate<T>> {
    cfg.validate()?;
    let m = a.m();
    if m % 2 != 0 {
        return Err(Error::OddOrder(m));
    }
    let n = a.n();
    let plan = a.contractor();
    let m_t = real::<T>(m as f64);
    let gamma = real::<T>(cfg.step_gamma);
    let stall = real::<T>(cfg.stall_tol);

    let mut best: Option<(T, Vector<T>)> = None;
    let mut contraction = vec![T::zero(); n];

    for start in 0..cfg.num_starts {
        let mut rng = cfg.rng_for_start(start);
        let mut x = random_unit::<T, _>(n, &mut rng);
        let mut f1_prev = T::infinity();
        for iter in 0..cfg.max_iters {
            ensure_finite(&x, "min_eig_f1", iter)?;
            let a_val = plan.value_and_contract(x.as_slice(), &mut contraction);
            let i_val: T = x.iter().map(|&xi| powu(xi, m as u32)).sum();
            let f1 = i_val * i_val / (real::<T>(2.0) * m_t) + a_val / m_t;
            if f1 < T::zero() || a_val < T::zero() {
                break;
            }
            if f1 > f1_prev + stall {
                break;
            }
            f1_prev = f1;
            for i in 0..n {
                let grad = i_val * powu(x[i], m as u32 - 1) + contraction[i];
                x[i] -= gamma * grad;
            }
        }
        if let Some(unit) = x.normalized() {
            let value = plan.value_and_contract(unit.as_slice(), &mut contraction);
            if value < T::zero() {
                let better = match &best {
                    Some((bv, _)) => value < *bv,
                    None => true,
                };
                if better {
                    best = Some((value, unit));
                }
            }
        }
    }

    Ok(match best {
        Some((value, vector)) => EigenEstimate {
            value,
            vector,
            certified_negative: true,
        },
        None => EigenEstimate {
            value: T::zero(),
            vector: Vector::zeros(n),
            certified_negative: false,
        },
    })
}

/// Multistart projected gradient ascent of ⟨A, u^{⊗m}⟩ on the unit sphere.
/// Every iterate is feasible, so the returned value is a lower bound on the
/// true maximum tensor eigenvalue.
pub fn lambda_tmax<T: Scalar>(
    a: &SymmetricTensor<T>,
    cfg: &AscentConfig,
) -> Result<Extremum<T>> {
    cfg.validate()?;
    let n = a.n();
    let m = a.m();
    let plan = a.contractor();
    let m_t = real::<T>(m as f64);
    let gamma = real::<T>(cfg.step_gamma);
    let stall = real::<T>(cfg.stall_tol);
    let mut contraction = vec![T::zero(); n];

    let mut best: Option<(T, Vector<T>)> = None;
    for start in 0..cfg.num_starts {
        let mut rng = cfg.rng_for_start(start);
        let mut u = random_unit::<T, _>(n, &mut rng);
        let mut prev = T::neg_infinity();
        for iter in 0..cfg.max_iters {
            ensure_finite(&u, "lambda_tmax", iter)?;
            let value = plan.value_and_contract(u.as_slice(), &mut contraction);
            let better = match &best {
                Some((bv, _)) => value > *bv,
                None => true,
            };
            if better {
                best = Some((value, u.clone()));
            }
            if value <= prev + stall {
                break;
            }
            prev = value;
            let stepped = u.add_scaled(&Vector::from_slice(&contraction), gamma * m_t);
            match stepped.normalized() {
                Some(next) => u = next,
                None => break,
            }
        }
    }
    let (value, witness) = best.expect("at least one start");
    Ok(Extremum { value, witness })
}

/// −lambda_tmax(−A): an upper bound on the true minimum tensor eigenvalue.
pub fn lambda_tmin<T: Scalar>(
    a: &SymmetricTensor<T>,
    cfg: &AscentConfig,
) -> Result<Extremum<T>> {
    let neg = a.scale(-T::one());
    let est = lambda_tmax(&neg, cfg)?;
    Ok(Extremum {
        value: -est.value,
        witness: est.witness,
    })
}

/// Orthonormal basis of the orthogonal complement of span(forbidden),
/// built by Gram–Schmidt over the standard basis in index order.
pub fn complement_basis<T: Scalar>(n: usize, forbidden: &[Vector<T>]) -> Result<Vec<Vector<T>>> {
    let mut constraints: Vec<Vector<T>> = Vec::with_capacity(forbidden.len());
    for f in forbidden {
        if f.len() != n {
            return Err(Error::ShapeMismatch {
                expected_n: n,
                expected_m: 1,
                got_n: f.len(),
                got_m: 1,
            });
        }
        let mut r = f.clone();
        for c in &constraints {
            let proj = r.dot(c);
            r = r.add_scaled(c, -proj);
        }
        let norm = r.norm();
        if norm <= real::<T>(1e-12) * f.norm().max(T::one()) {
            return Err(Error::DependentConstraints);
        }
        constraints.push(r.scale(T::one() / norm));
    }
    let target = n
        .checked_sub(constraints.len())
        .ok_or(Error::NoFeasibleDirection)?;
    if target == 0 {
        return Err(Error::NoFeasibleDirection);
    }
    let mut basis: Vec<Vector<T>> = Vec::with_capacity(target);
    for i in 0..n {
        if basis.len() == target {
            break;
        }
        let mut r = Vector::unit(n, i);
        for c in constraints.iter().chain(basis.iter()) {
            let proj = r.dot(c);
            r = r.add_scaled(c, -proj);
        }
        // Re-orthogonalize once; plain Gram-Schmidt loses digits.
        for c in constraints.iter().chain(basis.iter()) {
            let proj = r.dot(c);
            r = r.add_scaled(c, -proj);
        }
        let norm = r.norm();
        if norm > real::<T>(1e-10) {
            basis.push(r.scale(T::one() / norm));
        }
    }
    if basis.len() != target {
        return Err(Error::NoFeasibleDirection);
    }
    Ok(basis)
}

/// Estimate inf ⟨A, u^{⊗m}⟩ over unit u orthogonal to every forbidden
/// vector, by multistart gradient descent in the complement subspace. The
/// returned value is an upper bound on the infimum: a positive result is
/// heuristic evidence only, while a negative result comes with a feasible
/// witness.
pub fn lambda1_constrained<T: Scalar>(
    a: &SymmetricTensor<T>,
    forbidden: &[Vector<T>],
    cfg: &AscentConfig,
) -> Result<Extremum<T>> {
    cfg.validate()?;
    let n = a.n();
    let m = a.m();
    let basis = complement_basis(n, forbidden)?;
    let d = basis.len();
    let plan = a.contractor();
    let m_t = real::<T>(m as f64);
    let gamma = real::<T>(cfg.step_gamma);
    let stall = real::<T>(cfg.stall_tol);
    let mut contraction = vec![T::zero(); n];

    let lift = |w: &Vector<T>| -> Vector<T> {
        let mut u = Vector::zeros(n);
        for (k, b) in basis.iter().enumerate() {
            for i in 0..n {
                u[i] += w[k] * b[i];
            }
        }
        u
    };

    let mut best: Option<(T, Vector<T>)> = None;
    for start in 0..cfg.num_starts {
        let mut rng = cfg.rng_for_start(start);
        let mut w = random_unit::<T, _>(d, &mut rng);
        let mut prev = T::infinity();
        for iter in 0..cfg.max_iters {
            ensure_finite(&w, "lambda1_constrained", iter)?;
            let u = lift(&w);
            let value = plan.value_and_contract(u.as_slice(), &mut contraction);
            let better = match &best {
                Some((bv, _)) => value < *bv,
                None => true,
            };
            if better {
                best = Some((value, u.clone()));
            }
            if value >= prev - stall {
                break;
            }
            prev = value;
            // Pull the ambient gradient m·A u^{⊗m-1} back through the basis.
            let mut grad_w = Vector::zeros(d);
            for (k, b) in basis.iter().enumerate() {
                grad_w[k] = m_t * b.dot(&Vector::from_slice(&contraction));
            }
            let stepped = w.add_scaled(&grad_w, -gamma);
            match stepped.normalized() {
                Some(next) => w = next,
                None => break,
            }
        }
    }
    let (value, witness) = best.expect("at least one start");
    Ok(Extremum { value, witness })
}
