//! Algebraic identities of the tensor operations: rank-one inner products
//! collapse to powered dot products, the variational maximum is dominated
//! by the Frobenius norm, sums of rank-one tensors stay in the
//! nonnegative-alignment cone, and ±1 rank-one powers are identically 1 on
//! even-multiplicity indices.

mod common;

use common::rel_close;
use hpm_core::spectra::{lambda_tmax, AscentConfig};
use hpm_core::{caratheodory_count, sigma2_canonical_indices, SymTensor64, Vector64};
use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vec(n: usize, rng: &mut ChaCha8Rng) -> Vector64 {
    Vector64::new((0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
}

#[test]
fn rank_one_inner_is_powered_dot() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..1000 {
        let n = 2 + (trial % 4);
        let m = if trial % 2 == 0 { 2 } else { 4 };
        let x = random_vec(n, &mut rng);
        let y = random_vec(n, &mut rng);
        let got = SymTensor64::rank_one(&x, m)
            .unwrap()
            .inner(&SymTensor64::rank_one(&y, m).unwrap())
            .unwrap();
        let want = x.dot(&y).powi(m as i32);
        let scale = (x.norm() * y.norm()).powi(m as i32);
        assert!(
            rel_close(got, want, 1e-10, scale),
            "trial {trial}: {got} vs {want}"
        );
    }
}

#[test]
fn lambda_tmax_below_frobenius() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let cfg = AscentConfig {
        max_iters: 120,
        num_starts: 4,
        ..AscentConfig::default()
    };
    for trial in 0..30 {
        let n = 2 + (trial % 4);
        let m = if trial % 2 == 0 { 2 } else { 4 };
        let dense = common::DenseOracle::random(n, m, &mut rng);
        let t = dense.to_canonical();
        let est = lambda_tmax(&t, &cfg).unwrap();
        assert!(
            est.value <= t.frobenius() + 1e-9,
            "trial {trial}: {} > {}",
            est.value,
            t.frobenius()
        );
    }
}

#[test]
fn lambda_tmax_dominates_random_probes() {
    // The multistart ascent value must beat plain random sphere probing.
    let mut rng = ChaCha8Rng::seed_from_u64(149);
    let cfg = AscentConfig {
        max_iters: 500,
        ..AscentConfig::default()
    };
    for trial in 0..5 {
        let n = 3;
        let dense = common::DenseOracle::random(n, 4, &mut rng);
        let t = dense.to_canonical();
        let est = lambda_tmax(&t, &cfg).unwrap();
        let plan = t.contractor();
        let mut scratch = vec![0.0f64; n];
        for probe in 0..200 {
            let u = loop {
                let v = random_vec(n, &mut rng);
                if let Some(u) = v.normalized() {
                    break u;
                }
            };
            let value = plan.value_and_contract(u.as_slice(), &mut scratch);
            assert!(
                est.value >= value - 1e-9,
                "trial {trial}, probe {probe}: {} < {value}",
                est.value
            );
        }
    }
}

#[test]
fn scalar_generic_algebra_works_at_f32() {
    // The algebra is generic over the scalar; f32 reproduces the same
    // structure at reduced precision.
    use hpm_core::{SymTensor32, Vector32};
    let x = Vector32::new(vec![0.5f32, -1.0, 0.25]);
    let y = Vector32::new(vec![1.0f32, 0.5, -0.75]);
    let a = SymTensor32::rank_one(&x, 4).unwrap();
    let b = SymTensor32::rank_one(&y, 4).unwrap();
    let got = a.inner(&b).unwrap();
    let want = x.dot(&y).powi(4);
    assert!((got - want).abs() <= 1e-5 * want.abs().max(1.0));

    let id = SymTensor32::identity(3, 4).unwrap();
    assert_eq!(id.trace(), 3.0f32);
    let c = id.contract(&x).unwrap();
    for i in 0..3 {
        assert!((c[i] - x[i].powi(3)).abs() <= 1e-6);
    }

    let est = lambda_tmax(
        &id,
        &AscentConfig {
            max_iters: 300,
            ..AscentConfig::default()
        },
    )
    .unwrap();
    assert!(est.value <= id.frobenius() + 1e-5);
    assert!(est.value > 0.9, "max of Σu_i^4 on the sphere is 1");
}

#[test]
fn sym_dim_overflow_is_an_explicit_error() {
    use hpm_core::sym_dim;
    assert!(sym_dim(64, 8).is_ok());
    match sym_dim(usize::MAX / 4, 8) {
        Err(hpm_core::Error::Overflow(_)) => {}
        other => panic!("expected Overflow, got {other:?}"),
    }
}

#[test]
fn sums_of_rank_ones_have_nonnegative_alignment() {
    // Carathéodory-size sums of rank-one tensors against random unit probes.
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for (n, m) in [(2usize, 2usize), (3, 4), (2, 4)] {
        let count = caratheodory_count(n, m).unwrap() as usize;
        let mut acc = SymTensor64::zeros(n, m).unwrap();
        for _ in 0..count {
            let u = random_vec(n, &mut rng);
            acc = acc
                .add_scaled(&SymTensor64::rank_one(&u, m).unwrap(), 1.0)
                .unwrap();
        }
        for _ in 0..50 {
            let v = random_vec(n, &mut rng).normalized().unwrap();
            let probe = SymTensor64::rank_one(&v, m).unwrap();
            assert!(acc.inner(&probe).unwrap() >= -1e-9);
        }
    }
}

#[test]
fn sign_vector_rank_one_is_one_on_sigma2() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for n in [2usize, 4, 6] {
        for m in [2usize, 4] {
            let signs = Vector64::new(
                (0..n)
                    .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
                    .collect(),
            );
            let t = SymTensor64::rank_one(&signs, m).unwrap();
            for idx in sigma2_canonical_indices(n, m).unwrap() {
                assert_eq!(t.get(&idx), 1.0, "n={n} m={m} idx={idx}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_rank_one_inner_identity(
        seed in 0u64..10_000,
        n in 2usize..5,
        even in proptest::bool::ANY,
    ) {
        let m = if even { 2 } else { 4 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_vec(n, &mut rng);
        let y = random_vec(n, &mut rng);
        let got = SymTensor64::rank_one(&x, m).unwrap()
            .inner(&SymTensor64::rank_one(&y, m).unwrap()).unwrap();
        let want = x.dot(&y).powi(m as i32);
        let scale = (x.norm() * y.norm()).powi(m as i32);
        prop_assert!(rel_close(got, want, 1e-10, scale));
    }

    #[test]
    fn prop_add_scaled_linearity_of_inner(
        seed in 0u64..10_000,
        s in -3.0f64..3.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::DenseOracle::random(3, 4, &mut rng).to_canonical();
        let b = common::DenseOracle::random(3, 4, &mut rng).to_canonical();
        let c = common::DenseOracle::random(3, 4, &mut rng).to_canonical();
        let lhs = a.add_scaled(&b, s).unwrap().inner(&c).unwrap();
        let rhs = a.inner(&c).unwrap() + s * b.inner(&c).unwrap();
        let scale = (a.frobenius() + s.abs() * b.frobenius()) * c.frobenius();
        prop_assert!(rel_close(lhs, rhs, 1e-10, scale));
    }
}
