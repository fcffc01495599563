//! Symmetric tensor algebra and exact partitioning of high-order models.
//!
//! The crate provides, generically over the floating-point scalar:
//!
//! - canonical compressed storage for order-m symmetric tensors with the
//!   usual algebra (inner product, Frobenius norm, trace, contraction,
//!   rank-one powers) in [`tensor`];
//! - variational tensor-eigenvalue estimators, including the gradient
//!   search for negative eigenvalue directions used by the solver, in
//!   [`spectra`];
//! - the homogeneous-polynomial model class: coefficient calculus,
//!   expectation construction, four generative samplers, and the
//!   statistical-condition checker, in [`model`];
//! - the projected-gradient conic solver with dual-certificate machinery,
//!   label extraction, and an exhaustive oracle, in [`solver`].
//!
//! Concrete f64 aliases for the main types live at the crate root; all
//! stated tolerances assume f64.

mod error;
pub mod model;
pub mod scalar;
pub mod solver;
pub mod spectra;
pub mod tensor;

pub use error::{Error, Result};
pub use model::Assignment;
pub use scalar::Scalar;
pub use tensor::{
    canonical_indices, caratheodory_count, sigma2_canonical_indices, sym_dim, MultiIndex,
    SymmetricTensor, Vector,
};

/// Order-m symmetric tensor over f64.
pub type SymTensor64 = SymmetricTensor<f64>;
/// Order-m symmetric tensor over f32.
pub type SymTensor32 = SymmetricTensor<f32>;
/// Dense vector over f64.
pub type Vector64 = Vector<f64>;
/// Dense vector over f32.
pub type Vector32 = Vector<f32>;
