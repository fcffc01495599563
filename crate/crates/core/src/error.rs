use thiserror::Error;

/// Errors produced by tensor algebra, model construction, and the solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: expected n={expected_n}, m={expected_m}, got n={got_n}, m={got_m}")]
    ShapeMismatch {
        expected_n: usize,
        expected_m: usize,
        got_n: usize,
        got_m: usize,
    },

    #[error("tensor order must be a positive even integer, got m={0}")]
    OddOrder(usize),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("dense input is not symmetric: entry at {index} differs from its canonical value by {delta}")]
    AsymmetricDense { index: String, delta: f64 },

    #[error("duplicate canonical index: {0}")]
    DuplicateIndex(String),

    #[error("dense materialization too large for n={n}, m={m}")]
    DenseTooLarge { n: usize, m: usize },

    #[error("singular linear system")]
    SingularSystem,

    #[error("linear solve residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("non-finite value encountered in {context} at iteration {iteration}")]
    NonFinite { context: String, iteration: usize },

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("forbidden vectors are not linearly independent")]
    DependentConstraints,

    #[error("forbidden vectors span the whole space; no feasible direction remains")]
    NoFeasibleDirection,

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("invalid parameter `{key}`: {message}")]
    InvalidParam { key: String, message: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
