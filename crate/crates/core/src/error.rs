use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),
    #[error("invalid simple function: {0}")]
    InvalidSimpleFunction(String),
    #[error("simple functions live on different atom grids")]
    GridMismatch,
    #[error("invalid exponent {value}: {reason}")]
    InvalidExponent { value: f64, reason: &'static str },
    #[error("q = INF is only accepted by lorentz_norm")]
    WeakIndexUnsupported,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("operator shape does not match its algebra: {0}")]
    ShapeMismatch(String),
    #[error("operators belong to different algebras")]
    AlgebraMismatch,
    #[error("not a projection: deviation {deviation:e} exceeds tolerance")]
    NotAProjection { deviation: f64 },
    #[error("operator is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("numeric degeneracy: {0}")]
    NumericDegeneracy(String),
    #[error("operator is zero")]
    ZeroOperator,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("projection chain is not decreasing at index {index}")]
    NonMonotoneChain { index: usize },
    #[error("elements {first} and {second} are not {side} disjointly supported")]
    NotDisjoint {
        first: usize,
        second: usize,
        side: &'static str,
    },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("exact enumeration needs n <= {limit}, got {n}")]
    EnumerationBudget { n: usize, limit: usize },
    #[error("empty sample set")]
    EmptySampleSet,
    #[error("empty family")]
    EmptyFamily,
    #[error("perturbation precondition fails at index {index}: ratio {ratio:e} > bound {bound:e}")]
    PerturbationTooLarge { index: usize, ratio: f64, bound: f64 },
    #[error("degenerate family: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
