use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix must be square and non-empty (got {rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("matrix is not Hermitian (defect {defect:e} > tolerance {tolerance:e})")]
    NotHermitian { defect: f64, tolerance: f64 },
    #[error("negative eigenvalue {value:e} below the admissible floor")]
    NegativeEigenvalue { value: f64 },
    #[error("state has zero trace")]
    ZeroTrace,
    #[error("convex weights must be positive and sum to 1 (sum = {sum})")]
    WeightSum { sum: f64 },
    #[error("vector {norm:e} is below the null-vector threshold")]
    NullVector { norm: f64 },
    #[error("the zero vector does not define a ray")]
    ZeroVector,
    #[error("chart {index} is undefined at this point (pivot modulus {modulus:e})")]
    ChartUndefined { index: usize, modulus: f64 },
    #[error("H and K do not commute (defect {defect:e} > tolerance {tolerance:e})")]
    NonCommuting { defect: f64, tolerance: f64 },
    #[error("matrix is not positive definite (min eigenvalue {min:e}, max {max:e})")]
    NotPositiveDefinite { min: f64, max: f64 },
    #[error("inverse check failed (defect {defect:e})")]
    InverseDefect { defect: f64 },
    #[error("integration step {step:e} underflows")]
    StepUnderflow { step: f64 },
    #[error("polynomial degree {degree} exceeds the supported maximum {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("algebra is not closed under the product (residual {residual:e})")]
    NotClosed { residual: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("json: {0}")]
    Json(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
