use thiserror::Error;

use crate::scalars::Algebra;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expected a scalar in {expected}, found one in {found}")]
    AlgebraMismatch { expected: Algebra, found: Algebra },

    #[error("not a complex structure: j^2 != -id")]
    NotAComplexStructure,

    #[error("degenerate form: {0}")]
    DegenerateForm(String),

    #[error("not a slash structure: {0}")]
    NotASlashStructure(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("({c}, {s}) is not on the unit circle")]
    NotACirclePoint { c: String, s: String },

    #[error("invalid orbit label: {0}")]
    InvalidLabel(String),

    #[error("not in any orbit: {0}")]
    NotInAnyOrbit(String),

    #[error("not in orbit: {0}")]
    NotInOrbit(String),

    #[error("residual {residual:e} exceeds tolerance {tolerance:e}")]
    ToleranceExceeded { residual: f64, tolerance: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}
