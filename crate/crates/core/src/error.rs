use thiserror::Error;

use crate::division::Algebra;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("scalar product contexts differ: {left} vs {right}")]
    ContextMismatch { left: String, right: String },

    #[error("degenerate subspace at Gram-Schmidt step {step}: |<u,u>| = {norm:e} below tolerance {tol:e}")]
    Degenerate { step: usize, norm: f64, tol: f64 },

    #[error("kernel is ambiguous: eigenvalue {value:e} lies within a decade of tolerance {tol:e}")]
    AmbiguousKernel { value: f64, tol: f64 },

    #[error("algebra mismatch: {left:?} vs {right:?}")]
    AlgebraMismatch { left: Algebra, right: Algebra },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported direction: {0}")]
    UnsupportedDirection(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("Clifford relation residual {residual:e} exceeds {tol:e}")]
    CliffordRelation { residual: f64, tol: f64 },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}
