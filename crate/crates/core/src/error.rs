use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid branch points: {0}")]
    Validation(String),
    #[error("point is off the model: residual {residual:e}")]
    OffModel { residual: f64 },
    #[error("quadrature did not converge on [{a}, {b}] (last increment {increment:e})")]
    Quadrature { a: String, b: String, increment: f64 },
    #[error("newton iteration diverged (last residual {residual:e})")]
    Divergence { residual: f64 },
    #[error("cusp configuration detected at z = {0}")]
    Cusp(String),
    #[error("ambiguous doubling sheet: two candidates within {0:e}")]
    AmbiguousSheet(f64),
    #[error("lift does not close: defect {0:e}")]
    NonClosure(f64),
    #[error("point is not on the boundary of the quarter")]
    NotOnBoundary,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
