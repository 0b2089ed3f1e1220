use thiserror::Error;

/// Errors raised by the laboratory. Messages name the offending input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("density has {mass_error:.3e} mass error after discretization (model {model})")]
    MassError { model: String, mass_error: f64 },
    #[error("aliasing: p_n at the grid boundary is {edge:.3e}; widen the grid")]
    Aliasing { edge: f64 },
    #[error("model {0} has no density on the real line")]
    NoDensity(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("series did not converge: {0}")]
    NoConvergence(String),
    #[error("density not nonnegative: c = {c} exceeds c_max = {c_max}")]
    NotNonnegative { c: f64, c_max: f64 },
    #[error("moment constraints violated: {0}")]
    MomentConstraint(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
