use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested target cannot be reached for the given parameters.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// The data do not support the computation (zero variance, perfect fit).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn ensure_finite(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::domain(format!("{name} must be finite, got {x}")))
    }
}

/// Accepts values strictly inside (0, 1).
pub(crate) fn ensure_open_unit(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(Error::domain(format!("{name} must lie in (0, 1), got {x}")))
    }
}

/// Accepts values in the closed interval [0, 1].
pub(crate) fn ensure_closed_unit(name: &str, x: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(Error::domain(format!("{name} must lie in [0, 1], got {x}")))
    }
}
