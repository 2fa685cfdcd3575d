use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("{what} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        what: String,
        iterations: usize,
        residual: f64,
    },

    #[error("integration aborted at step {step} (t = {time}): {reason}")]
    Aborted {
        step: usize,
        time: f64,
        reason: String,
    },

    #[error("shooting failed at ξ = {xi}: {message}")]
    Shooting { xi: f64, message: String },

    #[error("{0}")]
    Unsupported(String),

    #[error("config error{}: {message}", if path.is_empty() { String::new() } else { format!(" in {path}") })]
    Config { path: String, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
