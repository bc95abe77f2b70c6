use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Pair-partition enumeration was asked for more blocks than the configured cap allows.
    #[error("enumeration of P2({}) refused: n = {requested} exceeds the cap n <= {cap}", 2 * .requested)]
    CapExceeded { requested: usize, cap: usize },

    /// Group or matrix size above a hard limit.
    #[error("size limit: {what} = {requested} exceeds the maximum {limit}")]
    SizeLimit {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two independent computation routes produced different answers.
    #[error("internal consistency check failed in {context}: {left} != {right}")]
    Mismatch {
        context: String,
        left: String,
        right: String,
    },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
