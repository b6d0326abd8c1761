//! Crate-wide error type.

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed expression or config text; `offset` is a byte offset into the input.
    #[error("parse error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    /// Point outside the domain a map is defined on.
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// Metric or differential collapses (pole, vanishing determinant).
    #[error("degenerate: {0}")]
    Degenerate(String),

    /// Argument violates a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Requested combination is deliberately not implemented.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Iterative solve stopped at the sweep cap.
    #[error("no convergence after {sweeps} sweeps (residual {residual:e})")]
    NonConvergence { sweeps: usize, residual: f64 },

    /// Normal equations (or similar) have no unique solution.
    #[error("rank-deficient system: {0}")]
    RankDeficient(String),

    /// Region contains no usable nodes.
    #[error("empty region: {0}")]
    EmptyRegion(String),

    /// Bad configuration record.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
