//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by frame construction, decoding and the benchmark harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Frame parameters cannot describe a regular bipartite graph.
    #[error("infeasible frame parameters: {0}")]
    InfeasibleParams(String),

    /// Progressive edge growth could not place all edges without violating
    /// row regularity, even after reshuffling the variable order.
    #[error("frame construction failed after {attempts} attempts")]
    ConstructionFailed { attempts: u32 },

    /// A vector length does not match the frame dimension it is used with.
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Malformed frame file.
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },

    /// Frame row or column weight does not match the declared degrees.
    #[error("weight violation: {0}")]
    WeightViolation(String),

    /// A degree-one check with zero noise variance has no valid outgoing
    /// message (the variance would be exactly zero).
    #[error("degree-one check with zero noise variance has no valid message")]
    EmptyNeighborhood,

    /// A hyperprior scale must be strictly positive.
    #[error("beta must be positive, got {0}")]
    NonpositiveBeta(f64),

    /// A message variance must be strictly positive.
    #[error("variance must be positive, got {0}")]
    NonpositiveVariance(f64),

    /// Requested sparsity level exceeds the signal dimension.
    #[error("sparsity level {l} exceeds signal dimension {m}")]
    LExceedsM { l: usize, m: usize },

    /// Decoder or plan configuration is inconsistent.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A nonzero signal draw mapped to the zero observation twice in a row.
    #[error("degenerate signal: frame maps nonzero draw to zero")]
    DegenerateSignal,

    /// Relative distortion metrics are undefined for the zero signal.
    #[error("relative metrics undefined for zero signal")]
    ZeroSignal,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
