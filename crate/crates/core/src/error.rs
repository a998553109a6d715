use thiserror::Error;

/// Errors raised by the evaluators in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0}")]
    DomainMembership(String),
    #[error("sector of angle {theta} is not convex")]
    NonConvexDomain { theta: f64 },
    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid radius window: {0}")]
    InvalidWindow(String),
    #[error("the map has a pole at the input point")]
    PoleAtInput,
    #[error("degenerate Möbius map (sv - tu = 0)")]
    DegenerateMap,
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),
    #[error("only the planar case is available, got dimension {n}")]
    UnsupportedDimension { n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
