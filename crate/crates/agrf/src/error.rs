//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument violates a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Thin-plate spline interpolation system is singular (collinear or
    /// duplicated nodes).
    #[error("degenerate interpolation nodes: {0}")]
    DegenerateNodes(String),

    /// Finite element assembly failed (e.g. non-SPD metric at a centroid).
    #[error("operator assembly failed: {0}")]
    Assembly(String),

    /// A dense-path operation was requested above the configured dense cap.
    #[error("problem too large for dense path: {size} unknowns exceeds cap {cap}")]
    TooLarge { size: usize, cap: usize },

    /// Numerical failure (factorization breakdown, non-finite values, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A mask construction produced no observation points.
    #[error("empty mask: {0}")]
    EmptyMask(String),

    /// Malformed binary or text input.
    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
