use thiserror::Error;

/// Errors raised by constructors, transforms and drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("the origin is not an interior point of the polytope")]
    OriginNotInterior,
    #[error("improper function: {0}")]
    Improper(String),
    #[error("function is not coercive: {0}")]
    NotCoercive(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("unsupported dimension {0} (only 1 and 2 are supported)")]
    UnsupportedDimension(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty set: {0}")]
    Empty(String),
    #[error("slope set does not positively span the space")]
    NotSpanning,
    #[error("samples are not strictly increasing")]
    Unsorted,
    #[error("quadrature box too small: boundary mass {boundary:e} of total {total:e}")]
    BoxTooSmall { boundary: f64, total: f64 },
    #[error("all candidates are degenerate: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
