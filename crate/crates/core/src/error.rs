use thiserror::Error;

/// Errors raised by geometry, measure and selection routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The target point lies outside the body. `direction` is a unit vector
    /// with `<direction, x> - support(P, direction) = distance`.
    #[error("point lies outside the body at distance {distance:e}")]
    OutsideBody { distance: f64, direction: Vec<f64> },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("refinement failed near t = {t}: {reason}")]
    Refinement { t: f64, reason: String },

    #[error("cover construction failed: t = {t} left uncovered after {doublings} grid doublings")]
    Coverage { t: f64, doublings: u32 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
