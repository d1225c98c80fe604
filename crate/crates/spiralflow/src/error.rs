//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of a formula (e.g. `r <= 0`).
    #[error("domain error: {0}")]
    Domain(String),
    /// A requested range falls outside the available data.
    #[error("range error: {0}")]
    Range(String),
    /// A state or grid violates a structural invariant.
    #[error("invalid state: {0}")]
    State(String),
    /// The proposed time step exceeds the CFL bound for this state.
    #[error("rejected step: dt = {dt:.6e} exceeds CFL bound {bound:.6e}")]
    RejectedStep { dt: f64, bound: f64 },
    /// The explicit update produced a non-finite value.
    #[error("solution diverged at t = {t:.6e}")]
    Diverged { t: f64 },
    /// Initial data fails the compatibility condition where it is required.
    #[error("incompatible initial data: {0}")]
    Incompatible(String),
    /// A stated precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Marching squares found no zero-level segment.
    #[error("contour extraction produced no zero-level points")]
    EmptyContour,
    /// Accumulated configuration problems, one line each.
    #[error("configuration errors:\n{0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
