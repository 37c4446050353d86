//! Crate-wide error type.
//!
//! Everything fallible in the library returns [`Result`]. The split between
//! variants mirrors how callers need to react: [`Error::InvalidArgument`] and
//! [`Error::SizeMismatch`] are caller bugs or bad configs, while
//! [`Error::Degenerate`] and [`Error::Step`] mean the *curve itself* has
//! broken down (coincident nodes, vanishing tangent, nonfinite values) and a
//! simulation should abort rather than retry.

use std::fmt;

use thiserror::Error;

/// Which stage of the two-stage time step failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// The predictor half step to t + Δt/2.
    Half,
    /// The corrector producing the full step to t + Δt.
    Full,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Half => write!(f, "half step"),
            Stage::Full => write!(f, "full step"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Two grid functions that must share a grid size do not.
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    /// A parameter is out of its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The curve is geometrically unusable (coincident nodes, vanishing
    /// tangent, nonfinite coordinates). The message names the offending nodes.
    #[error("degenerate curve: {0}")]
    Degenerate(String),

    /// A time step failed; wraps the underlying failure and tags the stage.
    #[error("{stage} failed: {source}")]
    Step {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },

    /// A least-squares fit window is unusable (too few points, or the data
    /// has already reached the roundoff floor).
    #[error("fit window: {0}")]
    FitWindow(String),

    /// Malformed input file (CSV or JSON config).
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True when the failure means the simulated curve degenerated, as
    /// opposed to a caller mistake. CLI maps this to its own exit code.
    pub fn is_degeneracy(&self) -> bool {
        match self {
            Error::Degenerate(_) => true,
            Error::Step { source, .. } => source.is_degeneracy(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
