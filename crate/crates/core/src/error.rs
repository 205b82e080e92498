use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the domain an operation is defined on.
    #[error("invalid {name} = {value}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("length mismatch: expected {expected} entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("mesh horizon {mesh} does not match problem horizon {problem}")]
    HorizonMismatch { mesh: f64, problem: f64 },

    #[error("{0} mesh is not supported by this scheme")]
    UnsupportedMesh(&'static str),

    /// No available representation reached the requested tolerance.
    #[error("Mittag-Leffler E_{alpha}({z}) did not converge: estimated error {estimate:e} > tol {tol:e}")]
    Accuracy {
        alpha: f64,
        z: f64,
        estimate: f64,
        tol: f64,
    },

    #[error("singular tridiagonal system at row {row}")]
    SingularSystem { row: usize },

    #[error("every exact value is below the comparison threshold; relative error undefined")]
    DegenerateExact,

    #[error("{0}")]
    InvalidInput(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            reason,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Checks `0 < alpha <= 1`.
pub(crate) fn check_order(name: &'static str, alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(name, alpha, "must lie in (0, 1]"))
    }
}

/// Checks `0 < alpha < 1`.
pub(crate) fn check_open_order(name: &'static str, alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(name, alpha, "must lie in (0, 1)"))
    }
}
