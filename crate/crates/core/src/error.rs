use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("nuclide `{0}` is not present in the microscopic library")]
    MissingNuclide(String),

    #[error("fission source extinct in cycle {cycle}: no fission sites were banked; increase particles_per_cycle")]
    Extinction { cycle: usize },

    #[error("{lost} of {histories} histories were lost to geometry errors (limit is 1e-6 of histories)")]
    TooManyLostParticles { lost: u64, histories: u64 },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("sorted output failed verification: {0}")]
    Verification(String),

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Whether the error stems from user input rather than a runtime failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_) | Error::Parse { .. } | Error::MissingNuclide(_) | Error::Config(_)
        )
    }
}
