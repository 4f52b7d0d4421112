use std::path::PathBuf;

/// Errors raised by the simulation library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A scalar parameter is outside its admissible domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Vector or matrix dimensions do not agree.
    #[error("structural mismatch: {0}")]
    Structure(String),

    /// An adaptive quadrature failed to reach its tolerance.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    /// A sweep configuration file could not be parsed or is inconsistent.
    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
