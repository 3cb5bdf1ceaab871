use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("state blew up at step {step} (norm {norm:.3e})")]
    BlowUp { step: usize, norm: f64 },

    #[error(
        "circulant embedding is not nonnegative definite at this size \
         (min eigenvalue {min_eig:.3e}); enable the Cholesky fallback or change the grid"
    )]
    CirculantEmbedding { min_eig: f64 },

    #[error("not enough samples: {0}")]
    NotEnoughSamples(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
