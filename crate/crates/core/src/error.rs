use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("singular: {0}")]
    Singular(String),

    #[error("invalid mesh: {0}")]
    MeshInvalid(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("function does not live on the expected space: {0}")]
    SpaceMismatch(String),

    #[error("Newton iteration did not converge after {iterations} steps (last residual {last:.3e})", last = history.last().copied().unwrap_or(f64::NAN))]
    NonConvergence { iterations: usize, history: Vec<f64> },

    #[error("eigenvalue iteration did not converge: {0}")]
    Eigen(String),

    #[error("p = {p}, level {level}: {source}")]
    AtLevel {
        p: f64,
        level: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// The innermost error, looking through study context.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLevel { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
