use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot parse {token:?} at position {pos}: {msg}")]
    Parse {
        token: String,
        pos: usize,
        msg: String,
    },
    #[error("out of range: {0}")]
    Domain(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("certification failed: {0}")]
    Certification(String),
    #[error(transparent)]
    Core(#[from] pwa_core::Error),
}

impl CliError {
    /// Process exit status: 1 for failed checks, 2 for anything the caller
    /// supplied wrongly (bad flags, tokens, paths).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Certification(_) | CliError::Core(_) => 1,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
