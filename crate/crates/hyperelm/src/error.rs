use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Help or version text; not a failure.
    #[error("{0}")]
    Info(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] hyperelm_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: &Path, source: io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn csv(path: &Path, e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(source) => Error::io(path, source),
            other => Error::Format(format!("{}: {other:?}", path.display())),
        }
    }

    /// 1 for usage errors, 2 for data and IO errors, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        use hyperelm_core::Error as E;
        match self {
            Error::Info(_) => 0,
            Error::Usage(_) => 1,
            Error::Io { .. } | Error::Format(_) => 2,
            Error::Core(E::ConvergenceFailure(_) | E::NonFinite(_) | E::DegenerateSignal) => 3,
            Error::Core(E::InvalidConfig(_)) => 1,
            Error::Core(_) => 2,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
