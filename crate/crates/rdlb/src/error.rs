use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}:{line}: {msg}")]
    Config {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("unknown scenario `{0}` (expected baseline, failures:K|half|max, pe[:mult], latency[:secs], combined[:mult:secs])")]
    UnknownScenario(String),
    #[error("bad value for {key}: `{value}`")]
    BadValue { key: &'static str, value: String },
    #[error("{0}")]
    Core(#[from] rdlb_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("write failed")]
    Write(#[from] std::io::Error),
}

impl Error {
    /// Whether the error comes from bad user input rather than a failed run.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::Config { .. } | Error::UnknownScenario(_) | Error::BadValue { .. } => true,
            Error::Core(e) => matches!(e, rdlb_core::Error::UnknownTechnique(_)),
            Error::Io { .. } | Error::Write(_) => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}
