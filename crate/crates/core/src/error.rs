use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("{0}")]
    Invalid(String),
    #[error("degenerate bandwidth: all values are identical; pass a fallback bandwidth (e.g. 0.1) or add more distinct values")]
    DegenerateBandwidth,
    #[error("length mismatch: {0} vs {1} labels")]
    LengthMismatch(usize, usize),
    #[error("label `{0}` has no category mapping")]
    UnmappedLabel(String),
    #[error("unknown report format `{0}` (expected json or csv)")]
    UnknownFormat(String),
    #[error("authentication failed: {0}")]
    Auth(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
