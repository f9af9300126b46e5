use std::path::PathBuf;

/// Errors raised while reading or writing token files and reports.
#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("bad magic {0:?}, expected \"TOK1\"")]
    BadMagic(String),
    #[error("unsupported TOK1 version {0}, expected 1")]
    Version(u32),
    #[error("truncated file: expected {expected} bytes, found {actual}")]
    Truncated { expected: u64, actual: u64 },
    #[error("trailing data: expected {expected} bytes, found {actual}")]
    TrailingData { expected: u64, actual: u64 },
    #[error("matrix of {rows}x{dims} floats overflows addressable size")]
    SizeOverflow { rows: u64, dims: u64 },
    #[error("matrix of {rows}x{dims} does not fit the TOK1 u32 header")]
    TooLarge { rows: usize, dims: usize },
    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("score file must hold a single row or column, got {rows}x{dims}")]
    ScoreShape { rows: usize, dims: usize },
    #[error(transparent)]
    Invalid(#[from] tokfuse_core::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl FormatError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;
