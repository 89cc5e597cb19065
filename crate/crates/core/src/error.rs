use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("subset enumeration needs {subsets} terms, above the cap of {cap}; use a Monte Carlo estimate")]
    EnumerationCap { subsets: u128, cap: u128 },

    #[error("{what} of size {size} exceeds the limit of {limit}")]
    SizeGuard { what: &'static str, size: usize, limit: usize },

    #[error("label {label} outside 1..={classes}")]
    LabelOutOfRange { label: i64, classes: usize },

    #[error("non-finite {0}")]
    NonFinite(&'static str),

    #[error("training diverged: non-finite loss at batch {batch}")]
    Divergence { batch: usize },

    #[error("invalid selection schedule: {0}")]
    InvalidSchedule(String),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("{path}:{line}: {message}")]
    MalformedRow { path: PathBuf, line: u64, message: String },

    #[error("{path}:{line}: label {label} outside 1..={classes}")]
    LabelOnLine { path: PathBuf, line: u64, label: i64, classes: usize },

    #[error("bad magic: expected {expected:?}, found {found:?}")]
    MagicMismatch { expected: [u8; 8], found: Vec<u8> },

    #[error("unsupported container version {0}")]
    UnsupportedVersion(u32),

    #[error("truncated container: expected at least {expected} bytes, found {actual}")]
    Truncated { expected: u64, actual: u64 },

    #[error("container checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { stored: u32, computed: u32 },

    #[error("malformed container: {0}")]
    Format(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by the filesystem or by unreadable files.
    pub fn is_io(&self) -> bool {
        matches!(
            self,
            Error::Io(_)
                | Error::Csv(_)
                | Error::MalformedRow { .. }
                | Error::LabelOnLine { .. }
                | Error::MagicMismatch { .. }
                | Error::UnsupportedVersion(_)
                | Error::Truncated { .. }
                | Error::Checksum { .. }
                | Error::Format(_)
        )
    }
}
