use thiserror::Error;

/// Errors produced by the processing library.
///
/// Variants distinguish bad configuration/arguments from data problems
/// (shape mismatches, masked references) and numerical failures, so the
/// CLI can map them to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("reference pixel ({row}, {col}) is masked or non-finite")]
    MaskedReference { row: usize, col: usize },

    #[error("window {win_rows}x{win_cols} exceeds raster {rows}x{cols}")]
    WindowTooLarge {
        win_rows: usize,
        win_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("target NESZ {target_db} dB is below the original {orig_db} dB at incidence {incidence_deg} deg: cannot remove noise")]
    TargetBelowOriginal {
        target_db: f64,
        orig_db: f64,
        incidence_deg: f64,
    },

    #[error("NESZ model has no table and no fallback value")]
    EmptyNeszModel,

    #[error("interferogram network is disconnected: date components {0:?}")]
    DisconnectedNetwork(Vec<Vec<usize>>),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error for {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("bad raster file {path}: {reason}")]
    BadRasterFile { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
