use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list is empty")]
    EmptyInput,

    #[error("unknown node {0}")]
    UnknownNode(u64),

    #[error("node pair must have distinct endpoints (got {0} twice)")]
    SelfPair(u64),

    #[error("nodes {0} and {1} are adjacent; use the direct similarity instead")]
    AdjacentPair(u64, u64),

    #[error("nodes {0} and {1} are not adjacent")]
    NotAdjacent(u64, u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sampling infeasible: {0}")]
    Sampling(String),

    #[error("training failed: {0}")]
    Training(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("fold {fold}: {message}")]
    Fold { fold: usize, message: String },

    #[error("cell (k={k}, selector={selector}): {source}")]
    Cell {
        k: usize,
        selector: String,
        #[source]
        source: Box<Error>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("baseline {0:?} is already registered")]
    DuplicateBaseline(String),

    #[error("unknown selector {0:?}")]
    UnknownSelector(String),

    #[error("checksum mismatch for {path}: expected {expected}, found {found}")]
    Checksum {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("download of {url} failed: {message} (retry later, or place the file manually with `fetch --from <path>`)")]
    Network { url: String, message: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Coarse failure class, used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Runtime,
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Config(_) | Error::UnknownSelector(_) | Error::DuplicateBaseline(_) => {
                ErrorKind::Config
            }
            Error::Parse { .. }
            | Error::EmptyInput
            | Error::UnknownNode(_)
            | Error::Checksum { .. }
            | Error::Io { .. }
            | Error::Network { .. }
            | Error::Json(_) => ErrorKind::Data,
            Error::Cell { source, .. } => source.kind(),
            _ => ErrorKind::Runtime,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::Config => 2,
            ErrorKind::Data => 3,
            ErrorKind::Runtime => 4,
        }
    }
}
