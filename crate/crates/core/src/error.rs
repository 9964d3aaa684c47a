use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group {0} is empty (n = 0)")]
    EmptyGroup(String),

    #[error("{0} must be positive")]
    NonPositiveThreshold(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("value {x} is outside the domain [0, {n}]")]
    Domain { x: i64, n: u64 },

    #[error("n must be at least 1")]
    ZeroSize,

    #[error("column `{0}` not found in header")]
    MissingColumn(String),

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("dataset contains no records")]
    EmptyDataset,

    #[error("at least 2 groups are required, found {0}")]
    InsufficientGroups(usize),

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("cannot render an empty matrix")]
    EmptyMatrix,

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
