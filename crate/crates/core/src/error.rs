use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid catalog: {0}")]
    InvalidCatalog(String),

    #[error("non-increasing times at index {index}")]
    NonIncreasingTimes { index: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("singular triggering matrix: diagonal entry {index} is {value:e}")]
    SingularMatrix { index: usize, value: f64 },

    #[error("nonpositive intensity {value:e} at event {index}")]
    NonPositiveIntensity { index: usize, value: f64 },

    #[error("productivity estimates sum to {0:e}; cannot rescale")]
    ZeroSum(f64),

    #[error("degenerate spread: all values are identical")]
    DegenerateSpread,

    #[error("empty input")]
    EmptyInput,

    #[error("event count exceeded cap of {cap}")]
    CascadeCapExceeded { cap: usize },

    #[error("overlapping periods at row {row}")]
    OverlappingPeriods { row: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
