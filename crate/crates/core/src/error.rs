use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("shape mismatch: expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("dyadic index {j} outside resolved range [{j_min}, {j_max}]")]
    OutOfRange { j: i32, j_min: i32, j_max: i32 },

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("spectral support overflow: {0}")]
    SupportOverflow(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("parameter violates hypotheses: {0}")]
    Hypothesis(String),

    #[error("malformed snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
