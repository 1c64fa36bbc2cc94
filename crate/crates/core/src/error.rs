use thiserror::Error;

/// Errors produced by constructors, searches and parsers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed block: {0}")]
    MalformedBlock(String),

    #[error("label {label} is outside the point range 0..{points}")]
    LabelOutOfRange { label: u32, points: u32 },

    #[error("relabeling is not a bijection: {0}")]
    NotBijective(String),

    #[error("order {order} is not admissible: {reason}")]
    Inadmissible { order: u32, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn inadmissible(order: u32, reason: impl Into<String>) -> Self {
        Error::Inadmissible {
            order,
            reason: reason.into(),
        }
    }
}
