use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {offset}: expected one of {expected:?}, found {found}")]
    Syntax {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown moment `{0}`")]
    UnknownMoment(String),
    #[error("unknown history `{0}`")]
    UnknownHistory(String),
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("operator not supported here: {0}")]
    UnsupportedOperator(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("search timed out after exploring {explored} models")]
    Timeout { explored: u64 },
    #[error("file format error: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
