use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("unsupported field order {0}")]
    UnsupportedField(u32),
    #[error("orthogonal array has duplicate rows {0} and {1}")]
    DuplicateRows(usize, usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("construction unsupported: {0}")]
    ConstructionUnsupported(String),
    #[error("delivery array disagrees with placement at row {row}, user {user}")]
    ConsistencyViolation { row: usize, user: usize },
    #[error("sender {sender} lacks packet row {row} needed for label s{label}")]
    ProtocolViolation { label: u32, sender: usize, row: usize },
    #[error("user {user} cannot recover packet row {row} from label s{label}")]
    DecodeFailure { user: usize, row: usize, label: u32 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameters(msg.into())
    }

    pub(crate) fn malformed(line: usize, msg: impl Into<String>) -> Self {
        Error::Malformed { line, msg: msg.into() }
    }
}
