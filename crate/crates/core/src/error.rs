use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed text input. `line` is 1-based; 0 means the location is unknown.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("duplicate index {0} within a term")]
    DuplicateIndex(usize),

    #[error("alphabet violation: {0}")]
    Alphabet(String),

    #[error("bit-string width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("nnz {nnz} does not fit the requested {bits}-bit index width")]
    IndexOverflow { nnz: usize, bits: u32 },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
