use thiserror::Error;

use crate::model::Block;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("element {element} outside ground set 1..={n}")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("block {block} has {found} elements, expected {expected}")]
    BlockSize {
        block: Block,
        found: usize,
        expected: usize,
    },

    #[error("duplicate block {0}")]
    DuplicateBlock(Block),

    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("search failed: {0}")]
    Search(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
