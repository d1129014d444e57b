use thiserror::Error;

/// Errors produced by the polardim library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge ({row}, {col}) is out of range for a graph with {n_nodes} nodes")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        n_nodes: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("graph has {n_nodes} nodes but at least {needed} are required")]
    GraphTooSmall { n_nodes: usize, needed: usize },

    #[error("entropy is undefined: {0}")]
    UndefinedEntropy(String),

    #[error("windows are not comparable: {0}")]
    NotComparable(String),

    #[error("window `{0}` produced an empty network")]
    EmptyNetwork(String),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
