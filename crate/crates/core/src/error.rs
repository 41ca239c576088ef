use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A malformed line in one of the text formats.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("edge {{{u}, {v}}} is not an edge of the graph")]
    UnknownEdge { u: usize, v: usize },

    #[error("edge id {0} is not an edge of the graph")]
    UnknownEdgeId(usize),

    #[error("no path between {u} and {v}")]
    NoPath { u: usize, v: usize },

    #[error("stretch factor {0} must be a finite number >= 1")]
    InvalidStretch(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance degenerate: {0}")]
    Degenerate(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unsolved: node limit of {0} reached")]
    NodeLimit(u64),

    #[error("refusing to enumerate {assignments} assignments (cap {cap})")]
    OracleCap { assignments: f64, cap: u64 },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
