use thiserror::Error;

use crate::Vertex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {0} is not in the vertex set")]
    UnknownVertex(Vertex),

    #[error("edge {0:?} repeats a vertex")]
    DegenerateEdge(Vec<Vertex>),

    #[error("edge {0:?} occurs more than once")]
    DuplicateEdge(Vec<Vertex>),

    #[error("query vertices must be distinct, {0} is repeated")]
    RepeatedVertex(Vertex),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("instance too large for exhaustive enumeration: {n} vertices (limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("{0:?} is not a path of length 2 in the graph")]
    NotAPath(Vec<Vertex>),

    #[error("{0:?} is not a 4-cycle in the 1-skeleton")]
    NotACycle(Vec<Vertex>),

    #[error("complex is not a closed surface")]
    NotClosed,

    #[error("complex is not a disk")]
    NotADisk,

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
