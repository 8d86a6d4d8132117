use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("graph is not weakly connected ({components} components)")]
    NotConnected { components: usize },

    #[error("need at least {needed} vertices, got {got}")]
    TooSmall { needed: usize, got: usize },

    #[error("graph contains a directed cycle")]
    Cyclic,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("matrix market parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported matrix market format: {0}")]
    UnsupportedFormat(String),

    #[error("pattern is not square ({rows} x {cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("conversion produced an empty graph")]
    EmptyGraph,

    #[error("graph has no edges")]
    NoEdges,

    #[error("vertex precedence violated: edge ({u}, {v}) points backwards")]
    PrecedenceViolation { u: usize, v: usize },

    #[error("backward cut ({backward}) exceeds forward cut ({forward})")]
    CutDirection { forward: usize, backward: usize },

    #[error("not a permutation of 0..{n}")]
    NotAPermutation { n: usize },

    #[error("order is not a topological order of the graph")]
    InvalidOrder,

    #[error("invalid vertex sets: {0}")]
    InvalidSets(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
