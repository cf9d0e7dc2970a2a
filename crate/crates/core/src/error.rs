use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed graph document: {0}")]
    MalformedGraph(String),

    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),

    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),

    #[error("self-loop: edge `{0}` has identical endpoints")]
    SelfLoop(String),

    #[error("parallel edge: edge `{edge}` duplicates the endpoints of `{existing}`")]
    ParallelEdge { edge: String, existing: String },

    #[error("dangling endpoint: edge `{edge}` references unknown vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("index {index} out of range for {what} of size {len}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric: |m[{row}][{col}] - m[{col}][{row}]| = {deviation:e}")]
    NotSymmetric { row: usize, col: usize, deviation: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("ambiguous kernel: eigenvalue {eigenvalue:e} lies within the guard band of tolerance {tol:e}")]
    AmbiguousKernel { eigenvalue: f64, tol: f64 },

    #[error("route disagreement in {quantity}: {detail}")]
    RouteDisagreement { quantity: &'static str, detail: String },

    #[error("eigenvalue grouping is ambiguous: gap {gap:e} is comparable to tolerance {tol:e}")]
    AmbiguousGrouping { gap: f64, tol: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("zero state has no direction")]
    ZeroState,

    #[error("not a discrete Morse function: {0}")]
    NotMorse(String),

    #[error("missing Morse value for {0}")]
    MissingValue(String),

    #[error("illegal rewiring move: {0}")]
    IllegalMove(String),

    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
