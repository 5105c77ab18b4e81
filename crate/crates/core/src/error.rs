use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("sign vector is all zero")]
    ZeroVector,

    #[error("sign vector has length {got}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },

    #[error("vertex selection is empty or not disjoint")]
    EmptySelection,

    #[error("max flow saturates every terminal arc; no cut below b(A) exists")]
    SaturatingFlow,

    #[error("flow path does not run s+ -> A -> ... -> B -> s-")]
    MalformedPath,

    #[error("demand degree of vertex {vertex} is {degree}, above 2*b = {limit}")]
    DegreeOverflow { vertex: usize, degree: u64, limit: u64 },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NumericalFailure { sweeps: usize },

    #[error("gaussian projection rejected {attempts} times")]
    RoundFail { attempts: usize },

    #[error("cut-matching game failed after exhausting {restarts} restarts")]
    GameFailed { restarts: usize },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("instance too large for exhaustive search: n = {n}, limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("recursion depth exceeded {0}")]
    RecursionLimit(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
