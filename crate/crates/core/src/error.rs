use thiserror::Error;

/// Errors raised by constructors and bounded searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("order relation has a cycle through elements {0} and {1}")]
    Cycle(usize, usize),
    #[error("index {index} out of range for carrier of size {size}")]
    Index { index: usize, size: usize },
    #[error("set {set} has lub {actual}, not the claimed {claimed}")]
    LubMismatch {
        set: String,
        claimed: String,
        actual: String,
    },
    #[error("natural set {0} is not directed")]
    NotDirected(String),
    #[error("the empty set is natural but the order has no least element")]
    EmptySetWithoutBottom,
    #[error("{what}: requested {requested}, bound is {bound}")]
    BoundExceeded {
        what: &'static str,
        requested: usize,
        bound: usize,
    },
    #[error("axiom {axiom} is not defined for {mode} mode")]
    ModeMismatch { axiom: String, mode: String },
    #[error("map is not an element of the function space")]
    NotInCarrier,
    #[error("index poset is not directed")]
    NotDirectedPoset,
    #[error("map {0} is not continuous")]
    NotContinuous(usize),
    #[error("map is not monotone")]
    NotMonotone,
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
