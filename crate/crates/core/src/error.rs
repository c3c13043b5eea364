use thiserror::Error;

/// Errors produced anywhere in the coloring pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("duplicate node label `{0}`")]
    DuplicateNode(String),
    #[error("edge endpoint `{0}` is not a declared node")]
    UnknownNode(String),
    #[error("self-loop on node `{0}`")]
    SelfLoop(String),
    #[error("degenerate interval for `{label}`: start {start} >= end {end}")]
    DegenerateInterval { label: String, start: f64, end: f64 },
    #[error("assignment is partial: node `{0}` has no color")]
    PartialAssignment(String),
    #[error("color {color} of node `{label}` is outside 0..{k}")]
    ColorOutOfRange { label: String, color: usize, k: usize },
    #[error("order is not a permutation of the graph nodes: {0}")]
    InvalidPermutation(String),
    #[error("enumeration needs {needed} evaluations, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("qubit index {index} out of range for {qubits} qubits")]
    QubitOutOfRange { index: usize, qubits: usize },
    #[error("objective returned {value} at parameters {params:?}")]
    NonFiniteObjective { value: f64, params: Vec<f64> },
    #[error("restart {restart}: {source}")]
    Restart {
        restart: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("case file: {0}")]
    CaseFile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
