use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit count {qubits} outside supported range 1..={max}")]
    QubitCountOutOfRange { qubits: usize, max: usize },

    #[error("basis index {index} out of range for dimension {dim}")]
    BasisIndexOutOfRange { index: usize, dim: usize },

    #[error("wire {wire} out of range for a {qubits}-qubit register")]
    WireOutOfRange { wire: usize, qubits: usize },

    #[error("wire {wire} used more than once in one gate")]
    DuplicateWire { wire: usize },

    #[error("expected {expected} parameters, got {got}")]
    ParamCountMismatch { expected: usize, got: usize },

    #[error("qubit count mismatch: expected {expected}, got {got}")]
    QubitMismatch { expected: usize, got: usize },

    #[error("need at least {min} qubits, got {qubits}")]
    TooFewQubits { qubits: usize, min: usize },

    #[error("layer count must be at least 1")]
    NoLayers,

    #[error("dense unitary of {qubits} qubits exceeds the cap of {max}")]
    SizeCapExceeded { qubits: usize, max: usize },

    #[error("non-finite angle {0}")]
    NonFiniteAngle(f64),

    #[error("invalid parameter slots: {0}")]
    InvalidSlots(String),

    #[error("invalid truth table: {0}")]
    InvalidTruthTable(String),

    #[error("non-finite cost {cost} at step {step}; params = {params:?}")]
    NonFiniteCost {
        step: usize,
        cost: f64,
        params: Vec<f64>,
    },

    #[error("invalid optimizer config: {0}")]
    InvalidConfig(String),

    #[error("finite-difference step must be positive and finite, got {0}")]
    InvalidStep(f64),

    #[error("{0} gates cannot be expressed in the export format")]
    Unexportable(&'static str),

    #[error("qasm line {line}: {msg}")]
    Qasm { line: usize, msg: String },
}
