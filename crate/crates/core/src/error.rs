use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("{kind} gate takes a different number of qubits (got {controls} controls, {targets} targets)")]
    Arity {
        kind: &'static str,
        controls: usize,
        targets: usize,
    },
    #[error("{0} gate has a non-finite angle")]
    NonFiniteAngle(&'static str),
    #[error("qubit {qubit} out of range for width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("qubit {0} used more than once in one gate")]
    RepeatedQubit(usize),
    #[error("negated qubit {0} is not a control")]
    NegatedNotControl(usize),
    #[error("circuits do not share a layout (widths {left} and {right})")]
    LayoutMismatch { left: usize, right: usize },
    #[error("register width mismatch: expected {expected} qubits, got {got}")]
    RegisterWidth { expected: usize, got: usize },
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("bad layout: {0}")]
    BadLayout(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("line {line}: invalid symbol {symbol:?} (expected one of A, C, G, T)")]
    InvalidSymbol { line: usize, symbol: char },
    #[error("line {line}: empty sequence")]
    Empty { line: usize },
    #[error("sequence {index} has length {got}, expected {expected}")]
    LengthMismatch { index: usize, expected: usize, got: usize },
    #[error("no sequences in input")]
    NoSequences,
    #[error("sequence index {index} out of range ({count} sequences)")]
    IndexOutOfRange { index: usize, count: usize },
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum SimError {
    #[error("{qubits} qubits exceed the state-vector capacity of {cap} qubits")]
    Capacity { qubits: usize, cap: usize },
    #[error("simulation exceeded its time limit")]
    Timeout,
    #[error("circuit width {circuit} does not match state width {state}")]
    WidthMismatch { circuit: usize, state: usize },
}

#[derive(Debug, Error)]
pub enum GroverError {
    #[error("invalid search spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("no verified solution after {rounds} rounds (possibly no solution)")]
    Exhausted { rounds: usize },
}
