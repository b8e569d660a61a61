//! Exact state-vector kernel for the small registers the comparison protocols use.
//!
//! States are values: every operation takes a state by reference and returns a
//! fresh one, and every returned state has passed the normalization check.
//! Measurements remove the measured qubits from the register.

mod bell;
mod measure;
mod pauli;
mod state;

pub use bell::{prepare_bell, prepare_chi00, prepare_ghz3, BellKind};
pub use measure::{
    bell_branches, measure_bell, measure_x, measure_z, single_branches, x_branches, z_branches,
    Branch, MeasurementResult,
};
pub use pauli::{apply_pauli, PauliOp};
pub use state::{
    normalization_checks, Basis, StateVector, MAX_QUBITS, NORM_TOLERANCE, PHASE_TOLERANCE,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("amplitude vector length {0} is not a power of two")]
    BadLength(usize),
    #[error("register of {0} qubits exceeds the {max}-qubit cap", max = MAX_QUBITS)]
    TooManyQubits(usize),
    #[error("basis index {index} out of range for dimension {dim}")]
    BasisIndex { index: usize, dim: usize },
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("Bell measurement needs two distinct qubits, got ({0}, {0})")]
    SameQubit(usize),
    #[error("registers differ in size ({left} vs {right} qubits)")]
    SizeMismatch { left: usize, right: usize },
    #[error("state drifted off the unit sphere by {0:e}")]
    NotNormalized(f64),
}
