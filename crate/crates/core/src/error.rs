use thiserror::Error;

use crate::quantum::QuantumError;
use crate::runtime::{PartyId, QubitId};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{what}: length {left} does not match {right}")]
    LengthMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },
    #[error("{party} does not hold qubit {qubit}")]
    NotHolder { party: PartyId, qubit: QubitId },
    #[error("qubit {0} is not in the lab")]
    UnknownQubit(QubitId),
    #[error("check announcement does not match the sender's record: {0}")]
    AnnouncementMismatch(String),
    #[error("missing protocol data: {0}")]
    MissingData(String),
    #[error("malformed transcript: {0}")]
    Transcript(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
