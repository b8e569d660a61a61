//! Parties, channels, checks, and session orchestration.

mod bits;
mod channel;
mod check;
mod config;
mod lab;
pub mod rng;
mod session;
mod transcript;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use bits::{BitString, ComparisonInput};
pub use channel::{
    insert_decoys, measure_decoys, run_check, transmit_qubits, Announcement, ChannelId,
    DecoyRecord, DecoyState,
};
pub use check::CheckReport;
pub use config::SessionConfig;
pub use lab::{Holder, Lab, QubitId};
pub use session::{
    run_session, run_session_detailed, run_session_with_id, Session, SessionOutcome,
};
pub use transcript::{Event, EventKind, Transcript, Verdict, TRANSCRIPT_SCHEMA};

/// The three roles of every session.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartyId {
    Alice = 0,
    Bob = 1,
    Tp = 2,
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartyId::Alice => "alice",
            PartyId::Bob => "bob",
            PartyId::Tp => "tp",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    /// GHZ triplets, X-basis keys, TP phase correction.
    Ghz,
    /// χ-type states, σx/I encoding, TP Bell decode.
    Chi,
    /// Bell pairs and entanglement swapping over 2-bit chunks.
    Swap,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 3] = [ProtocolKind::Ghz, ProtocolKind::Chi, ProtocolKind::Swap];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Ghz => "ghz",
            ProtocolKind::Chi => "chi",
            ProtocolKind::Swap => "swap",
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown protocol {s:?}")))
    }
}
