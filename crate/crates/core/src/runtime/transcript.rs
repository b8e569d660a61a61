use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::adversary::Interception;
use crate::error::{Error, Result};

use super::{
    Announcement, BitString, ChannelId, CheckReport, ComparisonInput, PartyId, ProtocolKind,
    QubitId, SessionConfig,
};

/// Version tag written into every transcript.
pub const TRANSCRIPT_SCHEMA: &str = "v1";

/// Final outcome of a session.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Equal,
    NotEqual,
    Aborted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "EQUAL",
            Verdict::NotEqual => "NOT_EQUAL",
            Verdict::Aborted => "ABORTED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    /// A batch of qubits handed to a quantum channel, in transmission order.
    QubitSend {
        channel: ChannelId,
        label: String,
        qubits: Vec<QubitId>,
    },
    /// A classical bit string on the public authenticated channel.
    Message {
        label: String,
        bits: BitString,
    },
    /// Check positions and bases revealed after delivery.
    Announce {
        label: String,
        #[serde(flatten)]
        announcement: Announcement,
    },
    /// Raw measurement outcomes, private to the actor.
    Measurement {
        label: String,
        bits: BitString,
    },
    /// A value the actor computed and kept, private to the actor.
    Record {
        label: String,
        bits: BitString,
    },
    Check {
        label: String,
        channels: Vec<ChannelId>,
        report: CheckReport,
    },
    /// An integer announcement.
    Tally {
        label: String,
        value: u64,
    },
    Verdict {
        result: Verdict,
    },
}

impl EventKind {
    pub fn label(&self) -> Option<&str> {
        match self {
            EventKind::QubitSend { label, .. }
            | EventKind::Message { label, .. }
            | EventKind::Announce { label, .. }
            | EventKind::Measurement { label, .. }
            | EventKind::Record { label, .. }
            | EventKind::Check { label, .. }
            | EventKind::Tally { label, .. } => Some(label),
            EventKind::Verdict { .. } => None,
        }
    }

    pub fn bits(&self) -> Option<&BitString> {
        match self {
            EventKind::Message { bits, .. }
            | EventKind::Measurement { bits, .. }
            | EventKind::Record { bits, .. } => Some(bits),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub seq: usize,
    pub actor: PartyId,
    pub visible_to: Vec<PartyId>,
    #[serde(flatten)]
    pub kind: EventKind,
}

/// Everything a session produced, in order.
///
/// `adversary_log` is the eavesdropper's private record; it is kept for
/// analysis and is not part of any party's view.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub schema: String,
    pub session_id: u64,
    pub protocol: ProtocolKind,
    pub n_bits: usize,
    pub x_hex: String,
    pub y_hex: String,
    pub config: SessionConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub events: Vec<Event>,
    pub result: Verdict,
    pub adversary_log: Vec<Interception>,
}

impl Transcript {
    pub fn input(&self) -> Result<ComparisonInput> {
        let x = BitString::from_hex(&self.x_hex, self.n_bits)?;
        let y = BitString::from_hex(&self.y_hex, self.n_bits)?;
        let to_int = |b: BitString| {
            b.to_u64()
                .ok_or_else(|| Error::Transcript("input wider than 64 bits".into()))
        };
        ComparisonInput::new(to_int(x)?, to_int(y)?, self.n_bits as u32)
    }

    pub fn labeled<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a Event> + 'a {
        self.events
            .iter()
            .filter(move |e| e.kind.label() == Some(label))
    }

    /// Bit payload of the first event carrying `label`.
    pub fn bits(&self, label: &str) -> Option<&BitString> {
        self.events
            .iter()
            .filter(|e| e.kind.label() == Some(label))
            .find_map(|e| e.kind.bits())
    }

    pub fn tally(&self, label: &str) -> Option<u64> {
        self.labeled(label).find_map(|e| match e.kind {
            EventKind::Tally { value, .. } => Some(value),
            _ => None,
        })
    }

    /// Events `party` saw or produced.
    pub fn view(&self, party: PartyId) -> impl Iterator<Item = &Event> + '_ {
        self.events
            .iter()
            .filter(move |e| e.visible_to.contains(&party))
    }

    /// Bits of `label` as `party` can see them.
    pub fn bits_seen_by(&self, party: PartyId, label: &str) -> Option<&BitString> {
        self.view(party)
            .filter(|e| e.kind.label() == Some(label))
            .find_map(|e| e.kind.bits())
    }

    pub fn checks(&self) -> impl Iterator<Item = &CheckReport> + '_ {
        self.events.iter().filter_map(|e| match &e.kind {
            EventKind::Check { report, .. } => Some(report),
            _ => None,
        })
    }

    /// Number of channel crossings per qubit id.
    pub fn qubit_crossings(&self) -> BTreeMap<QubitId, usize> {
        let mut out = BTreeMap::new();
        for e in &self.events {
            if let EventKind::QubitSend { qubits, .. } = &e.kind {
                for q in qubits {
                    *out.entry(*q).or_default() += 1;
                }
            }
        }
        out
    }

    /// Checks the structural invariants every transcript must satisfy.
    pub fn validate(&self) -> Result<()> {
        if self.schema != TRANSCRIPT_SCHEMA {
            return Err(Error::Transcript(format!(
                "unknown schema {:?}",
                self.schema
            )));
        }
        for (i, e) in self.events.iter().enumerate() {
            if e.seq != i {
                return Err(Error::Transcript(format!("event {i} has seq {}", e.seq)));
            }
        }
        let failed = self.checks().any(|r| !r.passed);
        if failed != (self.result == Verdict::Aborted) {
            return Err(Error::Transcript(format!(
                "result {} but failed check = {failed}",
                self.result
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: Transcript = serde_json::from_str(s)?;
        t.validate()?;
        Ok(t)
    }
}
