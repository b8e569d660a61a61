use std::fmt;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{AttackConfig, Interception};
use crate::error::{Error, Result};
use crate::quantum::{Basis, StateVector};

use super::{CheckReport, Lab, PartyId, QubitId};

/// A one-directional quantum channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelId {
    TpToAlice = 0,
    TpToBob = 1,
    AliceToTp = 2,
    BobToTp = 3,
}

impl ChannelId {
    pub const ALL: [ChannelId; 4] = [
        ChannelId::TpToAlice,
        ChannelId::TpToBob,
        ChannelId::AliceToTp,
        ChannelId::BobToTp,
    ];

    pub fn from(self) -> PartyId {
        match self {
            ChannelId::TpToAlice | ChannelId::TpToBob => PartyId::Tp,
            ChannelId::AliceToTp => PartyId::Alice,
            ChannelId::BobToTp => PartyId::Bob,
        }
    }

    pub fn to(self) -> PartyId {
        match self {
            ChannelId::AliceToTp | ChannelId::BobToTp => PartyId::Tp,
            ChannelId::TpToAlice => PartyId::Alice,
            ChannelId::TpToBob => PartyId::Bob,
        }
    }

    pub fn between(from: PartyId, to: PartyId) -> Option<ChannelId> {
        Self::ALL
            .into_iter()
            .find(|c| c.from() == from && c.to() == to)
    }

    pub fn name(self) -> &'static str {
        match self {
            ChannelId::TpToAlice => "tp_to_alice",
            ChannelId::TpToBob => "tp_to_bob",
            ChannelId::AliceToTp => "alice_to_tp",
            ChannelId::BobToTp => "bob_to_tp",
        }
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ChannelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown channel {s:?}")))
    }
}

/// Sends `qubits` across `channel`, letting the adversary act on each one in
/// flight. Interceptions go to `log`, which the parties never see.
pub fn transmit_qubits<R: Rng + ?Sized>(
    lab: &mut Lab,
    channel: ChannelId,
    qubits: &[QubitId],
    attack: &AttackConfig,
    eve_rng: &mut R,
    log: &mut Vec<Interception>,
) -> Result<Vec<QubitId>> {
    for (position, &q) in qubits.iter().enumerate() {
        lab.depart(q, channel)?;
        if attack.targets(channel) {
            log.push(crate::adversary::intercept_in_lab(
                lab,
                channel,
                position,
                q,
                attack.basis,
                eve_rng,
            )?);
        }
        lab.arrive(q, channel)?;
    }
    Ok(qubits.to_vec())
}

/// One of the four single-qubit check states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecoyState {
    Z0,
    Z1,
    XPlus,
    XMinus,
}

impl DecoyState {
    pub const ALL: [DecoyState; 4] = [
        DecoyState::Z0,
        DecoyState::Z1,
        DecoyState::XPlus,
        DecoyState::XMinus,
    ];

    pub fn basis(self) -> Basis {
        match self {
            DecoyState::Z0 | DecoyState::Z1 => Basis::Z,
            DecoyState::XPlus | DecoyState::XMinus => Basis::X,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            DecoyState::Z0 | DecoyState::XPlus => 0,
            DecoyState::Z1 | DecoyState::XMinus => 1,
        }
    }

    pub fn from_parts(basis: Basis, bit: u8) -> Self {
        match (basis, bit & 1) {
            (Basis::Z, 0) => DecoyState::Z0,
            (Basis::Z, _) => DecoyState::Z1,
            (Basis::X, 0) => DecoyState::XPlus,
            (Basis::X, _) => DecoyState::XMinus,
        }
    }

    pub fn state(self) -> StateVector {
        StateVector::single(self.basis(), self.bit())
    }
}

/// The sender's private record of where decoys sit and what they are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoyRecord {
    pub positions: Vec<usize>,
    pub states: Vec<DecoyState>,
}

impl DecoyRecord {
    /// What the sender reveals after delivery: positions and bases, not bits.
    pub fn announcement(&self) -> Announcement {
        Announcement {
            positions: self.positions.clone(),
            bases: self.states.iter().map(|s| s.basis()).collect(),
        }
    }
}

/// Publicly revealed check positions with the basis to measure each in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Announcement {
    pub positions: Vec<usize>,
    pub bases: Vec<Basis>,
}

/// Mixes `d` fresh decoys into `sequence` at uniformly random distinct
/// positions of the augmented sequence.
pub fn insert_decoys<R: Rng + ?Sized>(
    lab: &mut Lab,
    owner: PartyId,
    sequence: &[QubitId],
    d: usize,
    rng: &mut R,
) -> (Vec<QubitId>, DecoyRecord) {
    let total = sequence.len() + d;
    let mut positions = index::sample(rng, total, d).into_vec();
    positions.sort_unstable();
    let states: Vec<DecoyState> = (0..d)
        .map(|_| DecoyState::ALL[rng.random_range(0..4)])
        .collect();
    let mut out = Vec::with_capacity(total);
    let mut payload = sequence.iter();
    let mut next_decoy = 0;
    for slot in 0..total {
        if positions.get(next_decoy) == Some(&slot) {
            out.push(lab.prepare(owner, states[next_decoy].state())[0]);
            next_decoy += 1;
        } else {
            out.push(*payload.next().expect("slot count matches"));
        }
    }
    (out, DecoyRecord { positions, states })
}

/// Receiver side: measures the announced positions in the announced bases
/// and returns the outcomes plus the sequence with decoys stripped.
pub fn measure_decoys<R: Rng + ?Sized>(
    lab: &mut Lab,
    by: PartyId,
    received: &[QubitId],
    announcement: &Announcement,
    rng: &mut R,
) -> Result<(Vec<u8>, Vec<QubitId>)> {
    let Announcement { positions, bases } = announcement;
    if positions.len() != bases.len() {
        return Err(Error::AnnouncementMismatch(format!(
            "{} positions but {} bases",
            positions.len(),
            bases.len()
        )));
    }
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::AnnouncementMismatch(
            "positions not strictly increasing".into(),
        ));
    }
    if let Some(&last) = positions.last() {
        if last >= received.len() {
            return Err(Error::AnnouncementMismatch(format!(
                "position {last} beyond sequence of {}",
                received.len()
            )));
        }
    }
    let mut outcomes = Vec::with_capacity(positions.len());
    for (&p, &b) in positions.iter().zip(bases) {
        outcomes.push(lab.measure(by, received[p], b, rng)?);
    }
    let kept = received
        .iter()
        .enumerate()
        .filter(|(i, _)| positions.binary_search(i).is_err())
        .map(|(_, &q)| q)
        .collect();
    Ok((outcomes, kept))
}

/// Compares the receiver's decoy outcomes with the sender's record.
pub fn run_check(
    record: &DecoyRecord,
    announced: &Announcement,
    outcomes: &[u8],
    threshold: f64,
) -> Result<CheckReport> {
    if *announced != record.announcement() {
        return Err(Error::AnnouncementMismatch(
            "announced positions or bases differ from the record".into(),
        ));
    }
    if outcomes.len() != record.states.len() {
        return Err(Error::AnnouncementMismatch(format!(
            "{} outcomes for {} decoys",
            outcomes.len(),
            record.states.len()
        )));
    }
    let expected: Vec<u8> = record.states.iter().map(|s| s.bit()).collect();
    Ok(CheckReport::tally(&expected, outcomes, threshold))
}
