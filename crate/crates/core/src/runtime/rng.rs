use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ChannelId, PartyId};

/// Independent random sources within one session.
///
/// Each purpose gets its own ChaCha stream keyed by `(seed, session_id, tag)`,
/// so the order in which independent steps run does not change their draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stream {
    /// Preparation choices made by a party (decoy states and positions).
    Prepare(PartyId),
    /// Measurement sampling performed by a party.
    Measure(PartyId),
    /// Everything `actor` does inside its exchange with `counterpart`.
    Link {
        actor: PartyId,
        counterpart: PartyId,
    },
    /// The eavesdropper on one channel.
    Eve(ChannelId),
    /// Input sampling for batch experiments.
    Inputs,
}

impl Stream {
    fn tag(self) -> u64 {
        let party = |p: PartyId| p as u64;
        match self {
            Stream::Prepare(p) => 0x100 | party(p),
            Stream::Measure(p) => 0x200 | party(p),
            Stream::Link { actor, counterpart } => 0x300 | party(actor) << 4 | party(counterpart),
            Stream::Eve(c) => 0x400 | c as u64,
            Stream::Inputs => 0x500,
        }
    }
}

/// Deterministic generator for one `(seed, session, stream)` triple.
pub fn stream_rng(seed: u64, session_id: u64, stream: Stream) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&session_id.to_le_bytes());
    key[16..24].copy_from_slice(&stream.tag().to_le_bytes());
    key[24..].copy_from_slice(b"qpc/rng\0");
    ChaCha8Rng::from_seed(key)
}

/// Lazily created per-stream generators for one session.
#[derive(Debug)]
pub struct RngBank {
    seed: u64,
    session_id: u64,
    streams: BTreeMap<Stream, ChaCha8Rng>,
}

impl RngBank {
    pub fn new(seed: u64, session_id: u64) -> Self {
        Self {
            seed,
            session_id,
            streams: BTreeMap::new(),
        }
    }

    pub fn get(&mut self, stream: Stream) -> &mut ChaCha8Rng {
        let (seed, id) = (self.seed, self.session_id);
        self.streams
            .entry(stream)
            .or_insert_with(|| stream_rng(seed, id, stream))
    }
}
