//! What the third party can compute from its own view.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::protocol::swap;
use crate::runtime::{BitString, PartyId, ProtocolKind, Transcript, Verdict};

/// `x ⊕ y` recomputed from events visible to TP, or `None` if the session
/// aborted or the needed values are missing.
///
/// GHZ: TP's phase-corrected outcomes. χ: `R ⊕ R_t`. Swapping: the chunk
/// codes `R_j ⊕ R_C`, trimmed to the input width.
pub fn tp_recovered_xor(t: &Transcript) -> Option<BitString> {
    if t.result == Verdict::Aborted {
        return None;
    }
    let seen = |label| t.bits_seen_by(PartyId::Tp, label);
    match t.protocol {
        ProtocolKind::Ghz => seen("tp_outcomes").cloned(),
        ProtocolKind::Chi => seen("R")?.xor(seen("R_t")?).ok(),
        ProtocolKind::Swap => {
            let codes = seen("R_j")?.xor(seen("R_C")?).ok()?;
            debug_assert_eq!(codes.len(), 2 * swap::n_chunks(t.n_bits));
            Some(codes.iter().take(t.n_bits).collect())
        }
    }
}

/// Values tested for uniformity per protocol. `K_A` is Alice's private key,
/// included because TP's `C` is masked by it.
fn uniformity_labels(p: ProtocolKind) -> &'static [&'static str] {
    match p {
        ProtocolKind::Ghz => &["K_A", "C"],
        ProtocolKind::Chi => &["R", "R_t"],
        ProtocolKind::Swap => &["R_C", "R_j"],
    }
}

/// Uniformity of one value over the sessions sharing one `x ⊕ y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BitUniformity {
    pub label: String,
    pub xor_hex: String,
    pub samples: usize,
    pub ones: Vec<usize>,
    /// `(ones − S/2) / √(S/4)` per bit.
    pub z_scores: Vec<f64>,
    pub max_abs_z: f64,
    /// Goodness of fit of the whole value against uniform when there are at
    /// least five expected samples per cell, else Σ z² over bits.
    pub chi_square: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Distinct `x` values in the group.
    pub distinct_x: usize,
}

impl BitUniformity {
    fn compute(label: &str, xor_hex: String, values: &[&BitString], distinct_x: usize) -> Self {
        let samples = values.len();
        let width = values.first().map_or(0, |v| v.len());
        let mut ones = vec![0usize; width];
        for v in values {
            for (i, b) in v.iter().enumerate() {
                ones[i] += usize::from(b);
            }
        }
        let s = samples as f64;
        let z_scores: Vec<f64> = ones
            .iter()
            .map(|&k| (k as f64 - s / 2.0) / (s / 4.0).sqrt())
            .collect();
        let max_abs_z = z_scores.iter().fold(0.0f64, |m, z| m.max(z.abs()));
        let cells = 1usize
            .checked_shl(width as u32)
            .filter(|&c| width < 20 && samples >= 5 * c);
        let (chi_square, dof) = match cells {
            Some(c) => {
                let mut counts = vec![0usize; c];
                for v in values {
                    counts[v.to_u64().expect("narrow value") as usize] += 1;
                }
                let e = s / c as f64;
                (
                    counts.iter().map(|&k| (k as f64 - e).powi(2) / e).sum(),
                    c - 1,
                )
            }
            None => (z_scores.iter().map(|z| z * z).sum(), width),
        };
        let p_value = if dof == 0 {
            1.0
        } else {
            ChiSquared::new(dof as f64).expect("dof > 0").sf(chi_square)
        };
        Self {
            label: label.to_owned(),
            xor_hex,
            samples,
            ones,
            z_scores,
            max_abs_z,
            chi_square,
            dof,
            p_value,
            distinct_x,
        }
    }
}

/// Per-protocol part of a [`TpViewSummary`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolView {
    pub protocol: ProtocolKind,
    pub sessions: usize,
    pub completed: usize,
    /// Completed sessions where TP's recomputation equals `x ⊕ y`.
    pub xor_recovered: usize,
    pub uniformity: Vec<BitUniformity>,
}

impl ProtocolView {
    /// `x ⊕ y` was recomputed correctly in every completed session.
    pub fn xor_deterministic(&self) -> bool {
        self.completed > 0 && self.xor_recovered == self.completed
    }

    pub fn max_abs_z(&self) -> f64 {
        self.uniformity.iter().fold(0.0, |m, u| m.max(u.max_abs_z))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TpViewSummary {
    pub protocols: Vec<ProtocolView>,
}

impl TpViewSummary {
    pub fn get(&self, p: ProtocolKind) -> Option<&ProtocolView> {
        self.protocols.iter().find(|v| v.protocol == p)
    }
}

/// Groups transcripts by protocol and by `x ⊕ y`, checks TP's recomputation
/// of `x ⊕ y` and the uniformity of the masked values in each group.
pub fn tp_view_analysis(transcripts: &[Transcript]) -> Result<TpViewSummary> {
    if transcripts.is_empty() {
        return Err(Error::InvalidInput("no transcripts to analyse".into()));
    }
    let mut by_protocol: BTreeMap<ProtocolKind, Vec<&Transcript>> = BTreeMap::new();
    for t in transcripts {
        by_protocol.entry(t.protocol).or_default().push(t);
    }
    let mut protocols = Vec::new();
    for (protocol, group) in by_protocol {
        let mut completed = 0;
        let mut xor_recovered = 0;
        let mut classes: BTreeMap<u64, Vec<&Transcript>> = BTreeMap::new();
        for t in &group {
            let input = t.input()?;
            if let Some(r) = tp_recovered_xor(t) {
                completed += 1;
                if r.to_u64() == Some(input.x() ^ input.y()) {
                    xor_recovered += 1;
                }
                classes.entry(input.x() ^ input.y()).or_default().push(t);
            }
        }
        let mut uniformity = Vec::new();
        for (xor, members) in &classes {
            let n_bits = members[0].n_bits;
            let distinct_x = members
                .iter()
                .map(|t| t.x_hex.as_str())
                .collect::<std::collections::BTreeSet<_>>()
                .len();
            for label in uniformity_labels(protocol) {
                let values: Vec<&BitString> =
                    members.iter().filter_map(|t| t.bits(label)).collect();
                if values.len() == members.len() {
                    let hex = BitString::from_u64(*xor, n_bits).to_hex();
                    uniformity.push(BitUniformity::compute(label, hex, &values, distinct_x));
                }
            }
        }
        protocols.push(ProtocolView {
            protocol,
            sessions: group.len(),
            completed,
            xor_recovered,
            uniformity,
        });
    }
    Ok(TpViewSummary { protocols })
}
