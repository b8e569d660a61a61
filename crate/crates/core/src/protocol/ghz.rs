//! GHZ-triplet comparison.
//!
//! TP hands out the first two particles of each triplet. The players read
//! X-basis keys from them, publish `C = x ⊕ K_A ⊕ y ⊕ K_B`, and TP flips the
//! phase of its own particle wherever `C` is set. Because the three X outcomes
//! of a triplet have even parity, TP's corrected X outcome is `x_i ⊕ y_i`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::quantum::{prepare_ghz3, Basis, PauliOp};
use crate::runtime::rng::Stream;
use crate::runtime::{
    BitString, ChannelId, CheckReport, Lab, PartyId, QubitId, Session, SessionOutcome, Verdict,
};

use super::Rounds;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhzRound {
    pub index: usize,
    pub key_a: u8,
    pub key_b: u8,
    pub cipher: u8,
    pub tp_outcome: u8,
}

/// Who holds what after distribution, decoys already removed.
#[derive(Clone, Debug)]
pub struct GhzDistribution {
    pub alice: Vec<QubitId>,
    pub bob: Vec<QubitId>,
    pub tp: Vec<QubitId>,
    pub checks: Vec<CheckReport>,
}

impl GhzDistribution {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// TP prepares `n` triplets and sends particle 1 to Alice and particle 2 to
/// Bob, each sequence protected by decoys and checked by TP.
pub fn ghz_distribute(session: &mut Session<'_>, n: usize) -> Result<GhzDistribution> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one triplet".into()));
    }
    let (mut to_alice, mut to_bob, mut tp) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..n {
        let q = session.lab.prepare(PartyId::Tp, prepare_ghz3());
        to_alice.push(q[0]);
        to_bob.push(q[1]);
        tp.push(q[2]);
    }
    let d = session.config.decoys_per_channel;
    let (alice, check_a) = session.send_with_decoys(ChannelId::TpToAlice, "S_A", &to_alice, d)?;
    let (bob, check_b) = session.send_with_decoys(ChannelId::TpToBob, "S_B", &to_bob, d)?;
    Ok(GhzDistribution {
        alice,
        bob,
        tp,
        checks: vec![check_a, check_b],
    })
}

/// X-basis readout of each particle: `|+⟩ → 0`, `|−⟩ → 1`.
pub fn ghz_extract_keys<R: Rng + ?Sized>(
    lab: &mut Lab,
    by: PartyId,
    qubits: &[QubitId],
    rng: &mut R,
) -> Result<BitString> {
    qubits
        .iter()
        .map(|&q| lab.measure(by, q, Basis::X, rng))
        .collect()
}

/// `C_A = x ⊕ K_A`.
pub fn ghz_encrypt(secret: &BitString, key: &BitString) -> Result<BitString> {
    secret.xor(key)
}

/// `C = (x ⊕ K_A) ⊕ (y ⊕ K_B)`.
pub fn ghz_encrypt_combine(
    x: &BitString,
    key_a: &BitString,
    y: &BitString,
    key_b: &BitString,
) -> Result<BitString> {
    if !(x.len() == key_a.len() && x.len() == y.len() && y.len() == key_b.len()) {
        return Err(Error::LengthMismatch {
            what: "GHZ encryption operands",
            left: x.len(),
            right: [key_a.len(), y.len(), key_b.len()]
                .into_iter()
                .find(|&l| l != x.len())
                .unwrap_or(x.len()),
        });
    }
    ghz_encrypt(x, key_a)?.xor(&ghz_encrypt(y, key_b)?)
}

/// TP applies σz to retained qubit `i` when `C_i = 1`, X-measures all of
/// them, and reports `NotEqual` iff any outcome is `|−⟩`. Also returns the
/// outcome vector.
pub fn ghz_tp_verdict<R: Rng + ?Sized>(
    lab: &mut Lab,
    cipher: &BitString,
    retained: &[QubitId],
    rng: &mut R,
) -> Result<(Verdict, BitString)> {
    if cipher.len() != retained.len() {
        return Err(Error::LengthMismatch {
            what: "cipher vs retained qubits",
            left: cipher.len(),
            right: retained.len(),
        });
    }
    let mut outcomes = BitString::default();
    for (i, &q) in retained.iter().enumerate() {
        if cipher.get(i) == 1 {
            lab.apply_pauli(PartyId::Tp, q, PauliOp::Z)?;
        }
        outcomes.push(lab.measure(PartyId::Tp, q, Basis::X, rng)?);
    }
    let verdict = if outcomes.is_zero() {
        Verdict::Equal
    } else {
        Verdict::NotEqual
    };
    Ok((verdict, outcomes))
}

pub(crate) fn run(mut s: Session<'_>) -> Result<SessionOutcome> {
    let n = s.input.n_bits();
    let (x, y) = (s.input.x_bits(), s.input.y_bits());

    let dist = ghz_distribute(&mut s, n)?;
    if !dist.passed() {
        return Ok(SessionOutcome {
            transcript: s.finish(Verdict::Aborted),
            rounds: None,
        });
    }

    let key_a = ghz_extract_keys(
        &mut s.lab,
        PartyId::Alice,
        &dist.alice,
        s.rngs.get(Stream::Measure(PartyId::Alice)),
    )?;
    s.measurement(PartyId::Alice, "K_A", key_a.clone());
    let key_b = ghz_extract_keys(
        &mut s.lab,
        PartyId::Bob,
        &dist.bob,
        s.rngs.get(Stream::Measure(PartyId::Bob)),
    )?;
    s.measurement(PartyId::Bob, "K_B", key_b.clone());

    // Alice hands C_A to Bob, who folds in C_B and forwards C to TP.
    let c_a = ghz_encrypt(&x, &key_a)?;
    s.message(PartyId::Alice, &[PartyId::Bob], "C_A", c_a.clone());
    let cipher = c_a.xor(&ghz_encrypt(&y, &key_b)?)?;
    s.message(PartyId::Bob, &[PartyId::Tp], "C", cipher.clone());

    let (verdict, outcomes) = ghz_tp_verdict(
        &mut s.lab,
        &cipher,
        &dist.tp,
        s.rngs.get(Stream::Measure(PartyId::Tp)),
    )?;
    s.measurement(PartyId::Tp, "tp_outcomes", outcomes.clone());

    let rounds = (0..n)
        .map(|i| GhzRound {
            index: i,
            key_a: key_a.get(i),
            key_b: key_b.get(i),
            cipher: cipher.get(i),
            tp_outcome: outcomes.get(i),
        })
        .collect();
    Ok(SessionOutcome {
        transcript: s.finish(verdict),
        rounds: Some(Rounds::Ghz(rounds)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{apply_pauli, x_branches};

    fn bits(v: u64, n: usize) -> BitString {
        BitString::from_u64(v, n)
    }

    #[test]
    fn encrypt_combine_examples() {
        let c = ghz_encrypt_combine(&bits(0b101, 3), &bits(0, 3), &bits(0b101, 3), &bits(0, 3))
            .unwrap();
        assert_eq!(c, bits(0, 3));
        let c = ghz_encrypt_combine(
            &bits(0b101, 3),
            &bits(0b110, 3),
            &bits(0b001, 3),
            &bits(0b011, 3),
        )
        .unwrap();
        assert_eq!(c, bits(0b001, 3));
        let swapped = ghz_encrypt_combine(
            &bits(0b001, 3),
            &bits(0b011, 3),
            &bits(0b101, 3),
            &bits(0b110, 3),
        )
        .unwrap();
        assert_eq!(c, swapped);
        assert!(matches!(
            ghz_encrypt_combine(&bits(0, 3), &bits(0, 2), &bits(0, 3), &bits(0, 3)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    /// Walks every X-outcome branch (k_a, k_b) of one triplet and the TP
    /// step for a given (x_i, y_i), returning TP's outcome per branch.
    fn tp_outcomes_over_branches(xi: u8, yi: u8) -> Vec<(f64, u8)> {
        let mut out = Vec::new();
        for a in x_branches(&prepare_ghz3(), 0).unwrap() {
            let after_a = a.post_state.unwrap();
            for b in x_branches(&after_a, 0).unwrap() {
                let tp = b.post_state.unwrap();
                let c = xi ^ a.outcome ^ yi ^ b.outcome;
                let tp = if c == 1 {
                    apply_pauli(&tp, 0, PauliOp::Z).unwrap()
                } else {
                    tp
                };
                for t in x_branches(&tp, 0).unwrap() {
                    if t.probability > 1e-12 {
                        out.push((a.probability * b.probability * t.probability, t.outcome));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn tp_outcome_is_xor_on_every_branch() {
        for xi in 0..2u8 {
            for yi in 0..2u8 {
                let branches = tp_outcomes_over_branches(xi, yi);
                let total: f64 = branches.iter().map(|b| b.0).sum();
                assert!((total - 1.0).abs() < 1e-12);
                assert_eq!(branches.len(), 4);
                assert!(branches.iter().all(|&(_, t)| t == xi ^ yi));
            }
        }
    }

    #[test]
    fn verdict_length_mismatch() {
        let mut lab = Lab::new();
        let mut rng = crate::runtime::rng::stream_rng(0, 0, Stream::Inputs);
        assert!(ghz_tp_verdict(&mut lab, &bits(0, 2), &[], &mut rng).is_err());
    }

    #[test]
    fn empty_key() {
        let mut lab = Lab::new();
        let mut rng = crate::runtime::rng::stream_rng(0, 0, Stream::Inputs);
        assert!(ghz_extract_keys(&mut lab, PartyId::Alice, &[], &mut rng)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn zero_cipher_applies_no_correction() {
        let mut lab = Lab::new();
        let mut rng = crate::runtime::rng::stream_rng(1, 0, Stream::Inputs);
        let q = lab.prepare(PartyId::Tp, crate::quantum::StateVector::plus());
        let (v, out) = ghz_tp_verdict(&mut lab, &bits(0, 1), &q, &mut rng).unwrap();
        assert_eq!(v, Verdict::Equal);
        assert_eq!(out, bits(0, 1));
    }
}
