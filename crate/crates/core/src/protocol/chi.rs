//! χ-type-state comparison.
//!
//! Each χ state pairs the Z values `(a, b)` of particles 1–2 with a Bell
//! state on particles 3–4 that is Φ-type when `a = b` and Ψ-type otherwise.
//! The players flip their particle with σx when their secret bit is 1 and
//! read it in Z; TP reads the Φ/Ψ type of its pair. `R ⊕ R_t` is `x ⊕ y`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::quantum::{prepare_chi00, Basis, PauliOp};
use crate::runtime::rng::Stream;
use crate::runtime::{
    BitString, ChannelId, CheckReport, Lab, PartyId, QubitId, Session, SessionOutcome, Verdict,
};

use super::Rounds;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiRound {
    pub index: usize,
    pub r_a: u8,
    pub r_b: u8,
    pub r: u8,
    pub r_t: u8,
}

#[derive(Clone, Debug)]
pub struct ChiDistribution {
    pub alice: Vec<QubitId>,
    pub bob: Vec<QubitId>,
    /// Particles 3 and 4 of each state, kept by TP.
    pub tp_pairs: Vec<(QubitId, QubitId)>,
    pub checks: Vec<CheckReport>,
    pub states_prepared: usize,
}

impl ChiDistribution {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// TP prepares `n` χ states, sends particle 1 to Alice and particle 2 to Bob
/// behind decoys, and keeps particles 3 and 4.
pub fn chi_distribute(session: &mut Session<'_>, n: usize) -> Result<ChiDistribution> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one χ state".into()));
    }
    let (mut to_alice, mut to_bob, mut tp_pairs) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..n {
        let q = session.lab.prepare(PartyId::Tp, prepare_chi00());
        to_alice.push(q[0]);
        to_bob.push(q[1]);
        tp_pairs.push((q[2], q[3]));
    }
    let d = session.config.decoys_per_channel;
    let (alice, check_a) = session.send_with_decoys(ChannelId::TpToAlice, "S_A", &to_alice, d)?;
    let (bob, check_b) = session.send_with_decoys(ChannelId::TpToBob, "S_B", &to_bob, d)?;
    Ok(ChiDistribution {
        alice,
        bob,
        tp_pairs,
        checks: vec![check_a, check_b],
        states_prepared: n,
    })
}

/// σx when `secret_bit = 1`, identity otherwise, then a Z readout.
pub fn chi_encode_and_measure<R: Rng + ?Sized>(
    lab: &mut Lab,
    by: PartyId,
    qubit: QubitId,
    secret_bit: u8,
    rng: &mut R,
) -> Result<u8> {
    let op = if secret_bit & 1 == 1 {
        PauliOp::X
    } else {
        PauliOp::I
    };
    lab.apply_pauli(by, qubit, op)?;
    lab.measure(by, qubit, Basis::Z, rng)
}

/// TP Bell-measures each retained pair (`Φ± → 0`, `Ψ± → 1`) and compares
/// against the players' `R`. Returns the verdict and `R_t`.
pub fn chi_tp_verdict<R: Rng + ?Sized>(
    lab: &mut Lab,
    r: &BitString,
    pairs: &[(QubitId, QubitId)],
    rng: &mut R,
) -> Result<(Verdict, BitString)> {
    if r.len() != pairs.len() {
        return Err(Error::LengthMismatch {
            what: "R vs retained pairs",
            left: r.len(),
            right: pairs.len(),
        });
    }
    let r_t: BitString = pairs
        .iter()
        .map(|&(p3, p4)| {
            lab.measure_bell(PartyId::Tp, p3, p4, rng)
                .map(|k| u8::from(!k.is_phi()))
        })
        .collect::<Result<_>>()?;
    let verdict = if r.xor(&r_t)?.is_zero() {
        Verdict::Equal
    } else {
        Verdict::NotEqual
    };
    Ok((verdict, r_t))
}

fn readout(
    s: &mut Session<'_>,
    who: PartyId,
    qubits: &[QubitId],
    secret: &BitString,
) -> Result<BitString> {
    qubits
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            chi_encode_and_measure(
                &mut s.lab,
                who,
                q,
                secret.get(i),
                s.rngs.get(Stream::Measure(who)),
            )
        })
        .collect()
}

pub(crate) fn run(mut s: Session<'_>) -> Result<SessionOutcome> {
    let n = s.input.n_bits();
    let (x, y) = (s.input.x_bits(), s.input.y_bits());

    let dist = chi_distribute(&mut s, n)?;
    if !dist.passed() {
        return Ok(SessionOutcome {
            transcript: s.finish(Verdict::Aborted),
            rounds: None,
        });
    }

    let r_a = readout(&mut s, PartyId::Alice, &dist.alice, &x)?;
    s.measurement(PartyId::Alice, "R_a", r_a.clone());
    let r_b = readout(&mut s, PartyId::Bob, &dist.bob, &y)?;
    s.measurement(PartyId::Bob, "R_b", r_b.clone());

    // Alice shares R_a with Bob; Bob forms R and sends it to TP.
    s.message(PartyId::Alice, &[PartyId::Bob], "share_a", r_a.clone());
    let r = r_a.xor(&r_b)?;
    s.message(PartyId::Bob, &[PartyId::Tp], "R", r.clone());

    let (verdict, r_t) = chi_tp_verdict(
        &mut s.lab,
        &r,
        &dist.tp_pairs,
        s.rngs.get(Stream::Measure(PartyId::Tp)),
    )?;
    s.measurement(PartyId::Tp, "R_t", r_t.clone());

    let rounds = (0..n)
        .map(|i| ChiRound {
            index: i,
            r_a: r_a.get(i),
            r_b: r_b.get(i),
            r: r.get(i),
            r_t: r_t.get(i),
        })
        .collect();
    Ok(SessionOutcome {
        transcript: s.finish(verdict),
        rounds: Some(Rounds::Chi(rounds)),
    })
}
