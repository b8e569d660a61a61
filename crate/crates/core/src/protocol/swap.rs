//! Entanglement-swapping comparison over 2-bit chunks.
//!
//! Every party starts from Φ+ pairs. A player and TP swap the second halves
//! of their pairs; the player then Bell-measures (own first half, TP's second
//! half) and TP Bell-measures (own first half, player's second half). By
//! entanglement swapping both get the same code. TP runs one independent set
//! of pairs per player, so `R_C = code_A ⊕ code_B`, and
//! `R_j ⊕ R_C = x_j ⊕ y_j` for the published `R_j = (R_A ⊕ x_j) ⊕ (R_B ⊕ y_j)`.
//!
//! Eavesdropping checks reuse the same trick: each side mixes `d` extra Φ+
//! pairs into its traveling sequence, and after delivery the check rounds are
//! swapped and measured exactly like comparison rounds. Both sides publish
//! their check codes; any disagreement counts as a check error.
//!
//! Chunk `j` of an input is `(x_{2j+1}, x_{2j})`, i.e. `(x >> 2j) & 3`; odd
//! widths are zero-padded at the top.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::quantum::{prepare_bell, BellKind};
use crate::runtime::rng::Stream;
use crate::runtime::{
    Announcement, BitString, ChannelId, CheckReport, EventKind, Lab, PartyId, QubitId, Session,
    SessionOutcome, Verdict,
};

use super::Rounds;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapRound {
    pub chunk: usize,
    pub x_chunk: u8,
    pub y_chunk: u8,
    pub r_a: u8,
    pub r_b: u8,
    pub r_c: u8,
    pub r: u8,
}

/// First and second halves of a party's Φ+ pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EprSequences {
    pub owner: PartyId,
    pub s1: Vec<QubitId>,
    pub s2: Vec<QubitId>,
}

/// Everything prepared before the exchanges.
#[derive(Clone, Debug)]
pub struct SwapPreparation {
    pub alice: EprSequences,
    pub bob: EprSequences,
    /// TP's pairs used with Alice.
    pub tp_alice: EprSequences,
    /// TP's pairs used with Bob.
    pub tp_bob: EprSequences,
}

impl SwapPreparation {
    pub fn player(&self, p: PartyId) -> &EprSequences {
        match p {
            PartyId::Bob => &self.bob,
            _ => &self.alice,
        }
    }

    pub fn tp_side(&self, p: PartyId) -> &EprSequences {
        match p {
            PartyId::Bob => &self.tp_bob,
            _ => &self.tp_alice,
        }
    }
}

pub fn n_chunks(n_bits: usize) -> usize {
    n_bits.div_ceil(2)
}

/// Two-bit chunk `j` of `value` as a code `(high, low) = (bit 2j+1, bit 2j)`.
pub fn chunk(value: u64, j: usize) -> u8 {
    if 2 * j >= 64 {
        0
    } else {
        ((value >> (2 * j)) & 0b11) as u8
    }
}

/// Packs 2-bit codes into a bit string, chunk `j` at bits `2j..2j+2`.
pub fn pack_codes(codes: &[u8]) -> BitString {
    codes.iter().flat_map(|&c| [c & 1, (c >> 1) & 1]).collect()
}

pub fn unpack_codes(bits: &BitString) -> Vec<u8> {
    (0..bits.len() / 2)
        .map(|j| bits.get(2 * j) | bits.get(2 * j + 1) << 1)
        .collect()
}

fn epr_sequences(lab: &mut Lab, owner: PartyId, n: usize) -> EprSequences {
    let (mut s1, mut s2) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let q = lab.prepare(owner, prepare_bell(BellKind::PhiPlus));
        s1.push(q[0]);
        s2.push(q[1]);
    }
    EprSequences { owner, s1, s2 }
}

/// Alice, Bob, and TP (twice) each prepare `n_chunks` Φ+ pairs.
pub fn swap_prepare(lab: &mut Lab, n_chunks: usize) -> Result<SwapPreparation> {
    if n_chunks == 0 {
        return Err(Error::InvalidInput("need at least one chunk".into()));
    }
    Ok(SwapPreparation {
        alice: epr_sequences(lab, PartyId::Alice, n_chunks),
        bob: epr_sequences(lab, PartyId::Bob, n_chunks),
        tp_alice: epr_sequences(lab, PartyId::Tp, n_chunks),
        tp_bob: epr_sequences(lab, PartyId::Tp, n_chunks),
    })
}

/// Result of one player↔TP exchange.
#[derive(Clone, Debug)]
pub struct ExchangeOutcome {
    /// TP's second halves as received by the player, checks removed.
    pub player_received: Vec<QubitId>,
    /// The player's second halves as received by TP, checks removed.
    pub tp_received: Vec<QubitId>,
    pub report: CheckReport,
}

struct CheckedSequence {
    sent: Vec<QubitId>,
    firsts: Vec<QubitId>,
    positions: Vec<usize>,
}

fn add_check_pairs<R: Rng + ?Sized>(
    lab: &mut Lab,
    owner: PartyId,
    s2: &[QubitId],
    d: usize,
    rng: &mut R,
) -> CheckedSequence {
    let total = s2.len() + d;
    let mut positions = index::sample(rng, total, d).into_vec();
    positions.sort_unstable();
    let mut firsts = Vec::with_capacity(d);
    let mut sent = Vec::with_capacity(total);
    let mut payload = s2.iter();
    for slot in 0..total {
        if positions.binary_search(&slot).is_ok() {
            let q = lab.prepare(owner, prepare_bell(BellKind::PhiPlus));
            firsts.push(q[0]);
            sent.push(q[1]);
        } else {
            sent.push(*payload.next().expect("slot count matches"));
        }
    }
    CheckedSequence {
        sent,
        firsts,
        positions,
    }
}

fn strip(received: &[QubitId], positions: &[usize]) -> Vec<QubitId> {
    received
        .iter()
        .enumerate()
        .filter(|(i, _)| positions.binary_search(i).is_err())
        .map(|(_, &q)| q)
        .collect()
}

/// Swaps second-half sequences between `player` and TP with `d` check pairs
/// from each side, then runs the swapped-check comparison.
pub fn swap_exchange_check(
    session: &mut Session<'_>,
    player: PartyId,
    own: &EprSequences,
    tp: &EprSequences,
    d: usize,
) -> Result<ExchangeOutcome> {
    let up = ChannelId::between(player, PartyId::Tp).expect("player channel");
    let down = ChannelId::between(PartyId::Tp, player).expect("TP channel");
    let player_link = Stream::Link {
        actor: player,
        counterpart: PartyId::Tp,
    };
    let tp_link = Stream::Link {
        actor: PartyId::Tp,
        counterpart: player,
    };
    let tag = player.to_string();

    let mine = add_check_pairs(
        &mut session.lab,
        player,
        &own.s2,
        d,
        session.rngs.get(player_link),
    );
    let theirs = add_check_pairs(
        &mut session.lab,
        PartyId::Tp,
        &tp.s2,
        d,
        session.rngs.get(tp_link),
    );

    let at_tp = session.send(up, &format!("S2:{tag}"), &mine.sent)?;
    let at_player = session.send(down, &format!("S2:tp_{tag}"), &theirs.sent)?;

    for (by, to, c) in [(player, PartyId::Tp, &mine), (PartyId::Tp, player, &theirs)] {
        session.record(
            by,
            &[to],
            EventKind::Announce {
                label: format!("check_positions:{by}_{tag}"),
                announcement: Announcement {
                    positions: c.positions.clone(),
                    bases: Vec::new(),
                },
            },
        );
    }

    // Check round k swaps the player's k-th check pair with TP's k-th.
    let mut player_codes = Vec::with_capacity(d);
    let mut tp_codes = Vec::with_capacity(d);
    for k in 0..d {
        let far = at_player[theirs.positions[k]];
        player_codes.push(swap_measure(
            &mut session.lab,
            player,
            mine.firsts[k],
            far,
            session.rngs.get(player_link),
        )?);
        let far = at_tp[mine.positions[k]];
        tp_codes.push(swap_measure(
            &mut session.lab,
            PartyId::Tp,
            theirs.firsts[k],
            far,
            session.rngs.get(tp_link),
        )?);
    }
    session.message(
        player,
        &[PartyId::Tp],
        &format!("check_codes:{tag}"),
        pack_codes(&player_codes),
    );
    session.message(
        PartyId::Tp,
        &[player],
        &format!("check_codes:tp_{tag}"),
        pack_codes(&tp_codes),
    );

    let report = CheckReport::tally(&player_codes, &tp_codes, session.config.check_threshold);
    session.check(
        PartyId::Tp,
        &[player],
        &format!("swap_check:{tag}"),
        vec![up, down],
        report.clone(),
    );

    Ok(ExchangeOutcome {
        player_received: strip(&at_player, &theirs.positions),
        tp_received: strip(&at_tp, &mine.positions),
        report,
    })
}

/// Bell-measures (retained first half, received second half) and returns the
/// two-bit code of the outcome.
pub fn swap_measure<R: Rng + ?Sized>(
    lab: &mut Lab,
    by: PartyId,
    retained: QubitId,
    received: QubitId,
    rng: &mut R,
) -> Result<u8> {
    Ok(lab.measure_bell(by, retained, received, rng)?.code())
}

/// `R = Σ_j popcount(R_j ⊕ R_C,j)`; equal iff `R = 0`.
pub fn swap_combine_and_verdict(rounds: &[SwapRound]) -> Result<(Verdict, u64)> {
    if rounds.is_empty() {
        return Err(Error::MissingData("no swap rounds".into()));
    }
    let total: u64 = rounds
        .iter()
        .map(|r| u64::from((r.r ^ r.r_c).count_ones()))
        .sum();
    let verdict = if total == 0 {
        Verdict::Equal
    } else {
        Verdict::NotEqual
    };
    Ok((verdict, total))
}

/// Which exchange runs first; results do not depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExchangeOrder {
    AliceFirst,
    BobFirst,
}

pub(crate) fn run(s: Session<'_>) -> Result<SessionOutcome> {
    run_ordered(s, ExchangeOrder::AliceFirst)
}

/// Runs the protocol with an explicit exchange order.
pub fn run_ordered(mut s: Session<'_>, order: ExchangeOrder) -> Result<SessionOutcome> {
    let n = n_chunks(s.input.n_bits());
    let d = s.config.checks_for(s.protocol, s.input.n_bits());
    let prep = swap_prepare(&mut s.lab, n)?;

    let players = match order {
        ExchangeOrder::AliceFirst => [PartyId::Alice, PartyId::Bob],
        ExchangeOrder::BobFirst => [PartyId::Bob, PartyId::Alice],
    };
    let mut codes = [Vec::new(), Vec::new()];
    let mut tp_codes = [Vec::new(), Vec::new()];
    for p in players {
        let slot = usize::from(p == PartyId::Bob);
        let ex = swap_exchange_check(&mut s, p, prep.player(p), prep.tp_side(p), d)?;
        if !ex.report.passed {
            return Ok(SessionOutcome {
                transcript: s.finish(Verdict::Aborted),
                rounds: None,
            });
        }
        let player_link = Stream::Link {
            actor: p,
            counterpart: PartyId::Tp,
        };
        let tp_link = Stream::Link {
            actor: PartyId::Tp,
            counterpart: p,
        };
        for j in 0..n {
            let own = prep.player(p).s1[j];
            codes[slot].push(swap_measure(
                &mut s.lab,
                p,
                own,
                ex.player_received[j],
                s.rngs.get(player_link),
            )?);
            let own = prep.tp_side(p).s1[j];
            tp_codes[slot].push(swap_measure(
                &mut s.lab,
                PartyId::Tp,
                own,
                ex.tp_received[j],
                s.rngs.get(tp_link),
            )?);
        }
        let (label, tp_label) = if slot == 0 {
            ("R_A", "T_A")
        } else {
            ("R_B", "T_B")
        };
        s.measurement(p, label, pack_codes(&codes[slot]));
        s.measurement(PartyId::Tp, tp_label, pack_codes(&tp_codes[slot]));
    }

    let (x, y) = (s.input.x(), s.input.y());
    let r_c: Vec<u8> = tp_codes[0]
        .iter()
        .zip(&tp_codes[1])
        .map(|(a, b)| a ^ b)
        .collect();
    s.note(PartyId::Tp, "R_C", pack_codes(&r_c));

    let masked: Vec<u8> = (0..n).map(|j| codes[0][j] ^ chunk(x, j)).collect();
    s.message(
        PartyId::Alice,
        &[PartyId::Bob],
        "share_a",
        pack_codes(&masked),
    );
    let r: Vec<u8> = (0..n)
        .map(|j| masked[j] ^ codes[1][j] ^ chunk(y, j))
        .collect();
    s.message(PartyId::Bob, &[PartyId::Tp], "R_j", pack_codes(&r));

    let rounds: Vec<SwapRound> = (0..n)
        .map(|j| SwapRound {
            chunk: j,
            x_chunk: chunk(x, j),
            y_chunk: chunk(y, j),
            r_a: codes[0][j],
            r_b: codes[1][j],
            r_c: r_c[j],
            r: r[j],
        })
        .collect();
    let (verdict, total) = swap_combine_and_verdict(&rounds)?;
    s.record(
        PartyId::Tp,
        &[PartyId::Alice, PartyId::Bob],
        EventKind::Tally {
            label: "R".into(),
            value: total,
        },
    );
    Ok(SessionOutcome {
        transcript: s.finish(verdict),
        rounds: Some(Rounds::Swap(rounds)),
    })
}
