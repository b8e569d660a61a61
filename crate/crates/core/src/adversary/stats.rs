//! Detection-rate experiments and eavesdropper accuracy.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

use crate::error::{Error, Result};
use crate::runtime::rng::{stream_rng, Stream};
use crate::runtime::{
    run_session_detailed, BitString, ChannelId, ComparisonInput, EventKind, PartyId, ProtocolKind,
    SessionConfig, Transcript, Verdict,
};

use super::tp_view::tp_recovered_xor;
use super::{AttackKind, BasisStrategy};

/// Probability that one check unit reports an error when `attacked` of its
/// traveling particles were intercepted.
///
/// Decoys carry one particle, so any interception gives 1/4. A swap check
/// round carries one particle each way: one interception gives 1/2; two give
/// 1/2 with a fixed basis and 5/8 with uniformly random bases.
pub fn per_check_detection(
    protocol: ProtocolKind,
    strategy: BasisStrategy,
    attacked: usize,
) -> f64 {
    match (protocol, attacked) {
        (_, 0) => 0.0,
        (ProtocolKind::Ghz | ProtocolKind::Chi, _) => 0.25,
        (ProtocolKind::Swap, 1) => 0.5,
        (ProtocolKind::Swap, _) => match strategy {
            BasisStrategy::UniformRandom => 0.625,
            BasisStrategy::AlwaysZ | BasisStrategy::AlwaysX => 0.5,
        },
    }
}

/// Largest mismatch count that still passes a check of `d` units.
fn allowed_mismatches(d: usize, threshold: f64) -> usize {
    (0..=d)
        .take_while(|&m| m as f64 / d as f64 <= threshold)
        .last()
        .unwrap_or(0)
}

/// `P(check of d units fails)` when each unit errs independently with `p`.
fn check_failure(d: usize, p: f64, threshold: f64) -> f64 {
    if d == 0 || p == 0.0 {
        return 0.0;
    }
    let k = allowed_mismatches(d, threshold);
    if k >= d {
        return 0.0;
    }
    let b = Binomial::new(p, d as u64).expect("p in [0, 1]");
    b.sf(k as u64)
}

/// Abort probability of one session under `config`, treating each checked
/// link as an independent binomial experiment.
pub fn analytic_abort_rate(protocol: ProtocolKind, n_bits: usize, config: &SessionConfig) -> f64 {
    let attack = &config.attack;
    if attack.kind == AttackKind::None {
        return 0.0;
    }
    let d = config.checks_for(protocol, n_bits);
    let links: Vec<usize> = match protocol {
        ProtocolKind::Ghz | ProtocolKind::Chi => [ChannelId::TpToAlice, ChannelId::TpToBob]
            .iter()
            .map(|&c| usize::from(attack.targets(c)))
            .collect(),
        ProtocolKind::Swap => [PartyId::Alice, PartyId::Bob]
            .iter()
            .map(|&p| {
                let up = ChannelId::between(p, PartyId::Tp).expect("channel");
                let down = ChannelId::between(PartyId::Tp, p).expect("channel");
                usize::from(attack.targets(up)) + usize::from(attack.targets(down))
            })
            .collect(),
    };
    let survive: f64 = links
        .into_iter()
        .map(|k| {
            1.0 - check_failure(
                d,
                per_check_detection(protocol, attack.basis, k),
                config.check_threshold,
            )
        })
        .product();
    1.0 - survive
}

/// Eve's guess of `x` from her log on the TP→Alice channel plus whatever
/// Alice published.
///
/// GHZ: `x̂ = C_A ⊕ e`. χ: `x̂ = share_a ⊕ e`. Without the public value
/// (aborted sessions) the guess is `e` itself. `None` for the swapping
/// protocol, or when Eve did not cover every payload position.
pub fn eve_guesses(transcript: &Transcript) -> Option<BitString> {
    let public = match transcript.protocol {
        ProtocolKind::Ghz => "C_A",
        ProtocolKind::Chi => "share_a",
        ProtocolKind::Swap => return None,
    };
    let decoys = transcript.events.iter().find_map(|e| match &e.kind {
        EventKind::Announce {
            label,
            announcement,
        } if label == "decoy_positions:S_A" => Some(announcement.positions.clone()),
        _ => None,
    });
    let sent = transcript.events.iter().find_map(|e| match &e.kind {
        EventKind::QubitSend {
            channel: ChannelId::TpToAlice,
            qubits,
            ..
        } => Some(qubits.len()),
        _ => None,
    })?;
    let mut log: Vec<_> = transcript
        .adversary_log
        .iter()
        .filter(|i| i.channel == ChannelId::TpToAlice)
        .collect();
    log.sort_by_key(|i| i.position);
    if log.len() != sent {
        return None;
    }
    let decoys = decoys.unwrap_or_default();
    let e: BitString = log
        .iter()
        .filter(|i| !decoys.contains(&i.position))
        .map(|i| i.outcome)
        .collect();
    match transcript.bits(public) {
        Some(p) => p.xor(&e).ok(),
        None => Some(e),
    }
}

/// One trial of a detection experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub session_id: u64,
    pub x: u64,
    pub y: u64,
    pub result: Verdict,
    /// `(correct, total)` bits of Eve's guess of `x`.
    pub eve_bits: Option<(usize, usize)>,
    /// Whether TP's view reproduced `x ⊕ y`; `None` when aborted.
    pub tp_xor_ok: Option<bool>,
}

impl TrialSummary {
    pub fn from_transcript(t: &Transcript) -> Result<Self> {
        let input = t.input()?;
        let truth_x = input.x_bits();
        let eve_bits = eve_guesses(t).map(|g| {
            let wrong = g.xor(&truth_x).map(|d| d.count_ones()).unwrap_or(g.len());
            (g.len() - wrong, g.len())
        });
        let tp_xor_ok = tp_recovered_xor(t).map(|r| r.to_u64() == Some(input.x() ^ input.y()));
        Ok(Self {
            session_id: t.session_id,
            x: input.x(),
            y: input.y(),
            result: t.result,
            eve_bits,
            tp_xor_ok,
        })
    }

    pub fn aborted(&self) -> bool {
        self.result == Verdict::Aborted
    }

    /// A completed session whose verdict disagrees with `x = y`.
    pub fn wrong_verdict(&self) -> bool {
        !self.aborted() && (self.result == Verdict::Equal) != (self.x == self.y)
    }
}

/// A batch of sessions with random inputs under one config.
#[derive(Clone, Debug)]
pub struct DetectionExperiment {
    pub protocol: ProtocolKind,
    pub n_bits: u32,
    pub config: SessionConfig,
    pub trials: u64,
    pub parallel: bool,
}

impl DetectionExperiment {
    pub fn new(protocol: ProtocolKind, n_bits: u32, config: SessionConfig, trials: u64) -> Self {
        Self {
            protocol,
            n_bits,
            config,
            trials,
            parallel: true,
        }
    }

    pub fn serial(mut self) -> Self {
        self.parallel = false;
        self
    }

    /// Inputs of trial `t`, drawn from the seed's input stream for session `t`.
    pub fn inputs(&self, t: u64) -> Result<ComparisonInput> {
        let mut rng = stream_rng(self.config.seed, t, Stream::Inputs);
        let top = if self.n_bits >= 64 {
            u64::MAX
        } else {
            (1u64 << self.n_bits) - 1
        };
        ComparisonInput::new(
            rng.random_range(0..=top),
            rng.random_range(0..=top),
            self.n_bits,
        )
    }

    pub fn run_trial(&self, t: u64) -> Result<TrialSummary> {
        let input = self.inputs(t)?;
        let out = run_session_detailed(self.protocol, &input, &self.config, t)?;
        TrialSummary::from_transcript(&out.transcript)
    }

    /// All trials in session-id order, whatever the execution order.
    pub fn run_trials(&self) -> Result<Vec<TrialSummary>> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        if self.parallel {
            (0..self.trials)
                .into_par_iter()
                .map(|t| self.run_trial(t))
                .collect()
        } else {
            (0..self.trials).map(|t| self.run_trial(t)).collect()
        }
    }

    pub fn run(&self) -> Result<LeakageReport> {
        let trials = self.run_trials()?;
        Ok(LeakageReport::from_trials(self, &trials))
    }
}

/// Aggregate of a detection experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeakageReport {
    pub protocol: ProtocolKind,
    pub n_bits: u32,
    pub checks_per_link: usize,
    pub trials: u64,
    pub aborted: u64,
    pub abort_rate: f64,
    pub analytic_abort_rate: f64,
    /// Binomial standard deviation of `abort_rate` under the analytic rate.
    pub abort_sigma: f64,
    pub eve_bit_accuracy: Option<f64>,
    pub eve_bit_accuracy_completed: Option<f64>,
    pub eve_bit_accuracy_aborted: Option<f64>,
    /// Every completed session let TP recompute `x ⊕ y` from its view.
    pub tp_recoverable_xor: bool,
    /// Completed sessions with the wrong verdict.
    pub wrong_verdicts: u64,
}

fn accuracy<'a>(it: impl Iterator<Item = &'a TrialSummary>) -> Option<f64> {
    let (hit, total) = it
        .filter_map(|t| t.eve_bits)
        .fold((0usize, 0usize), |(h, n), (c, m)| (h + c, n + m));
    (total > 0).then(|| hit as f64 / total as f64)
}

impl LeakageReport {
    pub fn from_trials(exp: &DetectionExperiment, trials: &[TrialSummary]) -> Self {
        let n = trials.len() as u64;
        let aborted = trials.iter().filter(|t| t.aborted()).count() as u64;
        let analytic = analytic_abort_rate(exp.protocol, exp.n_bits as usize, &exp.config);
        let completed: Vec<_> = trials.iter().filter(|t| !t.aborted()).collect();
        Self {
            protocol: exp.protocol,
            n_bits: exp.n_bits,
            checks_per_link: exp.config.checks_for(exp.protocol, exp.n_bits as usize),
            trials: n,
            aborted,
            abort_rate: aborted as f64 / n.max(1) as f64,
            analytic_abort_rate: analytic,
            abort_sigma: (analytic * (1.0 - analytic) / n.max(1) as f64).sqrt(),
            eve_bit_accuracy: accuracy(trials.iter()),
            eve_bit_accuracy_completed: accuracy(completed.iter().copied()),
            eve_bit_accuracy_aborted: accuracy(trials.iter().filter(|t| t.aborted())),
            tp_recoverable_xor: !completed.is_empty()
                && completed.iter().all(|t| t.tp_xor_ok == Some(true)),
            wrong_verdicts: completed.iter().filter(|t| t.wrong_verdict()).count() as u64,
        }
    }

    /// `|abort_rate − analytic| ≤ k σ`; a zero σ demands exact agreement.
    pub fn abort_within(&self, k: f64) -> bool {
        (self.abort_rate - self.analytic_abort_rate).abs() <= k * self.abort_sigma + 1e-12
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Runs `trials` sessions with random `n_bits`-wide inputs in parallel.
pub fn detection_stats(
    protocol: ProtocolKind,
    n_bits: u32,
    config: &SessionConfig,
    trials: u64,
) -> Result<LeakageReport> {
    DetectionExperiment::new(protocol, n_bits, config.clone(), trials).run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::AttackConfig;

    #[test]
    fn analytic_rates() {
        let c = SessionConfig::default().with_decoys(16).with_attack(
            AttackConfig::intercept_resend(BasisStrategy::UniformRandom)
                .on(&[ChannelId::TpToAlice]),
        );
        let expect = 1.0 - 0.75f64.powi(16);
        assert!((analytic_abort_rate(ProtocolKind::Ghz, 4, &c) - expect).abs() < 1e-12);
        let both = c
            .clone()
            .with_attack(AttackConfig::intercept_resend(BasisStrategy::AlwaysZ));
        let expect2 = 1.0 - 0.75f64.powi(32);
        assert!((analytic_abort_rate(ProtocolKind::Chi, 4, &both) - expect2).abs() < 1e-12);
        let swap = SessionConfig::default().with_check_pairs(8).with_attack(
            AttackConfig::intercept_resend(BasisStrategy::AlwaysZ).on(&[ChannelId::AliceToTp]),
        );
        assert!(
            (analytic_abort_rate(ProtocolKind::Swap, 4, &swap) - (1.0 - 0.5f64.powi(8))).abs()
                < 1e-12
        );
        assert_eq!(
            analytic_abort_rate(ProtocolKind::Ghz, 4, &SessionConfig::default()),
            0.0
        );
    }

    #[test]
    fn threshold_tail() {
        // d = 4, p = 1/4, one mismatch allowed.
        let p = check_failure(4, 0.25, 0.25);
        let expect = 1.0 - 0.75f64.powi(4) - 4.0 * 0.25 * 0.75f64.powi(3);
        assert!((p - expect).abs() < 1e-12);
        assert_eq!(allowed_mismatches(8, 0.0), 0);
        assert_eq!(allowed_mismatches(8, 0.3), 2);
        assert_eq!(check_failure(0, 0.25, 0.0), 0.0);
    }

    #[test]
    fn no_attack_never_aborts() {
        let r = DetectionExperiment::new(ProtocolKind::Ghz, 3, SessionConfig::default(), 40)
            .run()
            .unwrap();
        assert_eq!(r.aborted, 0);
        assert_eq!(r.eve_bit_accuracy, None);
        assert!(r.tp_recoverable_xor);
        assert_eq!(r.wrong_verdicts, 0);
        assert!(
            DetectionExperiment::new(ProtocolKind::Ghz, 3, SessionConfig::default(), 0)
                .run()
                .is_err()
        );
    }

    #[test]
    fn parallel_matches_serial() {
        let c = SessionConfig::default()
            .with_seed(3)
            .with_decoys(2)
            .with_attack(AttackConfig::intercept_resend(BasisStrategy::UniformRandom));
        let e = DetectionExperiment::new(ProtocolKind::Chi, 4, c, 64);
        assert_eq!(
            e.run_trials().unwrap(),
            e.clone().serial().run_trials().unwrap()
        );
    }
}
