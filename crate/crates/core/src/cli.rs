//! Command-line front end: `run`, `sweep`, and `attack-stats`.
//!
//! Exit codes: 0 for a completed comparison (equal or not), 2 when a session
//! aborts on a failed check, 1 for usage and internal errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::adversary::{AttackConfig, AttackKind, BasisStrategy, DetectionExperiment};
use crate::error::{Error, Result};
use crate::runtime::{
    run_session_with_id, ChannelId, ComparisonInput, ProtocolKind, SessionConfig, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_ABORTED: i32 = 2;

/// Largest width `sweep` enumerates exhaustively.
pub const SWEEP_MAX_BITS: u32 = 6;
/// Smallest batch `attack-stats` accepts.
pub const ATTACK_STATS_MIN_TRIALS: u64 = 100;

#[derive(Debug, Parser)]
#[command(name = "qpc", version, about = "Quantum private comparison simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare one pair of inputs.
    Run(RunArgs),
    /// Run every (x, y) pair for a range of seeds.
    Sweep(SweepArgs),
    /// Measure abort rate and leakage under an attack.
    AttackStats(AttackStatsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Ghz,
    Chi,
    Swap,
}

impl From<ProtocolArg> for ProtocolKind {
    fn from(p: ProtocolArg) -> Self {
        match p {
            ProtocolArg::Ghz => ProtocolKind::Ghz,
            ProtocolArg::Chi => ProtocolKind::Chi,
            ProtocolArg::Swap => ProtocolKind::Swap,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AttackArg {
    None,
    InterceptResend,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Z,
    X,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChannelArg {
    TpAlice,
    TpBob,
    AliceTp,
    BobTp,
}

impl From<ChannelArg> for ChannelId {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::TpAlice => ChannelId::TpToAlice,
            ChannelArg::TpBob => ChannelId::TpToBob,
            ChannelArg::AliceTp => ChannelId::AliceToTp,
            ChannelArg::BobTp => ChannelId::BobToTp,
        }
    }
}

/// Flags shared by every command.
#[derive(Clone, Debug, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub protocol: ProtocolArg,
    #[arg(long, default_value_t = 4)]
    pub bits: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = AttackArg::None)]
    pub attack: AttackArg,
    #[arg(long = "attack-basis", value_enum, default_value_t = BasisArg::Random)]
    pub attack_basis: BasisArg,
    /// Attacked channel; repeatable. Defaults to all channels.
    #[arg(long = "channel", value_enum)]
    pub channels: Vec<ChannelArg>,
    /// Decoys per channel, or check pairs per exchange for `swap`.
    #[arg(long)]
    pub decoys: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

impl CommonArgs {
    pub fn config(&self) -> SessionConfig {
        let mut c = SessionConfig::default().with_seed(self.seed);
        let protocol = ProtocolKind::from(self.protocol);
        if let Some(d) = self.decoys {
            c = match protocol {
                ProtocolKind::Swap => c.with_check_pairs(d),
                _ => c.with_decoys(d),
            };
        }
        if self.attack == AttackArg::InterceptResend {
            let basis = match self.attack_basis {
                BasisArg::Z => BasisStrategy::AlwaysZ,
                BasisArg::X => BasisStrategy::AlwaysX,
                BasisArg::Random => BasisStrategy::UniformRandom,
            };
            let mut a = AttackConfig::intercept_resend(basis);
            if !self.channels.is_empty() {
                let ch: Vec<ChannelId> = self.channels.iter().map(|&c| c.into()).collect();
                a = a.on(&ch);
            }
            c = c.with_attack(a);
        }
        c
    }
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_parser = parse_literal)]
    pub x: u64,
    #[arg(long, value_parser = parse_literal)]
    pub y: u64,
}

#[derive(Clone, Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of seeds, starting at `--seed`.
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
}

#[derive(Clone, Debug, Args)]
pub struct AttackStatsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

/// Parses `0x…` hex, `0b…` binary, or decimal.
pub fn parse_literal(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim().replace('_', "");
    let (digits, radix) = if let Some(h) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        (h, 16)
    } else if let Some(b) = t.strip_prefix("0b").or_else(|| t.strip_prefix("0B")) {
        (b, 2)
    } else {
        (t.as_str(), 10)
    };
    u64::from_str_radix(digits, radix).map_err(|e| format!("bad literal {s:?}: {e}"))
}

/// One row of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub x: u64,
    pub y: u64,
    pub seed: u64,
    pub result: Verdict,
    /// Completed with a verdict that disagrees with `x = y`.
    pub mismatch: bool,
}

/// Every `(x, y)` pair at width `n_bits` under each seed, sorted by
/// `(x, y, seed)`. Session ids are `(x << n_bits) | y`.
pub fn sweep(
    protocol: ProtocolKind,
    n_bits: u32,
    seeds: &[u64],
    base: &SessionConfig,
    parallel: bool,
) -> Result<Vec<SweepRow>> {
    if n_bits == 0 || n_bits > SWEEP_MAX_BITS {
        return Err(Error::InvalidInput(format!(
            "sweep width must be in 1..={SWEEP_MAX_BITS}, got {n_bits}"
        )));
    }
    let side = 1u64 << n_bits;
    let jobs: Vec<(u64, u64, u64)> = (0..side)
        .flat_map(|x| (0..side).flat_map(move |y| seeds.iter().map(move |&s| (x, y, s))))
        .collect();
    let one = |&(x, y, seed): &(u64, u64, u64)| -> Result<SweepRow> {
        let input = ComparisonInput::new(x, y, n_bits)?;
        let config = base.clone().with_seed(seed);
        let t = run_session_with_id(protocol, &input, &config, (x << n_bits) | y)?;
        let mismatch = t.result != Verdict::Aborted && (t.result == Verdict::Equal) != (x == y);
        Ok(SweepRow {
            x,
            y,
            seed,
            result: t.result,
            mismatch,
        })
    };
    let mut rows: Vec<SweepRow> = if parallel {
        jobs.par_iter().map(one).collect::<Result<_>>()?
    } else {
        jobs.iter().map(one).collect::<Result<_>>()?
    };
    rows.sort_by_key(|r| (r.x, r.y, r.seed));
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("x,y,seed,result,mismatch\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{},{}", r.x, r.y, r.seed, r.result, r.mismatch);
    }
    s
}

fn emit(out: &Option<PathBuf>, body: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => stdout.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn cmd_run(a: &RunArgs, stdout: &mut dyn Write) -> Result<i32> {
    let input = ComparisonInput::new(a.x, a.y, a.common.bits)?;
    let config = a.common.config();
    let t = run_session_with_id(a.common.protocol.into(), &input, &config, 0)?;
    if let Some(path) = &a.common.out {
        let body = match a.common.format {
            FormatArg::Json => t.to_json()? + "\n",
            FormatArg::Csv => format!(
                "protocol,x,y,bits,seed,result\n{},{},{},{},{},{}\n",
                t.protocol, a.x, a.y, a.common.bits, a.common.seed, t.result
            ),
        };
        std::fs::write(path, body)?;
    }
    writeln!(stdout, "{}", t.result)?;
    Ok(if t.result == Verdict::Aborted {
        EXIT_ABORTED
    } else {
        EXIT_OK
    })
}

fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    if a.trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let seeds: Vec<u64> = (0..a.trials)
        .map(|k| a.common.seed.wrapping_add(k))
        .collect();
    let protocol = a.common.protocol.into();
    let rows = sweep(protocol, a.common.bits, &seeds, &a.common.config(), true)?;
    let body = match a.common.format {
        FormatArg::Csv => sweep_csv(&rows),
        FormatArg::Json => serde_json::to_string_pretty(&rows)? + "\n",
    };
    emit(&a.common.out, &body, stdout)?;
    let mismatches = rows.iter().filter(|r| r.mismatch).count();
    let aborted = rows.iter().filter(|r| r.result == Verdict::Aborted).count();
    writeln!(
        stderr,
        "{protocol} n_bits={} rows={} aborted={aborted} mismatches={mismatches}",
        a.common.bits,
        rows.len()
    )?;
    Ok(EXIT_OK)
}

fn cmd_attack_stats(
    a: &AttackStatsArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    if a.trials < ATTACK_STATS_MIN_TRIALS {
        return Err(Error::InvalidInput(format!(
            "attack-stats needs at least {ATTACK_STATS_MIN_TRIALS} trials"
        )));
    }
    let config = a.common.config();
    let exp = DetectionExperiment::new(a.common.protocol.into(), a.common.bits, config, a.trials);
    let report = exp.run()?;
    let body = match a.common.format {
        FormatArg::Json => report.to_json()? + "\n",
        FormatArg::Csv => format!(
            "protocol,bits,checks,trials,aborted,abort_rate,analytic,sigma\n{},{},{},{},{},{},{},{}\n",
            report.protocol,
            report.n_bits,
            report.checks_per_link,
            report.trials,
            report.aborted,
            report.abort_rate,
            report.analytic_abort_rate,
            report.abort_sigma
        ),
    };
    emit(&a.common.out, &body, stdout)?;
    let attack = if exp.config.attack.kind == AttackKind::None {
        "none"
    } else {
        "intercept-resend"
    };
    writeln!(
        stderr,
        "{} attack={attack} checks={} trials={} abort_rate={:.6} analytic={:.6} sigma={:.6}",
        report.protocol,
        report.checks_per_link,
        report.trials,
        report.abort_rate,
        report.analytic_abort_rate,
        report.abort_sigma
    )?;
    Ok(EXIT_OK)
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            if informational {
                let _ = stdout.write_all(text.as_bytes());
                return EXIT_OK;
            }
            let _ = stderr.write_all(text.as_bytes());
            return EXIT_ERROR;
        }
    };
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout, stderr),
        Command::AttackStats(a) => cmd_attack_stats(a, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        assert_eq!(parse_literal("0x1f"), Ok(31));
        assert_eq!(parse_literal("0b101"), Ok(5));
        assert_eq!(parse_literal("12"), Ok(12));
        assert_eq!(parse_literal("0b1_0000"), Ok(16));
        assert!(parse_literal("0b102").is_err());
        assert!(parse_literal("").is_err());
    }

    #[test]
    fn one_bit_truth_table() {
        let rows = sweep(ProtocolKind::Ghz, 1, &[0], &SessionConfig::default(), false).unwrap();
        let got: Vec<Verdict> = rows.iter().map(|r| r.result).collect();
        assert_eq!(
            got,
            [
                Verdict::Equal,
                Verdict::NotEqual,
                Verdict::NotEqual,
                Verdict::Equal
            ]
        );
        assert!(sweep(ProtocolKind::Ghz, 7, &[0], &SessionConfig::default(), false).is_err());
    }
}
