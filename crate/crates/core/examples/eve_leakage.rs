//! What an undetected eavesdropper learns about `x` from the TP→Alice
//! channel plus Alice's public message, per basis strategy. Decoys are
//! switched off so every session completes.

use qpc::adversary::{AttackConfig, BasisStrategy, DetectionExperiment};
use qpc::runtime::{ChannelId, ProtocolKind, SessionConfig};

fn main() -> qpc::Result<()> {
    for p in [ProtocolKind::Ghz, ProtocolKind::Chi] {
        for b in [
            BasisStrategy::AlwaysZ,
            BasisStrategy::AlwaysX,
            BasisStrategy::UniformRandom,
        ] {
            let config = SessionConfig::default()
                .with_decoys(0)
                .with_attack(AttackConfig::intercept_resend(b).on(&[ChannelId::TpToAlice]));
            let r = DetectionExperiment::new(p, 8, config, 2_000).run()?;
            println!(
                "{:<4} {:<14} accuracy on x: {:.3}  wrong verdicts: {}",
                p.name(),
                format!("{b:?}"),
                r.eve_bit_accuracy.unwrap_or(f64::NAN),
                r.wrong_verdicts
            );
        }
    }
    Ok(())
}
