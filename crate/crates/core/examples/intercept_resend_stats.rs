//! Abort rates under intercept-resend against the binomial model, for
//! several check sizes and attacked channels.

use qpc::adversary::{detection_stats, AttackConfig, BasisStrategy};
use qpc::runtime::{ChannelId, ProtocolKind, SessionConfig};

fn main() -> qpc::Result<()> {
    let trials = 5_000;
    let cases = [
        (ProtocolKind::Ghz, 4, vec![ChannelId::TpToAlice]),
        (ProtocolKind::Ghz, 4, ChannelId::ALL.to_vec()),
        (ProtocolKind::Chi, 8, vec![ChannelId::TpToBob]),
        (ProtocolKind::Swap, 4, vec![ChannelId::AliceToTp]),
        (
            ProtocolKind::Swap,
            2,
            vec![ChannelId::AliceToTp, ChannelId::TpToAlice],
        ),
    ];
    println!(
        "protocol  d  channels                                         empirical  analytic   sigma"
    );
    for (p, d, channels) in cases {
        let attack = AttackConfig::intercept_resend(BasisStrategy::UniformRandom).on(&channels);
        let config = SessionConfig::default()
            .with_seed(2)
            .with_decoys(d)
            .with_check_pairs(d)
            .with_attack(attack);
        let r = detection_stats(p, 4, &config, trials)?;
        let names: Vec<&str> = channels.iter().map(|c| c.name()).collect();
        println!(
            "{:<8} {:>2}  {:<48} {:>9.4}  {:>8.4}  {:.4}",
            p.name(),
            d,
            names.join(","),
            r.abort_rate,
            r.analytic_abort_rate,
            r.abort_sigma
        );
    }
    Ok(())
}
