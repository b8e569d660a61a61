//! χ-type-state comparison: the players' Z readouts are random, yet
//! `R ⊕ R_t` reproduces `x ⊕ y` on every run.

use qpc::protocol::Rounds;
use qpc::runtime::{run_session_detailed, ComparisonInput, ProtocolKind, SessionConfig};

fn main() -> qpc::Result<()> {
    let input = ComparisonInput::new(0b0110, 0b0011, 4)?;
    for seed in 0..4 {
        let config = SessionConfig::default().with_seed(seed);
        let out = run_session_detailed(ProtocolKind::Chi, &input, &config, 0)?;
        let t = &out.transcript;
        let (r, r_t) = (t.bits("R").expect("R"), t.bits("R_t").expect("R_t"));
        println!(
            "seed {seed}: R_a={} R_b={} R={r} R_t={r_t} R⊕R_t={} -> {}",
            t.bits("R_a").expect("R_a"),
            t.bits("R_b").expect("R_b"),
            r.xor(r_t)?,
            t.result
        );
        if let Some(Rounds::Chi(rounds)) = &out.rounds {
            assert!(rounds.iter().all(|k| k.r == k.r_a ^ k.r_b));
        }
    }
    println!("x⊕y = {}", input.xor_bits());
    Ok(())
}
