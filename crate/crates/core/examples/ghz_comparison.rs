//! GHZ-triplet comparison of two 6-bit inputs, round by round.
//!
//! `cargo run --example ghz_comparison -- 0b101101 0b100101`

use qpc::protocol::Rounds;
use qpc::runtime::{run_session_detailed, ComparisonInput, ProtocolKind, SessionConfig};

fn main() -> qpc::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let parse = |i: usize, default: u64| {
        args.get(i)
            .map(|s| qpc::cli::parse_literal(s).expect("integer literal"))
            .unwrap_or(default)
    };
    let input = ComparisonInput::new(parse(0, 0b101101), parse(1, 0b100101), 6)?;
    let config = SessionConfig::default().with_seed(7);
    let out = run_session_detailed(ProtocolKind::Ghz, &input, &config, 0)?;

    println!("x = {}  y = {}", input.x_bits(), input.y_bits());
    if let Some(Rounds::Ghz(rounds)) = &out.rounds {
        println!(" i  x y  K_A K_B  C  TP");
        for r in rounds {
            let (xi, yi) = ((input.x() >> r.index) & 1, (input.y() >> r.index) & 1);
            println!(
                "{:2}  {xi} {yi}   {}   {}   {}  {}",
                r.index, r.key_a, r.key_b, r.cipher, r.tp_outcome
            );
        }
    }
    println!("verdict: {}", out.transcript.result);
    Ok(())
}
