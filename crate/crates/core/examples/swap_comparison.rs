//! Entanglement-swapping comparison over 2-bit chunks, including an odd
//! width that gets a zero-padded top chunk.

use qpc::protocol::{swap, Rounds};
use qpc::runtime::{run_session_detailed, ComparisonInput, ProtocolKind, SessionConfig};

fn main() -> qpc::Result<()> {
    for (x, y, n) in [
        (0b10110, 0b10110, 5),
        (0b10110, 0b00111, 5),
        (0b1111, 0b0000, 4),
    ] {
        let input = ComparisonInput::new(x, y, n)?;
        let out = run_session_detailed(ProtocolKind::Swap, &input, &SessionConfig::default(), 0)?;
        println!(
            "x={} y={} ({} chunks)",
            input.x_bits(),
            input.y_bits(),
            swap::n_chunks(n as usize)
        );
        if let Some(Rounds::Swap(rounds)) = &out.rounds {
            for r in rounds {
                println!(
                    "  chunk {}: x={:02b} y={:02b} R_A={:02b} R_B={:02b} R_C={:02b} R_j={:02b}",
                    r.chunk, r.x_chunk, r.y_chunk, r.r_a, r.r_b, r.r_c, r.r
                );
            }
        }
        let r = out.transcript.tally("R").expect("R announced");
        println!("  R = {r} -> {}", out.transcript.result);
    }
    Ok(())
}
