//! What the third party can compute from its own view: `x ⊕ y` exactly,
//! and nothing about `x` once `x ⊕ y` is fixed.

use qpc::adversary::tp_view_analysis;
use qpc::runtime::rng::{stream_rng, Stream};
use qpc::runtime::{run_session_with_id, ComparisonInput, ProtocolKind, SessionConfig};
use rand::Rng;

fn main() -> qpc::Result<()> {
    let config = SessionConfig::default().with_seed(3);
    let mut rng = stream_rng(3, 0, Stream::Inputs);
    let mut transcripts = Vec::new();
    for p in ProtocolKind::ALL {
        for sid in 0..2_000 {
            let x: u64 = rng.random_range(0..16);
            let y = x ^ [0b0000, 0b0110][sid as usize % 2];
            transcripts.push(run_session_with_id(
                p,
                &ComparisonInput::new(x, y, 4)?,
                &config,
                sid,
            )?);
        }
    }
    let summary = tp_view_analysis(&transcripts)?;
    for v in &summary.protocols {
        println!(
            "{}: {}/{} sessions let TP recompute x⊕y",
            v.protocol, v.xor_recovered, v.completed
        );
        for u in &v.uniformity {
            println!(
                "  x⊕y={} {:<4} n={} max|z|={:.2} χ²={:.1} (dof {}) p={:.3}",
                u.xor_hex, u.label, u.samples, u.max_abs_z, u.chi_square, u.dof, u.p_value
            );
        }
    }
    Ok(())
}
