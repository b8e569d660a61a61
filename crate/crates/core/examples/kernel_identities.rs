//! The three state identities the protocols rest on, checked by sampling
//! and by walking every measurement branch.

use qpc::quantum::*;
use qpc::runtime::rng::{stream_rng, Stream};

fn main() -> Result<(), QuantumError> {
    let mut rng = stream_rng(1, 0, Stream::Inputs);
    let samples = 10_000;

    let ghz = prepare_ghz3();
    let mut odd = 0;
    for _ in 0..samples {
        let a = measure_x(&ghz, 0, &mut rng)?;
        let b = measure_x(&a.post_state, 0, &mut rng)?;
        let t = measure_x(&b.post_state, 0, &mut rng)?;
        odd += usize::from(a.outcome ^ b.outcome ^ t.outcome == 1);
    }
    println!("GHZ X parity: {odd} odd outcomes in {samples}");

    let two = prepare_bell(BellKind::PhiPlus).tensor(&prepare_bell(BellKind::PhiPlus))?;
    for first in bell_branches(&two, 0, 2)? {
        let rest = first.post_state.expect("every branch is possible");
        let follow: Vec<String> = bell_branches(&rest, 0, 1)?
            .iter()
            .map(|b| format!("{}:{:.2}", b.outcome, b.probability))
            .collect();
        println!(
            "swap: first {} (p={:.2}) -> partner {}",
            first.outcome,
            first.probability,
            follow.join(" ")
        );
    }

    let chi = prepare_chi00();
    let mut wrong = 0;
    for _ in 0..samples {
        let a = measure_z(&chi, 0, &mut rng)?;
        let b = measure_z(&a.post_state, 0, &mut rng)?;
        let t = measure_bell(&b.post_state, 0, 1, &mut rng)?;
        wrong += usize::from(t.outcome.is_phi() != (a.outcome == b.outcome));
    }
    println!("χ correlation: {wrong} violations in {samples}");
    println!("normalization checks so far: {}", normalization_checks());
    Ok(())
}
