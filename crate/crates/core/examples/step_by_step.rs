//! Drives the GHZ protocol one step at a time through a session, the way
//! the built-in runner does, printing where each qubit is.

use qpc::protocol::ghz;
use qpc::runtime::rng::Stream;
use qpc::runtime::{ComparisonInput, PartyId, ProtocolKind, Session, SessionConfig};

fn main() -> qpc::Result<()> {
    let input = ComparisonInput::new(0b110, 0b010, 3)?;
    let config = SessionConfig::default().with_decoys(2);
    let mut s = Session::new(ProtocolKind::Ghz, input, &config, 0)?;

    let dist = ghz::ghz_distribute(&mut s, 3)?;
    for c in &dist.checks {
        println!(
            "decoy check: {}/{} mismatches, passed={}",
            c.mismatches, c.positions_checked, c.passed
        );
    }
    for (a, t) in dist.alice.iter().zip(&dist.tp) {
        println!(
            "{a} held by {:?}, partner {t} held by {:?}",
            s.lab.holder(*a),
            s.lab.holder(*t)
        );
    }

    let ka = ghz::ghz_extract_keys(
        &mut s.lab,
        PartyId::Alice,
        &dist.alice,
        s.rngs.get(Stream::Measure(PartyId::Alice)),
    )?;
    let kb = ghz::ghz_extract_keys(
        &mut s.lab,
        PartyId::Bob,
        &dist.bob,
        s.rngs.get(Stream::Measure(PartyId::Bob)),
    )?;
    let c = ghz::ghz_encrypt_combine(&input.x_bits(), &ka, &input.y_bits(), &kb)?;
    println!("K_A={ka} K_B={kb} C={c}");

    let (verdict, outcomes) = ghz::ghz_tp_verdict(
        &mut s.lab,
        &c,
        &dist.tp,
        s.rngs.get(Stream::Measure(PartyId::Tp)),
    )?;
    println!(
        "TP outcomes {outcomes} (x⊕y = {}) -> {verdict}",
        input.xor_bits()
    );
    println!("qubits still live: {}", s.lab.live_qubits());
    Ok(())
}
