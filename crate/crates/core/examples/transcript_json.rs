//! Writes a transcript as JSON, reads it back, and shows each party's view.

use qpc::runtime::{
    run_session, ComparisonInput, PartyId, ProtocolKind, SessionConfig, Transcript,
};

fn main() -> qpc::Result<()> {
    let input = ComparisonInput::new(0b11, 0b01, 2)?;
    let t = run_session(
        ProtocolKind::Ghz,
        &input,
        &SessionConfig::default().with_decoys(1),
    )?;
    let json = t.to_json()?;
    let path = std::env::temp_dir().join("qpc_transcript.json");
    std::fs::write(&path, &json)?;
    let back = Transcript::from_json(&std::fs::read_to_string(&path)?)?;
    assert_eq!(back, t);
    println!(
        "wrote {} ({} bytes, {} events)",
        path.display(),
        json.len(),
        t.events.len()
    );

    for party in [PartyId::Alice, PartyId::Bob, PartyId::Tp] {
        let labels: Vec<String> = t
            .view(party)
            .map(|e| e.kind.label().unwrap_or("verdict").to_owned())
            .collect();
        println!("{party} sees: {}", labels.join(", "));
    }
    Ok(())
}
