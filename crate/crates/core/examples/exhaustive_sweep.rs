//! Every (x, y) pair at 3 bits under two seeds, for each protocol.

use qpc::cli::{sweep, sweep_csv};
use qpc::runtime::{ProtocolKind, SessionConfig};

fn main() -> qpc::Result<()> {
    for p in ProtocolKind::ALL {
        let rows = sweep(p, 3, &[0, 1], &SessionConfig::default(), true)?;
        let mismatches = rows.iter().filter(|r| r.mismatch).count();
        println!("{p}: {} rows, {mismatches} mismatches", rows.len());
    }
    let rows = sweep(
        ProtocolKind::Swap,
        1,
        &[0],
        &SessionConfig::default(),
        false,
    )?;
    print!("{}", sweep_csv(&rows));
    Ok(())
}
