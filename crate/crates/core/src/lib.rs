//! Simulator and verification harness for quantum private comparison.
//!
//! Three protocol families are implemented on top of an exact state-vector
//! kernel ([`quantum`]): a GHZ-triplet key protocol, a χ-type-state
//! superdense-coding protocol, and a Bell-pair entanglement-swapping protocol
//! ([`protocol`]). Sessions run between Alice, Bob, and a semi-honest third
//! party over simulated channels with decoy or EPR-pair eavesdropping checks
//! ([`runtime`]); an intercept-resend eavesdropper and leakage statistics live
//! in [`adversary`].
//!
//! ```
//! use qpc::runtime::{run_session, ComparisonInput, ProtocolKind, SessionConfig, Verdict};
//!
//! let input = ComparisonInput::new(5, 5, 3).unwrap();
//! let transcript = run_session(ProtocolKind::Ghz, &input, &SessionConfig::default()).unwrap();
//! assert_eq!(transcript.result, Verdict::Equal);
//! ```

pub mod adversary;
pub mod cli;
pub mod error;
pub mod protocol;
pub mod quantum;
pub mod runtime;

pub use error::{Error, Result};
