//! The three comparison protocols.
//!
//! Each module exposes its steps as standalone functions over a [`Lab`]
//! (so they can be driven branch by branch in tests) plus a `run` that
//! executes the whole protocol inside a [`Session`].
//!
//! [`Lab`]: crate::runtime::Lab
//! [`Session`]: crate::runtime::Session

pub mod chi;
pub mod ghz;
pub mod swap;

pub use chi::ChiRound;
pub use ghz::GhzRound;
pub use swap::SwapRound;

/// Per-round values of a completed session.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rounds {
    Ghz(Vec<GhzRound>),
    Chi(Vec<ChiRound>),
    Swap(Vec<SwapRound>),
}
