use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{self, Basis, StateVector};
use crate::runtime::{ChannelId, Lab, QubitId};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    #[default]
    None,
    InterceptResend,
}

/// How the eavesdropper picks a measurement basis per qubit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisStrategy {
    #[default]
    AlwaysZ,
    AlwaysX,
    UniformRandom,
}

impl BasisStrategy {
    /// Fixed strategies draw nothing from `rng`.
    pub fn choose<R: Rng + ?Sized>(self, rng: &mut R) -> Basis {
        match self {
            BasisStrategy::AlwaysZ => Basis::Z,
            BasisStrategy::AlwaysX => Basis::X,
            BasisStrategy::UniformRandom => {
                if rng.random::<bool>() {
                    Basis::X
                } else {
                    Basis::Z
                }
            }
        }
    }
}

/// The adversary attached to a session's quantum channels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackConfig {
    pub kind: AttackKind,
    pub basis: BasisStrategy,
    pub channels: Vec<ChannelId>,
}

impl AttackConfig {
    pub fn none() -> Self {
        Self::default()
    }

    /// Intercept-resend on every channel.
    pub fn intercept_resend(basis: BasisStrategy) -> Self {
        Self {
            kind: AttackKind::InterceptResend,
            basis,
            channels: ChannelId::ALL.to_vec(),
        }
    }

    /// Restricts the attack to `channels`.
    pub fn on(mut self, channels: &[ChannelId]) -> Self {
        let mut c = channels.to_vec();
        c.sort();
        c.dedup();
        self.channels = c;
        self
    }

    pub fn is_active(&self) -> bool {
        self.kind != AttackKind::None
    }

    pub fn targets(&self, channel: ChannelId) -> bool {
        self.is_active() && self.channels.contains(&channel)
    }
}

/// One qubit the eavesdropper measured and resent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interception {
    pub channel: ChannelId,
    /// Index in the transmitted sequence, decoys included.
    pub position: usize,
    pub qubit: QubitId,
    pub basis: Basis,
    pub outcome: u8,
}

/// Measures a lone in-flight qubit in the strategy's basis and returns the
/// resent eigenstate together with the basis and outcome.
pub fn intercept_resend<R: Rng + ?Sized>(
    qubit: &StateVector,
    strategy: BasisStrategy,
    rng: &mut R,
) -> Result<(StateVector, Basis, u8)> {
    if qubit.num_qubits() != 1 {
        return Err(Error::InvalidInput(format!(
            "intercept-resend acts on one qubit, got {}",
            qubit.num_qubits()
        )));
    }
    let basis = strategy.choose(rng);
    let outcome = match basis {
        Basis::Z => quantum::measure_z(qubit, 0, rng)?.outcome,
        Basis::X => quantum::measure_x(qubit, 0, rng)?.outcome,
    };
    Ok((StateVector::single(basis, outcome), basis, outcome))
}

/// Same attack on a qubit that may be entangled with others in the lab.
pub(crate) fn intercept_in_lab<R: Rng + ?Sized>(
    lab: &mut Lab,
    channel: ChannelId,
    position: usize,
    qubit: QubitId,
    strategy: BasisStrategy,
    rng: &mut R,
) -> Result<Interception> {
    let basis = strategy.choose(rng);
    let outcome = lab.intercept_resend(qubit, basis, rng)?;
    Ok(Interception {
        channel,
        position,
        qubit,
        basis,
        outcome,
    })
}
