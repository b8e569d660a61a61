use serde::{Deserialize, Serialize};

use crate::adversary::{AttackConfig, AttackKind};
use crate::error::{Error, Result};

use super::ProtocolKind;

/// Per-session knobs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub seed: u64,
    /// Decoy qubits mixed into each TP→player transmission (GHZ and χ protocols).
    pub decoys_per_channel: usize,
    /// Check pairs each side adds per exchange in the swapping protocol;
    /// `None` means one per input bit.
    pub check_pairs: Option<usize>,
    /// Largest check error rate that still passes.
    pub check_threshold: f64,
    pub attack: AttackConfig,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            decoys_per_channel: 8,
            check_pairs: None,
            check_threshold: 0.0,
            attack: AttackConfig::none(),
        }
    }
}

impl SessionConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_decoys(mut self, d: usize) -> Self {
        self.decoys_per_channel = d;
        self
    }

    pub fn with_check_pairs(mut self, d: usize) -> Self {
        self.check_pairs = Some(d);
        self
    }

    pub fn with_attack(mut self, attack: AttackConfig) -> Self {
        self.attack = attack;
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.check_threshold = threshold;
        self
    }

    /// Check units protecting each channel for `protocol` at input width `n_bits`.
    pub fn checks_for(&self, protocol: ProtocolKind, n_bits: usize) -> usize {
        match protocol {
            ProtocolKind::Ghz | ProtocolKind::Chi => self.decoys_per_channel,
            ProtocolKind::Swap => self.check_pairs.unwrap_or(n_bits),
        }
    }

    /// Validates the config, returning non-fatal warnings.
    pub fn validate(&self, protocol: ProtocolKind, n_bits: usize) -> Result<Vec<String>> {
        if !(0.0..1.0).contains(&self.check_threshold) {
            return Err(Error::InvalidConfig(format!(
                "check threshold {} outside [0, 1)",
                self.check_threshold
            )));
        }
        let mut warnings = Vec::new();
        if self.attack.kind != AttackKind::None && self.checks_for(protocol, n_bits) == 0 {
            warnings
                .push("adversary active but no check qubits: eavesdropping goes unchecked".into());
        }
        Ok(warnings)
    }
}
