use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::StateVector;

/// The four Bell states on an ordered qubit pair.
///
/// Two-bit codes: `Φ+ → 00`, `Φ− → 01`, `Ψ+ → 10`, `Ψ− → 11`.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    /// All four kinds, ordered by code.
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn code(self) -> u8 {
        match self {
            BellKind::PhiPlus => 0b00,
            BellKind::PhiMinus => 0b01,
            BellKind::PsiPlus => 0b10,
            BellKind::PsiMinus => 0b11,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(usize::from(code)).copied()
    }

    /// Φ± (the pair has equal Z values).
    pub fn is_phi(self) -> bool {
        matches!(self, BellKind::PhiPlus | BellKind::PhiMinus)
    }

    /// Relative sign between the two computational terms.
    pub(crate) fn sign(self) -> f64 {
        match self {
            BellKind::PhiPlus | BellKind::PsiPlus => 1.0,
            BellKind::PhiMinus | BellKind::PsiMinus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "Φ+",
            BellKind::PhiMinus => "Φ−",
            BellKind::PsiPlus => "Ψ+",
            BellKind::PsiMinus => "Ψ−",
        }
    }
}

impl std::fmt::Display for BellKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}

fn bell_amplitudes(kind: BellKind) -> [f64; 4] {
    let h = FRAC_1_SQRT_2;
    let s = kind.sign() * h;
    if kind.is_phi() {
        [h, 0.0, 0.0, s]
    } else {
        [0.0, h, s, 0.0]
    }
}

/// The two-qubit Bell state of the given kind.
pub fn prepare_bell(kind: BellKind) -> StateVector {
    StateVector::from_real(&bell_amplitudes(kind)).expect("Bell states are normalized")
}

/// `(|000⟩ + |111⟩)/√2`.
pub fn prepare_ghz3() -> StateVector {
    let mut amps = [0.0; 8];
    amps[0] = FRAC_1_SQRT_2;
    amps[7] = FRAC_1_SQRT_2;
    StateVector::from_real(&amps).expect("GHZ state is normalized")
}

/// The χ-type state `½(|00⟩|Φ+⟩ + |11⟩|Φ−⟩ − |01⟩|Ψ−⟩ + |10⟩|Ψ+⟩)` on qubits 0..4.
pub fn prepare_chi00() -> StateVector {
    let terms: [(usize, BellKind, f64); 4] = [
        (0b00, BellKind::PhiPlus, 1.0),
        (0b11, BellKind::PhiMinus, 1.0),
        (0b01, BellKind::PsiMinus, -1.0),
        (0b10, BellKind::PsiPlus, 1.0),
    ];
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    for (head, kind, coeff) in terms {
        for (tail, a) in bell_amplitudes(kind).iter().enumerate() {
            amps[(head << 2) | tail] += Complex64::new(0.5 * coeff * a, 0.0);
        }
    }
    StateVector::from_amplitudes(amps).expect("χ-type state is normalized")
}
