use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use super::QuantumError;

/// Largest register the kernel will build.
pub const MAX_QUBITS: usize = 8;

/// Allowed drift of the squared norm away from one.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Default tolerance for [`StateVector::equals_up_to_phase`].
pub const PHASE_TOLERANCE: f64 = 1e-12;

static NORM_CHECKS: AtomicU64 = AtomicU64::new(0);

/// Number of normalization checks performed by the kernel in this process.
///
/// Every state the kernel hands out passes through one check, so a non-zero
/// count after a workload means the invariant was actually exercised.
pub fn normalization_checks() -> u64 {
    NORM_CHECKS.load(Ordering::Relaxed)
}

/// Exact amplitudes of an `n`-qubit register.
///
/// Qubit 0 is the most significant bit of the amplitude index, so for three
/// qubits the index `0b100` is `|100⟩` with qubit 0 in `|1⟩`.
///
/// A register with zero qubits is the scalar `[1]`; measurements that consume
/// the last qubit of a register leave one of these behind.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, checking length and normalization.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, QuantumError> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(QuantumError::BadLength(len));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(QuantumError::TooManyQubits(num_qubits));
        }
        Self {
            num_qubits,
            amplitudes,
        }
        .checked()
    }

    /// Convenience constructor for real amplitudes.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self, QuantumError> {
        Self::from_amplitudes(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Computational basis state `|index⟩` on `num_qubits` qubits.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self, QuantumError> {
        if num_qubits > MAX_QUBITS {
            return Err(QuantumError::TooManyQubits(num_qubits));
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(QuantumError::BasisIndex { index, dim });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self {
            num_qubits,
            amplitudes,
        }
        .checked()
    }

    pub fn zero() -> Self {
        Self::single(Basis::Z, 0)
    }

    pub fn one() -> Self {
        Self::single(Basis::Z, 1)
    }

    pub fn plus() -> Self {
        Self::single(Basis::X, 0)
    }

    pub fn minus() -> Self {
        Self::single(Basis::X, 1)
    }

    /// Single-qubit eigenstate of `basis` with eigenvalue label `bit`
    /// (`|0⟩,|1⟩` for Z and `|+⟩,|−⟩` for X).
    pub fn single(basis: Basis, bit: u8) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps = match (basis, bit & 1) {
            (Basis::Z, 0) => [1.0, 0.0],
            (Basis::Z, _) => [0.0, 1.0],
            (Basis::X, 0) => [h, h],
            (Basis::X, _) => [h, -h],
        };
        Self::from_real(&amps).expect("basis states are normalized")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Kronecker product; the qubits of `other` follow those of `self`.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector, QuantumError> {
        let num_qubits = self.num_qubits + other.num_qubits;
        if num_qubits > MAX_QUBITS {
            return Err(QuantumError::TooManyQubits(num_qubits));
        }
        let mut amplitudes = Vec::with_capacity(1 << num_qubits);
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        StateVector {
            num_qubits,
            amplitudes,
        }
        .checked()
    }

    /// True iff `self = e^{iθ} other` for some θ, within `tol` per amplitude.
    pub fn equals_up_to_phase(&self, other: &StateVector, tol: f64) -> Result<bool, QuantumError> {
        if self.num_qubits != other.num_qubits {
            return Err(QuantumError::SizeMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        // Fix the phase from the largest amplitude of `other`.
        let (pivot, largest) = other
            .amplitudes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .expect("registers are never empty");
        if largest.norm() <= tol {
            return Ok(self.amplitudes.iter().all(|a| a.norm() <= tol));
        }
        let ratio = self.amplitudes[pivot] / largest;
        if ratio.norm() == 0.0 {
            return Ok(false);
        }
        let phase = ratio / ratio.norm();
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .all(|(a, b)| (a - phase * b).norm() <= tol))
    }

    pub(crate) fn from_parts_unchecked(num_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        Self {
            num_qubits,
            amplitudes,
        }
    }

    /// Runs the normalization invariant on a freshly produced state.
    pub(crate) fn checked(self) -> Result<Self, QuantumError> {
        NORM_CHECKS.fetch_add(1, Ordering::Relaxed);
        let deviation = (self.norm_sqr() - 1.0).abs();
        if deviation >= NORM_TOLERANCE {
            return Err(QuantumError::NotNormalized(deviation));
        }
        Ok(self)
    }

    /// Bit position of `qubit` inside an amplitude index.
    pub(crate) fn shift_of(&self, qubit: usize) -> usize {
        self.num_qubits - 1 - qubit
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<(), QuantumError> {
        if qubit >= self.num_qubits {
            return Err(QuantumError::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }
}

/// Single-qubit measurement basis.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    pub fn bit(self) -> u8 {
        match self {
            Basis::Z => 0,
            Basis::X => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Self {
        if bit & 1 == 0 {
            Basis::Z
        } else {
            Basis::X
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_and_tensor() {
        let s = StateVector::zero().tensor(&StateVector::one()).unwrap();
        assert_eq!(s, StateVector::basis(2, 0b01).unwrap());
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            StateVector::from_real(&[1.0, 0.0, 0.0]),
            Err(QuantumError::BadLength(3))
        ));
        assert!(matches!(
            StateVector::from_real(&[1.0, 1.0]),
            Err(QuantumError::NotNormalized(_))
        ));
        assert!(matches!(
            StateVector::basis(9, 0),
            Err(QuantumError::TooManyQubits(9))
        ));
        let four = StateVector::basis(4, 0).unwrap();
        let five = StateVector::basis(5, 0).unwrap();
        assert!(matches!(
            four.tensor(&five),
            Err(QuantumError::TooManyQubits(9))
        ));
    }

    #[test]
    fn phase_equality() {
        let psi = StateVector::plus();
        let neg = StateVector::from_real(&[-std::f64::consts::FRAC_1_SQRT_2; 2]).unwrap();
        let i_psi = StateVector::from_amplitudes(
            psi.amplitudes()
                .iter()
                .map(|a| a * Complex64::i())
                .collect(),
        )
        .unwrap();
        assert!(psi.equals_up_to_phase(&psi, PHASE_TOLERANCE).unwrap());
        assert!(psi.equals_up_to_phase(&neg, PHASE_TOLERANCE).unwrap());
        assert!(psi.equals_up_to_phase(&i_psi, PHASE_TOLERANCE).unwrap());
        assert!(!StateVector::zero()
            .equals_up_to_phase(&StateVector::one(), PHASE_TOLERANCE)
            .unwrap());
        assert!(!StateVector::plus()
            .equals_up_to_phase(&StateVector::minus(), PHASE_TOLERANCE)
            .unwrap());
        assert!(StateVector::zero()
            .equals_up_to_phase(&StateVector::basis(2, 0).unwrap(), PHASE_TOLERANCE)
            .is_err());
    }

    #[test]
    fn checks_are_counted() {
        let before = normalization_checks();
        let _ = StateVector::zero().tensor(&StateVector::plus()).unwrap();
        assert!(normalization_checks() > before);
    }
}
