use num_complex::Complex64;

use super::{QuantumError, StateVector};

/// The single-qubit Pauli operations used for encoding.
///
/// `IY` is `iσy = [[0, 1], [−1, 0]]`, which has real entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum PauliOp {
    I,
    X,
    Z,
    IY,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [PauliOp::I, PauliOp::X, PauliOp::Z, PauliOp::IY];

    /// Row-major 2×2 matrix.
    pub fn matrix(self) -> [[f64; 2]; 2] {
        match self {
            PauliOp::I => [[1.0, 0.0], [0.0, 1.0]],
            PauliOp::X => [[0.0, 1.0], [1.0, 0.0]],
            PauliOp::Z => [[1.0, 0.0], [0.0, -1.0]],
            PauliOp::IY => [[0.0, 1.0], [-1.0, 0.0]],
        }
    }
}

/// Applies `op` to `qubit` of `state`.
pub fn apply_pauli(
    state: &StateVector,
    qubit: usize,
    op: PauliOp,
) -> Result<StateVector, QuantumError> {
    state.check_qubit(qubit)?;
    let m = op.matrix();
    let mask = 1usize << state.shift_of(qubit);
    let src = state.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    for (i, slot) in out.iter_mut().enumerate() {
        let row = usize::from(i & mask != 0);
        let lo = src[i & !mask];
        let hi = src[i | mask];
        *slot = lo * m[row][0] + hi * m[row][1];
    }
    StateVector::from_parts_unchecked(state.num_qubits(), out).checked()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::PHASE_TOLERANCE;

    #[test]
    fn z_maps_plus_to_minus() {
        let out = apply_pauli(&StateVector::plus(), 0, PauliOp::Z).unwrap();
        assert!(out
            .equals_up_to_phase(&StateVector::minus(), PHASE_TOLERANCE)
            .unwrap());
    }

    #[test]
    fn x_flips_zero() {
        let out = apply_pauli(&StateVector::zero(), 0, PauliOp::X).unwrap();
        assert_eq!(out, StateVector::one());
    }

    #[test]
    fn identity_is_identity() {
        let s = crate::quantum::prepare_chi00();
        for q in 0..4 {
            assert_eq!(apply_pauli(&s, q, PauliOp::I).unwrap(), s);
        }
    }

    #[test]
    fn iy_is_z_after_x() {
        let s = crate::quantum::prepare_ghz3();
        for q in 0..3 {
            let direct = apply_pauli(&s, q, PauliOp::IY).unwrap();
            let composed =
                apply_pauli(&apply_pauli(&s, q, PauliOp::X).unwrap(), q, PauliOp::Z).unwrap();
            assert_eq!(direct, composed);
        }
    }

    #[test]
    fn acts_on_the_named_tensor_factor() {
        // |00⟩ with X on qubit 1 is |01⟩ under big-endian ordering.
        let s = StateVector::basis(2, 0).unwrap();
        assert_eq!(
            apply_pauli(&s, 1, PauliOp::X).unwrap(),
            StateVector::basis(2, 0b01).unwrap()
        );
        assert_eq!(
            apply_pauli(&s, 0, PauliOp::X).unwrap(),
            StateVector::basis(2, 0b10).unwrap()
        );
    }

    #[test]
    fn out_of_range_qubit() {
        assert_eq!(
            apply_pauli(&StateVector::zero(), 1, PauliOp::X),
            Err(QuantumError::QubitOutOfRange {
                qubit: 1,
                num_qubits: 1
            })
        );
    }
}
