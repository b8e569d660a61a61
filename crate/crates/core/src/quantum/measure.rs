use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use super::{bell::BellKind, Basis, QuantumError, StateVector};

/// Branches below this probability are treated as impossible.
const MIN_BRANCH_PROBABILITY: f64 = 1e-12;

/// Outcome of a collapsing measurement together with what remains of the register.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementResult<O> {
    pub outcome: O,
    pub post_state: StateVector,
}

/// One possible result of a measurement, before sampling.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch<O> {
    pub outcome: O,
    pub probability: f64,
    /// Collapsed remainder; `None` when the branch has zero probability.
    pub post_state: Option<StateVector>,
}

/// Splits `index` into (remaining-register index, measured-qubits index).
fn split_index(index: usize, num_qubits: usize, measured: &[usize]) -> (usize, usize) {
    let k = measured.len();
    let (mut rest, mut picked) = (0usize, 0usize);
    for q in 0..num_qubits {
        let bit = (index >> (num_qubits - 1 - q)) & 1;
        match measured.iter().position(|&m| m == q) {
            Some(j) => picked |= bit << (k - 1 - j),
            None => rest = (rest << 1) | bit,
        }
    }
    (rest, picked)
}

/// Projects the measured qubits onto the real basis vector `target`.
fn project<O>(
    state: &StateVector,
    measured: &[usize],
    target: &[f64],
    outcome: O,
) -> Result<Branch<O>, QuantumError> {
    let n = state.num_qubits();
    let remaining = n - measured.len();
    let mut out = vec![Complex64::new(0.0, 0.0); 1 << remaining];
    for (i, a) in state.amplitudes().iter().enumerate() {
        let (rest, picked) = split_index(i, n, measured);
        out[rest] += a * target[picked];
    }
    let probability: f64 = out.iter().map(|a| a.norm_sqr()).sum();
    let post_state = if probability > MIN_BRANCH_PROBABILITY {
        let scale = probability.sqrt().recip();
        for a in &mut out {
            *a *= scale;
        }
        Some(StateVector::from_parts_unchecked(remaining, out).checked()?)
    } else {
        None
    };
    Ok(Branch {
        outcome,
        probability,
        post_state,
    })
}

/// Both branches of a single-qubit measurement in `basis`.
pub fn single_branches(
    state: &StateVector,
    qubit: usize,
    basis: Basis,
) -> Result<[Branch<u8>; 2], QuantumError> {
    state.check_qubit(qubit)?;
    let h = FRAC_1_SQRT_2;
    let targets = match basis {
        Basis::Z => [[1.0, 0.0], [0.0, 1.0]],
        Basis::X => [[h, h], [h, -h]],
    };
    Ok([
        project(state, &[qubit], &targets[0], 0)?,
        project(state, &[qubit], &targets[1], 1)?,
    ])
}

pub fn z_branches(state: &StateVector, qubit: usize) -> Result<[Branch<u8>; 2], QuantumError> {
    single_branches(state, qubit, Basis::Z)
}

pub fn x_branches(state: &StateVector, qubit: usize) -> Result<[Branch<u8>; 2], QuantumError> {
    single_branches(state, qubit, Basis::X)
}

/// All four branches of a Bell measurement on the ordered pair `(first, second)`.
pub fn bell_branches(
    state: &StateVector,
    first: usize,
    second: usize,
) -> Result<[Branch<BellKind>; 4], QuantumError> {
    state.check_qubit(first)?;
    state.check_qubit(second)?;
    if first == second {
        return Err(QuantumError::SameQubit(first));
    }
    let h = FRAC_1_SQRT_2;
    let mut branches = Vec::with_capacity(4);
    for kind in BellKind::ALL {
        let s = kind.sign() * h;
        let target = if kind.is_phi() {
            [h, 0.0, 0.0, s]
        } else {
            [0.0, h, s, 0.0]
        };
        branches.push(project(state, &[first, second], &target, kind)?);
    }
    Ok(branches.try_into().expect("four Bell branches"))
}

fn sample<O: Clone, R: Rng + ?Sized>(branches: &[Branch<O>], rng: &mut R) -> MeasurementResult<O> {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    let mut chosen = None;
    for branch in branches.iter().filter(|b| b.post_state.is_some()) {
        cumulative += branch.probability;
        chosen = Some(branch);
        if u < cumulative {
            break;
        }
    }
    let branch = chosen.expect("a normalized state has at least one possible branch");
    MeasurementResult {
        outcome: branch.outcome.clone(),
        post_state: branch.post_state.clone().expect("filtered above"),
    }
}

/// Z-basis measurement of `qubit`; the qubit leaves the register.
pub fn measure_z<R: Rng + ?Sized>(
    state: &StateVector,
    qubit: usize,
    rng: &mut R,
) -> Result<MeasurementResult<u8>, QuantumError> {
    Ok(sample(&z_branches(state, qubit)?, rng))
}

/// X-basis measurement of `qubit`; outcome 0 is `|+⟩`, 1 is `|−⟩`.
pub fn measure_x<R: Rng + ?Sized>(
    state: &StateVector,
    qubit: usize,
    rng: &mut R,
) -> Result<MeasurementResult<u8>, QuantumError> {
    Ok(sample(&x_branches(state, qubit)?, rng))
}

/// Bell measurement of the ordered pair; both qubits leave the register.
pub fn measure_bell<R: Rng + ?Sized>(
    state: &StateVector,
    first: usize,
    second: usize,
    rng: &mut R,
) -> Result<MeasurementResult<BellKind>, QuantumError> {
    Ok(sample(&bell_branches(state, first, second)?, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{prepare_bell, prepare_chi00, prepare_ghz3, PHASE_TOLERANCE};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    #[test]
    fn basis_state_is_deterministic() {
        let mut r = rng();
        for _ in 0..50 {
            let m = measure_z(&StateVector::one(), 0, &mut r).unwrap();
            assert_eq!(m.outcome, 1);
            assert_eq!(m.post_state.num_qubits(), 0);
            let m = measure_x(&StateVector::plus(), 0, &mut r).unwrap();
            assert_eq!(m.outcome, 0);
        }
    }

    #[test]
    fn phi_plus_collapse() {
        let [b0, b1] = z_branches(&prepare_bell(BellKind::PhiPlus), 0).unwrap();
        assert!((b0.probability - 0.5).abs() < 1e-12);
        assert!((b1.probability - 0.5).abs() < 1e-12);
        assert_eq!(b0.post_state.unwrap(), StateVector::zero());
        assert_eq!(b1.post_state.unwrap(), StateVector::one());
    }

    #[test]
    fn ghz_z_collapse_leaves_matching_pair() {
        for b in z_branches(&prepare_ghz3(), 0).unwrap() {
            let want = StateVector::basis(2, if b.outcome == 0 { 0b00 } else { 0b11 }).unwrap();
            assert_eq!(b.post_state.unwrap(), want);
        }
    }

    #[test]
    fn ghz_x_pair_fixes_third() {
        let ghz = prepare_ghz3();
        for a in x_branches(&ghz, 0).unwrap() {
            let after_a = a.post_state.unwrap();
            for b in x_branches(&after_a, 0).unwrap() {
                let last = b.post_state.unwrap();
                let want = if a.outcome ^ b.outcome == 0 {
                    StateVector::plus()
                } else {
                    StateVector::minus()
                };
                assert!(last.equals_up_to_phase(&want, 1e-12).unwrap());
                assert!((a.probability * b.probability - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bell_eigenstates() {
        let mut r = rng();
        for kind in BellKind::ALL {
            let m = measure_bell(&prepare_bell(kind), 0, 1, &mut r).unwrap();
            assert_eq!(m.outcome, kind);
        }
    }

    #[test]
    fn bell_pair_order_only_flips_psi_minus_sign() {
        // Swapping the pair order keeps the kind.
        for kind in BellKind::ALL {
            let branches = bell_branches(&prepare_bell(kind), 1, 0).unwrap();
            for b in branches {
                let want = if b.outcome == kind { 1.0 } else { 0.0 };
                assert!((b.probability - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn chi_bell_on_tail_fixes_head_parity() {
        for b in bell_branches(&prepare_chi00(), 2, 3).unwrap() {
            assert!((b.probability - 0.25).abs() < 1e-12);
            let head = b.post_state.unwrap();
            for z in z_branches(&head, 0).unwrap() {
                if let Some(rest) = z.post_state {
                    let second = if b.outcome.is_phi() {
                        z.outcome
                    } else {
                        z.outcome ^ 1
                    };
                    assert!(rest
                        .equals_up_to_phase(&StateVector::single(Basis::Z, second), PHASE_TOLERANCE)
                        .unwrap());
                }
            }
        }
    }

    #[test]
    fn repeat_measurement_reproduces_outcome() {
        // Measure qubit 0 of GHZ₃, then qubit 0 of what is left: same Z value.
        let mut r = rng();
        for _ in 0..100 {
            let first = measure_z(&prepare_ghz3(), 0, &mut r).unwrap();
            let again = measure_z(&first.post_state, 0, &mut r).unwrap();
            assert_eq!(first.outcome, again.outcome);
        }
    }

    #[test]
    fn errors() {
        let s = prepare_bell(BellKind::PhiPlus);
        let mut r = rng();
        assert!(matches!(
            measure_z(&s, 2, &mut r),
            Err(QuantumError::QubitOutOfRange { .. })
        ));
        assert!(matches!(
            measure_x(&s, 5, &mut r),
            Err(QuantumError::QubitOutOfRange { .. })
        ));
        assert_eq!(
            measure_bell(&s, 1, 1, &mut r),
            Err(QuantumError::SameQubit(1))
        );
        assert!(matches!(
            measure_bell(&s, 0, 2, &mut r),
            Err(QuantumError::QubitOutOfRange { .. })
        ));
    }
}
