use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{self, Basis, BellKind, PauliOp, StateVector};

use super::{ChannelId, PartyId};

/// Stable name of a physical qubit for the lifetime of a session.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitId(pub u32);

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// Where a qubit currently is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Holder {
    Party(PartyId),
    InTransit(ChannelId),
}

#[derive(Debug)]
struct System {
    state: StateVector,
    qubits: Vec<QubitId>,
}

/// Every live qubit of a session, grouped into joint registers.
///
/// Qubits that have never interacted live in separate registers; a Bell
/// measurement across two registers merges them first. Measured qubits are
/// removed for good.
#[derive(Debug, Default)]
pub struct Lab {
    next_qubit: u32,
    next_system: u64,
    systems: BTreeMap<u64, System>,
    location: BTreeMap<QubitId, u64>,
    holder: BTreeMap<QubitId, Holder>,
    crossings: BTreeMap<QubitId, u32>,
}

impl Lab {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `state` as a new joint system owned by `owner`.
    pub fn prepare(&mut self, owner: PartyId, state: StateVector) -> Vec<QubitId> {
        let qubits: Vec<QubitId> = (0..state.num_qubits())
            .map(|_| {
                let id = QubitId(self.next_qubit);
                self.next_qubit += 1;
                id
            })
            .collect();
        let sys = self.next_system;
        self.next_system += 1;
        for &q in &qubits {
            self.location.insert(q, sys);
            self.holder.insert(q, Holder::Party(owner));
        }
        self.systems.insert(
            sys,
            System {
                state,
                qubits: qubits.clone(),
            },
        );
        qubits
    }

    pub fn holder(&self, q: QubitId) -> Option<Holder> {
        self.holder.get(&q).copied()
    }

    /// How many channel crossings `q` has completed.
    pub fn crossings(&self, q: QubitId) -> u32 {
        self.crossings.get(&q).copied().unwrap_or(0)
    }

    pub fn live_qubits(&self) -> usize {
        self.location.len()
    }

    /// Joint register containing `q` and the qubit order inside it.
    pub fn system_of(&self, q: QubitId) -> Result<(&StateVector, &[QubitId])> {
        let sys = self.location.get(&q).ok_or(Error::UnknownQubit(q))?;
        let s = &self.systems[sys];
        Ok((&s.state, &s.qubits))
    }

    fn require(&self, by: PartyId, q: QubitId) -> Result<()> {
        match self.holder(q) {
            Some(Holder::Party(p)) if p == by => Ok(()),
            Some(_) => Err(Error::NotHolder {
                party: by,
                qubit: q,
            }),
            None => Err(Error::UnknownQubit(q)),
        }
    }

    fn locate(&self, q: QubitId) -> Result<(u64, usize)> {
        let sys = *self.location.get(&q).ok_or(Error::UnknownQubit(q))?;
        let idx = self.systems[&sys]
            .qubits
            .iter()
            .position(|&x| x == q)
            .expect("location map and system agree");
        Ok((sys, idx))
    }

    pub(crate) fn depart(&mut self, q: QubitId, channel: ChannelId) -> Result<()> {
        self.require(channel.from(), q)?;
        self.holder.insert(q, Holder::InTransit(channel));
        Ok(())
    }

    pub(crate) fn arrive(&mut self, q: QubitId, channel: ChannelId) -> Result<()> {
        match self.holder(q) {
            Some(Holder::InTransit(c)) if c == channel => {
                self.holder.insert(q, Holder::Party(channel.to()));
                *self.crossings.entry(q).or_default() += 1;
                Ok(())
            }
            Some(_) => Err(Error::NotHolder {
                party: channel.to(),
                qubit: q,
            }),
            None => Err(Error::UnknownQubit(q)),
        }
    }

    pub fn apply_pauli(&mut self, by: PartyId, q: QubitId, op: PauliOp) -> Result<()> {
        self.require(by, q)?;
        let (sys, idx) = self.locate(q)?;
        let s = self.systems.get_mut(&sys).expect("located");
        s.state = quantum::apply_pauli(&s.state, idx, op)?;
        Ok(())
    }

    /// Single-qubit measurement by the holder; the qubit is consumed.
    pub fn measure<R: Rng + ?Sized>(
        &mut self,
        by: PartyId,
        q: QubitId,
        basis: Basis,
        rng: &mut R,
    ) -> Result<u8> {
        self.require(by, q)?;
        self.collapse(q, basis, rng)
    }

    /// Measures a qubit that is on a channel and puts a fresh eigenstate of
    /// the same basis back in its place, under the same id.
    pub(crate) fn intercept_resend<R: Rng + ?Sized>(
        &mut self,
        q: QubitId,
        basis: Basis,
        rng: &mut R,
    ) -> Result<u8> {
        let holder = self.holder(q).ok_or(Error::UnknownQubit(q))?;
        if !matches!(holder, Holder::InTransit(_)) {
            return Err(Error::Transcript(format!("{q} is not in transit")));
        }
        let outcome = self.collapse(q, basis, rng)?;
        let sys = self.next_system;
        self.next_system += 1;
        self.systems.insert(
            sys,
            System {
                state: StateVector::single(basis, outcome),
                qubits: vec![q],
            },
        );
        self.location.insert(q, sys);
        self.holder.insert(q, holder);
        Ok(outcome)
    }

    fn collapse<R: Rng + ?Sized>(&mut self, q: QubitId, basis: Basis, rng: &mut R) -> Result<u8> {
        let (sys, idx) = self.locate(q)?;
        let s = self.systems.get_mut(&sys).expect("located");
        let result = match basis {
            Basis::Z => quantum::measure_z(&s.state, idx, rng)?,
            Basis::X => quantum::measure_x(&s.state, idx, rng)?,
        };
        s.state = result.post_state;
        s.qubits.remove(idx);
        self.forget(q, sys);
        Ok(result.outcome)
    }

    /// Bell measurement on the ordered pair, both held by `by`.
    pub fn measure_bell<R: Rng + ?Sized>(
        &mut self,
        by: PartyId,
        first: QubitId,
        second: QubitId,
        rng: &mut R,
    ) -> Result<BellKind> {
        self.require(by, first)?;
        self.require(by, second)?;
        if first == second {
            return Err(quantum::QuantumError::SameQubit(first.0 as usize).into());
        }
        let (sa, _) = self.locate(first)?;
        let (sb, _) = self.locate(second)?;
        if sa != sb {
            self.merge(sa, sb)?;
        }
        let (sys, i) = self.locate(first)?;
        let (_, j) = self.locate(second)?;
        let s = self.systems.get_mut(&sys).expect("located");
        let result = quantum::measure_bell(&s.state, i, j, rng)?;
        s.state = result.post_state;
        s.qubits.retain(|&x| x != first && x != second);
        self.forget(first, sys);
        self.forget(second, sys);
        Ok(result.outcome)
    }

    fn merge(&mut self, keep: u64, absorb: u64) -> Result<()> {
        let b = self.systems.remove(&absorb).expect("system exists");
        let a = self.systems.get_mut(&keep).expect("system exists");
        a.state = a.state.tensor(&b.state)?;
        for &q in &b.qubits {
            self.location.insert(q, keep);
        }
        a.qubits.extend(b.qubits);
        Ok(())
    }

    fn forget(&mut self, q: QubitId, sys: u64) {
        self.location.remove(&q);
        self.holder.remove(&q);
        if self.systems.get(&sys).is_some_and(|s| s.qubits.is_empty()) {
            self.systems.remove(&sys);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::prepare_bell;
    use crate::runtime::rng::{stream_rng, Stream};

    #[test]
    fn swapping_through_the_lab() {
        let mut rng = stream_rng(3, 0, Stream::Measure(PartyId::Tp));
        for _ in 0..20 {
            let mut lab = Lab::new();
            let a = lab.prepare(PartyId::Tp, prepare_bell(BellKind::PhiPlus));
            let b = lab.prepare(PartyId::Tp, prepare_bell(BellKind::PhiPlus));
            let first = lab.measure_bell(PartyId::Tp, a[0], b[0], &mut rng).unwrap();
            let second = lab.measure_bell(PartyId::Tp, a[1], b[1], &mut rng).unwrap();
            assert_eq!(first, second);
            assert_eq!(lab.live_qubits(), 0);
        }
    }

    #[test]
    fn only_the_holder_acts() {
        let mut lab = Lab::new();
        let mut rng = stream_rng(0, 0, Stream::Inputs);
        let q = lab.prepare(PartyId::Alice, StateVector::zero())[0];
        assert!(matches!(
            lab.measure(PartyId::Bob, q, Basis::Z, &mut rng),
            Err(Error::NotHolder { .. })
        ));
        lab.depart(q, ChannelId::AliceToTp).unwrap();
        assert!(lab.apply_pauli(PartyId::Alice, q, PauliOp::X).is_err());
        lab.arrive(q, ChannelId::AliceToTp).unwrap();
        assert_eq!(lab.crossings(q), 1);
        assert_eq!(lab.measure(PartyId::Tp, q, Basis::Z, &mut rng).unwrap(), 0);
        assert!(matches!(
            lab.measure(PartyId::Tp, q, Basis::Z, &mut rng),
            Err(Error::UnknownQubit(_))
        ));
    }

    #[test]
    fn intercepted_qubit_keeps_its_id() {
        let mut lab = Lab::new();
        let mut rng = stream_rng(5, 0, Stream::Inputs);
        let pair = lab.prepare(PartyId::Tp, prepare_bell(BellKind::PhiPlus));
        let c = ChannelId::TpToAlice;
        lab.depart(pair[0], c).unwrap();
        let e = lab.intercept_resend(pair[0], Basis::Z, &mut rng).unwrap();
        lab.arrive(pair[0], c).unwrap();
        assert_eq!(
            lab.measure(PartyId::Alice, pair[0], Basis::Z, &mut rng)
                .unwrap(),
            e
        );
        assert_eq!(
            lab.measure(PartyId::Tp, pair[1], Basis::Z, &mut rng)
                .unwrap(),
            e
        );
    }
}
