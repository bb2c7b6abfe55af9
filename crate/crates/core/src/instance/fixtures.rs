//! Desk-scale built-in instances.
//!
//! The blockade Hamiltonians are sums of `|11><11|` on neighbouring qubits,
//! so any bit string without two adjacent ones is a zero-energy ground state
//! and single-qubit flips move between such strings as long as no adjacent
//! pair is ever set.

use num_complex::Complex64;

use super::{GateSet, GsconInstance, HamiltonianTerm, Real, TraversalCertificate};
use crate::exact::ratio;
use crate::state::LocalGate;

#[derive(Clone, Debug)]
pub enum FixtureLabel {
    Yes(TraversalCertificate),
    No,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub instance: GsconInstance,
    pub label: FixtureLabel,
}

impl Fixture {
    pub fn name(&self) -> &str {
        &self.instance.name
    }

    pub fn certificate(&self) -> Option<&TraversalCertificate> {
        match &self.label {
            FixtureLabel::Yes(c) => Some(c),
            FixtureLabel::No => None,
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self.label, FixtureLabel::Yes(_))
    }
}

pub fn builtin_instances() -> Vec<Fixture> {
    vec![trivial_1q(), blockade_3q(), superposed_2q(), blockade_4q(), blockade_3q_no()]
}

pub fn builtin_instance(name: &str) -> Option<Fixture> {
    builtin_instances().into_iter().find(|f| f.name() == name)
}

struct Eta(i64, i64);

#[allow(clippy::too_many_arguments)]
fn instance(
    name: &str,
    n: usize,
    m: usize,
    terms: Vec<HamiltonianTerm>,
    [eta2, eta3, eta4, delta]: [Eta; 4],
    psi: Vec<LocalGate>,
    phi: Vec<LocalGate>,
    gates: Vec<LocalGate>,
) -> GsconInstance {
    let real = |e: Eta| Real::new(ratio(e.0, e.1));
    GsconInstance {
        name: name.into(),
        n,
        m,
        terms,
        eta2: real(eta2),
        eta3: real(eta3),
        eta4: real(eta4),
        delta: real(delta),
        psi_circuit: psi,
        phi_circuit: phi,
        gate_set: GateSet::adjoint_closed(gates).expect("non-empty gate set"),
    }
}

/// `H = |1><1|`, `psi = phi = |0>`, one identity step.
fn trivial_1q() -> Fixture {
    let inst = instance(
        "trivial-1q",
        1,
        1,
        vec![HamiltonianTerm::projector_one(0)],
        [Eta(1, 2), Eta(1, 4), Eta(3, 4), Eta(1, 2)],
        vec![],
        vec![],
        vec![LocalGate::identity(0), LocalGate::x(0), LocalGate::z(0), LocalGate::h(0)],
    );
    Fixture { instance: inst, label: FixtureLabel::Yes(TraversalCertificate::new(vec![0])) }
}

/// `|000> -> |100> -> |101>`, with the target tilted to sit exactly `eta3` away.
fn blockade_3q() -> Fixture {
    // phi = (s|0> + c|1>) (x) |0> (x) |1> with c = 1 - eta3^2/2.
    let eta3 = 0.25f64;
    let c = 1.0 - eta3 * eta3 / 2.0;
    let s = (1.0 - c * c).sqrt();
    let tilt = LocalGate::new(
        "RY",
        vec![0],
        vec![
            Complex64::new(s, 0.0),
            Complex64::new(-c, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(s, 0.0),
        ],
    )
    .expect("rotation is unitary");
    let inst = instance(
        "blockade-3q",
        3,
        2,
        vec![HamiltonianTerm::projector_one_one(0, 1), HamiltonianTerm::projector_one_one(1, 2)],
        [Eta(1, 2), Eta(1, 4), Eta(3, 4), Eta(1, 2)],
        vec![],
        vec![tilt, LocalGate::x(2)],
        vec![
            LocalGate::identity(0),
            LocalGate::x(0),
            LocalGate::x(1),
            LocalGate::x(2),
            LocalGate::z(0),
            LocalGate::h(0),
        ],
    );
    Fixture { instance: inst, label: FixtureLabel::Yes(TraversalCertificate::new(vec![1, 3])) }
}

/// A path through superpositions with complex amplitudes: `H0` then `S0`.
fn superposed_2q() -> Fixture {
    let inst = instance(
        "superposed-2q",
        2,
        2,
        vec![HamiltonianTerm::projector_one_one(0, 1)],
        [Eta(2, 5), Eta(1, 5), Eta(4, 5), Eta(2, 5)],
        vec![],
        vec![LocalGate::h(0), LocalGate::s(0)],
        vec![
            LocalGate::identity(0),
            LocalGate::h(0),
            LocalGate::s(0),
            LocalGate::x(1),
            LocalGate::cnot(0, 1),
        ],
    );
    Fixture { instance: inst, label: FixtureLabel::Yes(TraversalCertificate::new(vec![1, 2])) }
}

/// `|0000> -> |1000> -> |1001> -> |0001> -> |0101>` on a 4-qubit chain.
fn blockade_4q() -> Fixture {
    let inst = instance(
        "blockade-4q",
        4,
        4,
        vec![
            HamiltonianTerm::projector_one_one(0, 1),
            HamiltonianTerm::projector_one_one(1, 2),
            HamiltonianTerm::projector_one_one(2, 3),
        ],
        [Eta(3, 5), Eta(1, 10), Eta(7, 10), Eta(1, 2)],
        vec![],
        vec![LocalGate::x(1), LocalGate::x(3)],
        vec![
            LocalGate::identity(0),
            LocalGate::x(0),
            LocalGate::x(1),
            LocalGate::x(2),
            LocalGate::x(3),
            LocalGate::h(0),
            LocalGate::cnot(0, 1),
            LocalGate::z(3),
        ],
    );
    Fixture { instance: inst, label: FixtureLabel::Yes(TraversalCertificate::new(vec![1, 4, 1, 2])) }
}

/// `|010> -> |101>` needs three flips with the middle one first, so two
/// steps cannot get there. Confirmed by exhaustive search.
fn blockade_3q_no() -> Fixture {
    let inst = instance(
        "blockade-3q-no",
        3,
        2,
        vec![HamiltonianTerm::projector_one_one(0, 1), HamiltonianTerm::projector_one_one(1, 2)],
        [Eta(1, 2), Eta(1, 4), Eta(1, 1), Eta(1, 2)],
        vec![LocalGate::x(1)],
        vec![LocalGate::x(0), LocalGate::x(2)],
        vec![
            LocalGate::identity(0),
            LocalGate::x(0),
            LocalGate::x(1),
            LocalGate::x(2),
            LocalGate::h(0),
            LocalGate::h(2),
            LocalGate::cnot(1, 0),
            LocalGate::cnot(1, 2),
        ],
    );
    Fixture { instance: inst, label: FixtureLabel::No }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{energy_of, validate_instance, Endpoint};
    use crate::state::{phase_optimized_distance, RegisteredState, RegisterShape};

    #[test]
    fn every_fixture_validates() {
        for f in builtin_instances() {
            let rep = validate_instance(&f.instance);
            assert!(rep.passed(), "{}", rep.to_text());
        }
    }

    #[test]
    fn yes_certificates_replay_exactly() {
        for f in builtin_instances() {
            let Some(cert) = f.certificate() else { continue };
            let inst = &f.instance;
            cert.check(inst).unwrap();
            let states = inst.replay(&cert.gates).unwrap();
            for amps in &states[1..] {
                let s = RegisteredState::new(RegisterShape::qubits(inst.n).unwrap(), amps.clone()).unwrap();
                assert!(energy_of(inst, &s).unwrap() <= 1e-10, "{}", f.name());
            }
            let last = RegisteredState::new(RegisterShape::qubits(inst.n).unwrap(), states[inst.m].clone()).unwrap();
            let phi = inst.prepare_state(Endpoint::Phi).unwrap();
            let plain: f64 = last
                .amplitudes()
                .iter()
                .zip(phi.amplitudes())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(plain <= inst.eta3.value() + 1e-9, "{}: {plain}", f.name());
            assert!(phase_optimized_distance(&last, &phi).unwrap() <= plain + 1e-15);
        }
    }

    #[test]
    fn blockade_target_sits_at_eta3() {
        let f = builtin_instance("blockade-3q").unwrap();
        let inst = &f.instance;
        let last = inst.replay(&f.certificate().unwrap().gates).unwrap().pop().unwrap();
        let phi = inst.prepare_state(Endpoint::Phi).unwrap();
        let d: f64 = last.iter().zip(phi.amplitudes()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        assert!((d - 0.25).abs() < 1e-15);
    }

    #[test]
    fn superposed_fixture_closes_its_gate_set() {
        let f = builtin_instance("superposed-2q").unwrap();
        let gs = &f.instance.gate_set;
        assert_eq!(gs.appended(), 1);
        assert_eq!(gs.gate(5).name(), "Sdg");
        assert_eq!(gs.adjoint_of(2), Some(5));
        assert!(gs.is_adjoint_closed());
    }

    #[test]
    fn fixtures_stay_at_desk_scale() {
        for f in builtin_instances() {
            let i = &f.instance;
            assert!(i.n <= 6 && i.m <= 4 && i.g() <= 16, "{}", f.name());
        }
    }
}
