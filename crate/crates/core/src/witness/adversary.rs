//! Dishonest witness tuples, each aimed at one verifier test.
//!
//! Every kind starts from a base tuple (honest for a certificate, or the
//! all-identity sequence otherwise) and bends one component by a requested
//! magnitude. The construction reports the magnitude it actually realised,
//! measured back from the forged states.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{honest_assignment, witness_s_for, witness_u_for, WitnessS, WitnessTuple, WitnessU};
use crate::error::{Error, Result};
use crate::instance::{dense_hamiltonian, energy_of, Endpoint, GsconInstance, TraversalCertificate};
use crate::rng::stream_rng;
use crate::state::{inner_amplitudes, norm_sqr_amplitudes, swap_reject_amplitudes, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AdversaryKind {
    /// `|U'>` differs from `|U>`: magnitude is `max |P - P'|` over the joint
    /// label/gate distributions.
    MismatchedU,
    /// One label of `|U>` and `|U'>` spreads weight over two gates:
    /// magnitude is the weight moved off the base gate.
    SmearedGate,
    /// Label distribution of `|U>`, `|U'>` is tilted: magnitude is the excess
    /// probability on label 0.
    NonuniformLabels,
    /// `|S>` differs from `|S'>` on one label: magnitude is `||S - S'||^2`.
    InconsistentS,
    /// `|S> = |S'>` with one step broken: magnitude is the SWAP rejection
    /// between `W|S>` and `|S'>`.
    BrokenSequence,
    /// Label 0 moved away from `|psi>`: magnitude is the phase-optimized distance.
    WrongStart,
    /// Label `m` placed at a given phase-optimized distance from `|phi>`.
    WrongEnd,
    /// Label 1 given energy `<s|H|s>` equal to the magnitude.
    HighEnergy,
}

impl AdversaryKind {
    pub const ALL: [AdversaryKind; 8] = [
        AdversaryKind::MismatchedU,
        AdversaryKind::SmearedGate,
        AdversaryKind::NonuniformLabels,
        AdversaryKind::InconsistentS,
        AdversaryKind::BrokenSequence,
        AdversaryKind::WrongStart,
        AdversaryKind::WrongEnd,
        AdversaryKind::HighEnergy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AdversaryKind::MismatchedU => "MISMATCHED_U",
            AdversaryKind::SmearedGate => "SMEARED_GATE",
            AdversaryKind::NonuniformLabels => "NONUNIFORM_LABELS",
            AdversaryKind::InconsistentS => "INCONSISTENT_S",
            AdversaryKind::BrokenSequence => "BROKEN_SEQUENCE",
            AdversaryKind::WrongStart => "WRONG_START",
            AdversaryKind::WrongEnd => "WRONG_END",
            AdversaryKind::HighEnergy => "HIGH_ENERGY",
        }
    }

    /// The verifier test (1 to 8) this kind is built to trip.
    pub fn target_test(self) -> usize {
        Self::ALL.iter().position(|&k| k == self).unwrap() + 1
    }
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdversaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase().replace('-', "_");
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == upper)
            .ok_or_else(|| Error::Parse(format!("unknown adversary kind {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdversarySpec {
    pub kind: AdversaryKind,
    pub magnitude: f64,
    /// Picks the perpendicular directions used by the state-bending kinds.
    #[serde(default)]
    pub seed: u64,
}

impl AdversarySpec {
    pub fn new(kind: AdversaryKind, magnitude: f64) -> Self {
        Self { kind, magnitude, seed: 0 }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// `KIND:magnitude` or `KIND:magnitude:seed`.
impl FromStr for AdversarySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(Error::Parse(format!("adversary spec {s:?} is not KIND:magnitude[:seed]")));
        }
        let kind = parts[0].parse()?;
        let magnitude = parts[1]
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad adversary magnitude {:?}", parts[1])))?;
        let seed = match parts.get(2) {
            Some(t) => t.trim().parse().map_err(|_| Error::Parse(format!("bad adversary seed {t:?}")))?,
            None => 0,
        };
        Ok(Self { kind, magnitude, seed })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub kind: AdversaryKind,
    pub requested: f64,
    pub measured: f64,
}

#[derive(Clone, Debug)]
pub struct Forged {
    pub tuple: WitnessTuple,
    /// Gate assignment of the base tuple.
    pub base: Vec<usize>,
    pub deviations: Vec<Deviation>,
}

pub fn forge_adversary(
    inst: &GsconInstance,
    cert: Option<&TraversalCertificate>,
    spec: &AdversarySpec,
) -> Result<Forged> {
    forge_composite(inst, cert, std::slice::from_ref(spec))
}

/// Applies the specs in order to one base tuple. Each deviation is measured
/// right after its own step.
pub fn forge_composite(
    inst: &GsconInstance,
    cert: Option<&TraversalCertificate>,
    specs: &[AdversarySpec],
) -> Result<Forged> {
    let base = base_assignment(inst, cert)?;
    let u = witness_u_for(&base, inst.g())?;
    let s = witness_s_for(inst, &base)?;
    let tuple = WitnessTuple { u: u.clone(), u_prime: u, s: s.clone(), s_prime: s };
    let mut forged = Forged { tuple, base, deviations: Vec::with_capacity(specs.len()) };
    for spec in specs {
        let measured = bend(inst, &mut forged, spec)?;
        forged.deviations.push(Deviation { kind: spec.kind, requested: spec.magnitude, measured });
    }
    Ok(forged)
}

fn base_assignment(inst: &GsconInstance, cert: Option<&TraversalCertificate>) -> Result<Vec<usize>> {
    match cert {
        Some(c) => {
            c.check(inst)?;
            honest_assignment(&inst.gate_set, c)
        }
        None => {
            let id = inst
                .gate_set
                .identity_index()
                .ok_or_else(|| Error::Instance("no certificate and no identity gate to build a base tuple".into()))?;
            Ok(vec![id; inst.label_dim()])
        }
    }
}

fn check_range(spec: &AdversarySpec, lo: f64, hi: f64) -> Result<()> {
    let x = spec.magnitude;
    if !x.is_finite() || x < lo || x > hi {
        return Err(Error::Magnitude(format!("{} needs a magnitude in [{lo}, {hi}], got {x}", spec.kind)));
    }
    Ok(())
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `(cos t, sin t)` with `1 - cos t = y`, keeping `sin t` accurate for tiny `y`.
fn rotation(y: f64) -> (f64, f64) {
    (1.0 - y, (y * (2.0 - y)).max(0.0).sqrt())
}

/// Random unit vector orthogonal to every vector in `against` (which must be
/// orthonormal).
fn perpendicular(dim: usize, against: &[&[Complex64]], seed: u64) -> Result<Vec<Complex64>> {
    let mut rng = stream_rng(seed, 0x0ad5);
    for _ in 0..16 {
        let mut v: Vec<Complex64> =
            (0..dim).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        for _ in 0..2 {
            for a in against {
                let o = inner_amplitudes(a, &v);
                for (x, y) in v.iter_mut().zip(a.iter()) {
                    *x -= o * y;
                }
            }
        }
        let norm = norm_sqr_amplitudes(&v).sqrt();
        if norm > 1e-3 {
            return Ok(v.iter().map(|x| x / norm).collect());
        }
    }
    Err(Error::Magnitude("no perpendicular direction in this dimension".into()))
}

/// `cos t |x> + sin t |p>` scaled by `weight`, for unit `x`, `p`.
fn blend(x: &[Complex64], p: &[Complex64], (cos, sin): (f64, f64), weight: f64) -> Vec<Complex64> {
    x.iter().zip(p).map(|(a, b)| (a * cos + b * sin) * weight).collect()
}

fn unit(v: &[Complex64]) -> (Vec<Complex64>, f64) {
    let w = norm_sqr_amplitudes(v).sqrt();
    (v.iter().map(|a| a / w).collect(), w)
}

fn replace_label(s: &WitnessS, label: usize, data: Vec<Complex64>) -> Result<WitnessS> {
    let mut labels = s.labels();
    labels[label] = data;
    WitnessS::from_labels(s.num_qubits(), &labels)
}

fn replace_row(u: &WitnessU, label: usize, row: Vec<Complex64>) -> Result<WitnessU> {
    let mut table = u.table();
    table[label] = row;
    WitnessU::from_table(&table)
}

fn label_weight(s: &WitnessS, label: usize) -> Result<f64> {
    let w = norm_sqr_amplitudes(s.data(label));
    if w == 0.0 {
        return Err(Error::Magnitude(format!("label {label} carries no weight to bend")));
    }
    Ok(w)
}

fn bend(inst: &GsconInstance, f: &mut Forged, spec: &AdversarySpec) -> Result<f64> {
    let t = &mut f.tuple;
    let g = inst.g();
    let m2 = inst.label_dim();
    let x = spec.magnitude;
    match spec.kind {
        AdversaryKind::MismatchedU => {
            let row = t.u_prime.row(0);
            let a2 = norm_sqr_amplitudes(row);
            check_range(spec, 0.0, a2)?;
            if g < 2 {
                return Err(Error::Magnitude("MISMATCHED_U needs at least two gates".into()));
            }
            let j0 = t.u_prime.decoded_sequence()[0];
            let j1 = (j0 + 1) % g;
            let phase = if row[j0].norm() > 0.0 { row[j0] / row[j0].norm() } else { c(1.0) };
            let sin2 = x / a2;
            let mut new = vec![ZERO; t.u_prime.gate_dim()];
            new[j0] = phase * (a2 * (1.0 - sin2)).sqrt();
            new[j1] = phase * x.sqrt();
            t.u_prime = replace_row(&t.u_prime, 0, new)?;
            let (p, q) = (t.u.joint_probabilities(), t.u_prime.joint_probabilities());
            Ok(p.iter().flatten().zip(q.iter().flatten()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        }
        AdversaryKind::SmearedGate => {
            check_range(spec, 0.0, 1.0)?;
            if g < 2 {
                return Err(Error::Magnitude("SMEARED_GATE needs at least two gates".into()));
            }
            let j0 = f.base[0];
            let j1 = (j0 + 1) % g;
            for u in [&mut t.u, &mut t.u_prime] {
                let a2 = norm_sqr_amplitudes(u.row(0));
                let mut new = vec![ZERO; u.gate_dim()];
                new[j0] = c((a2 * (1.0 - x)).sqrt());
                new[j1] = c((a2 * x).sqrt());
                *u = replace_row(u, 0, new)?;
            }
            let row = t.u.row(0);
            let off: f64 = row.iter().enumerate().filter(|&(j, _)| j != j0).map(|(_, a)| a.norm_sqr()).sum();
            Ok(off / norm_sqr_amplitudes(row))
        }
        AdversaryKind::NonuniformLabels => {
            let base = 1.0 / m2 as f64;
            check_range(spec, -base, 1.0 - base)?;
            let rest = base - x / (m2 - 1) as f64;
            for u in [&mut t.u, &mut t.u_prime] {
                let mut table = u.table();
                for (i, row) in table.iter_mut().enumerate() {
                    let target = if i == 0 { base + x } else { rest.max(0.0) };
                    let w = norm_sqr_amplitudes(row);
                    if w == 0.0 {
                        return Err(Error::Magnitude(format!("label {i} of |U> is empty")));
                    }
                    let k = (target / w).sqrt();
                    row.iter_mut().for_each(|a| *a *= k);
                }
                *u = WitnessU::from_table(&table)?;
            }
            Ok(t.u.label_probabilities()[0] - base)
        }
        AdversaryKind::InconsistentS => {
            let k = m2 - 1;
            let a2 = label_weight(&t.s, k)?;
            check_range(spec, 0.0, 2.0 * a2)?;
            let (xk, a) = unit(t.s.data(k));
            let p = perpendicular(xk.len(), &[&xk], spec.seed)?;
            let new = blend(&xk, &p, rotation(x / (2.0 * a2)), a);
            t.s = replace_label(&t.s, k, new)?;
            Ok(t.s
                .state()
                .amplitudes()
                .iter()
                .zip(t.s_prime.state().amplitudes())
                .map(|(p, q)| (p - q).norm_sqr())
                .sum())
        }
        AdversaryKind::BrokenSequence => {
            check_range(spec, 0.0, 0.5)?;
            let a2 = label_weight(&t.s, 1)?;
            let (x0, _) = unit(t.s.data(0));
            let chi = inst.gate_set.gate(f.base[0]).apply_to_data(&x0, inst.n)?;
            let y = 4.0 * x / (1.0 + (1.0 - 2.0 * x).sqrt());
            let w2 = y / (2.0 * a2);
            if w2 > 2.0 {
                return Err(Error::Magnitude(format!("BROKEN_SEQUENCE magnitude {x} is out of reach here")));
            }
            let p = perpendicular(chi.len(), &[&chi], spec.seed)?;
            let new = blend(&chi, &p, rotation(w2 / 2.0), a2.sqrt());
            t.s = replace_label(&t.s, 1, new)?;
            t.s_prime = t.s.clone();
            let ws = super::apply_w(&inst.gate_set, &t.u.decoded_sequence(), &t.s)?;
            Ok(swap_reject_amplitudes(ws.state().amplitudes(), t.s_prime.state().amplitudes()))
        }
        AdversaryKind::WrongStart | AdversaryKind::WrongEnd => {
            check_range(spec, 0.0, std::f64::consts::SQRT_2)?;
            let (label, endpoint) = match spec.kind {
                AdversaryKind::WrongStart => (0, Endpoint::Psi),
                _ => (inst.m, Endpoint::Phi),
            };
            let a2 = label_weight(&t.s, label)?;
            let target = inst.prepare_state(endpoint)?.into_amplitudes();
            let p = perpendicular(target.len(), &[&target], spec.seed)?;
            let new = blend(&target, &p, rotation(x * x / 2.0), a2.sqrt());
            t.s = replace_label(&t.s, label, new.clone())?;
            t.s_prime = replace_label(&t.s_prime, label, new)?;
            let s = t.s.label_state(label).expect("label has weight");
            let e = inst.prepare_state(endpoint)?;
            crate::state::phase_optimized_distance(&s, &e)
        }
        AdversaryKind::HighEnergy => {
            let label = 1;
            let a2 = label_weight(&t.s, label)?;
            let (xl, a) = unit(t.s.data(label));
            let s_state = t.s.label_state(label).expect("label has weight");
            if energy_of(inst, &s_state)? > 1e-10 {
                return Err(Error::Magnitude("HIGH_ENERGY needs a zero-energy state at label 1".into()));
            }
            let top = top_eigenvector(inst)?;
            let o = inner_amplitudes(&xl, &top);
            let mut v: Vec<Complex64> = top.iter().zip(&xl).map(|(t, s)| t - o * s).collect();
            let norm = norm_sqr_amplitudes(&v).sqrt();
            if norm < 1e-6 {
                return Err(Error::Magnitude("label 1 already lies along the top eigenvector".into()));
            }
            v.iter_mut().for_each(|z| *z /= norm);
            let v_state = crate::state::RegisteredState::new(s_state.shape().clone(), v.clone())?;
            let lambda = energy_of(inst, &v_state)?;
            check_range(spec, 0.0, lambda)?;
            let sin2 = x / lambda;
            let rot = ((1.0 - sin2).sqrt(), sin2.sqrt());
            let new = blend(&xl, &v, rot, a);
            debug_assert!((norm_sqr_amplitudes(&new) - a2).abs() < 1e-12);
            t.s = replace_label(&t.s, label, new.clone())?;
            t.s_prime = replace_label(&t.s_prime, label, new)?;
            energy_of(inst, &t.s.label_state(label).expect("label has weight"))
        }
    }
}

/// Eigenvector of the largest eigenvalue of the full Hamiltonian.
fn top_eigenvector(inst: &GsconInstance) -> Result<Vec<Complex64>> {
    let dim = inst.data_dim();
    let h = dense_hamiltonian(inst)?;
    let herm = DMatrix::from_fn(dim, dim, |r, c| (h[r * dim + c] + h[c * dim + r].conj()) * 0.5);
    let eig = herm.symmetric_eigen();
    let top = (0..dim).fold(0, |best, i| if eig.eigenvalues[i] > eig.eigenvalues[best] { i } else { best });
    Ok(eig.eigenvectors.column(top).iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::builtin_instances;

    fn magnitude_for(kind: AdversaryKind) -> f64 {
        match kind {
            AdversaryKind::MismatchedU => 0.01,
            AdversaryKind::SmearedGate => 0.2,
            AdversaryKind::NonuniformLabels => 0.05,
            AdversaryKind::InconsistentS => 1e-3,
            AdversaryKind::BrokenSequence => 1e-8,
            AdversaryKind::WrongStart => 0.1,
            AdversaryKind::WrongEnd => 0.35,
            AdversaryKind::HighEnergy => 0.125,
        }
    }

    #[test]
    fn every_kind_realises_its_magnitude() {
        for f in builtin_instances() {
            for kind in AdversaryKind::ALL {
                let spec = AdversarySpec::new(kind, magnitude_for(kind)).with_seed(7);
                let forged = forge_adversary(&f.instance, f.certificate(), &spec).unwrap();
                let d = &forged.deviations[0];
                assert!(
                    (d.measured - d.requested).abs() <= 1e-6 * d.requested.max(1e-3),
                    "{} {kind}: {} vs {}",
                    f.name(),
                    d.measured,
                    d.requested
                );
                assert!(forged.tuple.s.state().is_normalized());
                assert!(forged.tuple.u_prime.state().is_normalized());
            }
        }
    }

    #[test]
    fn tiny_magnitudes_keep_relative_precision() {
        let f = crate::instance::builtin_instance("blockade-4q").unwrap();
        for (kind, x) in [(AdversaryKind::BrokenSequence, 1e-11), (AdversaryKind::InconsistentS, 4e-11)] {
            let forged = forge_adversary(&f.instance, f.certificate(), &AdversarySpec::new(kind, x)).unwrap();
            let d = &forged.deviations[0];
            assert!((d.measured / x - 1.0).abs() < 1e-3, "{kind}: {}", d.measured);
        }
    }

    #[test]
    fn composition_applies_in_order() {
        let f = crate::instance::builtin_instance("blockade-3q").unwrap();
        let specs = [
            AdversarySpec::new(AdversaryKind::WrongEnd, 0.3),
            AdversarySpec::new(AdversaryKind::MismatchedU, 0.02),
        ];
        let forged = forge_composite(&f.instance, f.certificate(), &specs).unwrap();
        assert_eq!(forged.deviations.len(), 2);
        for d in &forged.deviations {
            assert!((d.measured - d.requested).abs() < 1e-9);
        }
        assert_ne!(forged.tuple.u, forged.tuple.u_prime);
    }

    #[test]
    fn no_fixture_uses_identity_base() {
        let f = crate::instance::builtin_instance("blockade-3q-no").unwrap();
        let forged = forge_adversary(&f.instance, None, &AdversarySpec::new(AdversaryKind::WrongStart, 0.0)).unwrap();
        assert_eq!(forged.base, vec![0; 4]);
    }

    #[test]
    fn rejects_out_of_range() {
        let f = crate::instance::builtin_instance("trivial-1q").unwrap();
        for (kind, x) in [
            (AdversaryKind::MismatchedU, 2.0),
            (AdversaryKind::WrongStart, 1.5),
            (AdversaryKind::HighEnergy, 2.0),
            (AdversaryKind::SmearedGate, f64::NAN),
        ] {
            let err = forge_adversary(&f.instance, f.certificate(), &AdversarySpec::new(kind, x)).unwrap_err();
            assert!(matches!(err, Error::Magnitude(_)), "{kind}");
        }
    }

    #[test]
    fn parses_specs() {
        let s: AdversarySpec = "wrong_end:0.25:3".parse().unwrap();
        assert_eq!(s, AdversarySpec::new(AdversaryKind::WrongEnd, 0.25).with_seed(3));
        assert_eq!("HIGH-ENERGY:1".parse::<AdversarySpec>().unwrap().kind, AdversaryKind::HighEnergy);
        assert!("NOPE:1".parse::<AdversarySpec>().is_err());
        assert!("WRONG_END".parse::<AdversarySpec>().is_err());
        assert_eq!(AdversaryKind::HighEnergy.target_test(), 8);
        let json = serde_json::to_string(&AdversaryKind::BrokenSequence).unwrap();
        assert_eq!(json, "\"BROKEN_SEQUENCE\"");
    }
}
