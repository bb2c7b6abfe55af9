use serde::{Deserialize, Serialize};

use super::{energy::energy_of_amplitudes, Endpoint, GsconInstance};
use crate::exact::{self, ratio};
use num_traits::Zero;

const HERMITIAN_TOL: f64 = 1e-12;
const PSD_FLOOR: f64 = -1e-10;
const NORM_SLACK: f64 = 1e-10;
const GROUND_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub instance: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, measured: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, measured: measured.into() });
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("instance {}\n", self.instance);
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            out.push_str(&format!("{mark} {:<36} {}\n", c.name, c.measured));
        }
        out.push_str(if self.passed() { "valid\n" } else { "invalid\n" });
        out
    }
}

/// Runs every structural and promise check; failures are report rows.
pub fn validate_instance(inst: &GsconInstance) -> ValidationReport {
    let mut rep = ValidationReport { instance: inst.name.clone(), checks: Vec::new() };
    rep.push("n >= 1", inst.n >= 1, inst.n.to_string());
    rep.push("m >= 1", inst.m >= 1, inst.m.to_string());
    rep.push("R >= 1", inst.r() >= 1, inst.r().to_string());

    for (i, t) in inst.terms.iter().enumerate() {
        let in_range = t.support().iter().all(|&q| q < inst.n);
        rep.push(format!("term {i} support < n"), in_range, format!("{:?}", t.support()));
        let herm = t.hermiticity_defect();
        rep.push(format!("term {i} hermitian"), herm <= HERMITIAN_TOL, format!("{herm:e}"));
        let min = t.min_eigenvalue();
        rep.push(format!("term {i} positive semidefinite"), min >= PSD_FLOOR, format!("{min:e}"));
        let norm = t.operator_norm();
        rep.push(format!("term {i} norm <= 1"), norm <= 1.0 + NORM_SLACK, format!("{norm}"));
    }

    let (e2, e3, e4, d) = (inst.eta2.exact(), inst.eta3.exact(), inst.eta4.exact(), inst.delta.exact());
    rep.push("delta > 0", d > &Zero::zero(), exact::to_canonical_string(d));
    rep.push("eta3 >= 0", e3 >= &Zero::zero(), exact::to_canonical_string(e3));
    rep.push(
        "eta2 - 0 >= delta",
        e2 >= d,
        exact::to_canonical_string(&(e2 - d)),
    );
    rep.push(
        "eta4 - eta3 >= delta",
        &(e4 - e3) >= d,
        exact::to_canonical_string(&(e4 - e3 - d)),
    );
    if inst.r() >= 1 && e2 > &Zero::zero() {
        // h = min{(eta4 - eta3)/4, sqrt(eta2/R)/6}; test (eta3 + h)^2 <= 2.
        let a = (e4 - e3) * ratio(1, 4);
        let b = exact::sqrt_approx(&(e2 / exact::int(inst.r() as i64) * ratio(1, 36)));
        let h = exact::min(a, b);
        let sum = e3 + &h;
        rep.push(
            "eta3 + h <= sqrt(2)",
            &sum * &sum <= exact::int(2),
            format!("{}", exact::to_f64(&sum)),
        );
    }

    let gates = inst
        .psi_circuit
        .iter()
        .map(|g| ("psi circuit", g))
        .chain(inst.phi_circuit.iter().map(|g| ("phi circuit", g)))
        .chain(inst.gate_set.gates().iter().map(|g| ("gate set", g)));
    let mut out_of_range: Option<String> = None;
    for (src, g) in gates {
        if g.max_target() >= inst.n && out_of_range.is_none() {
            out_of_range = Some(format!("{src}: {}", g.label()));
        }
    }
    rep.push(
        "gates act on qubits < n",
        out_of_range.is_none(),
        out_of_range.unwrap_or_else(|| "all in range".into()),
    );
    rep.push(
        "gate set adjoint-closed",
        inst.gate_set.is_adjoint_closed(),
        format!("G = {}, appended {}", inst.g(), inst.gate_set.appended()),
    );

    if endpoints_preparable(inst) {
        for (which, label) in [(Endpoint::Psi, "psi"), (Endpoint::Phi, "phi")] {
            match inst.prepare_state(which) {
                Ok(s) => {
                    let e = energy_of_amplitudes(inst, s.amplitudes());
                    rep.push(format!("<{label}|H|{label}> <= 1e-10"), e <= GROUND_TOL, format!("{e:e}"));
                }
                Err(err) => rep.push(format!("prepare {label}"), false, err.to_string()),
            }
        }
    }
    rep
}

fn endpoints_preparable(inst: &GsconInstance) -> bool {
    inst.terms.iter().all(|t| t.support().iter().all(|&q| q < inst.n))
        && inst
            .psi_circuit
            .iter()
            .chain(&inst.phi_circuit)
            .all(|g| g.max_target() < inst.n)
}
