//! JSON instance files.
//!
//! ```json
//! {
//!   "name": "example",
//!   "n": 1, "m": 1,
//!   "eta2": "0.5", "eta3": "1/4", "eta4": "0.75", "delta": "0.5",
//!   "terms": [{ "support": [0], "matrix": ["0", "0", "0", "1"] }],
//!   "psi_circuit": [],
//!   "phi_circuit": [],
//!   "gate_set": [{ "name": "H", "targets": [0], "matrix": ["0.7071067811865476", ...] }]
//! }
//! ```
//!
//! Thresholds are exact decimals or `p/q` rationals. Matrix entries are
//! row-major; each is a real string or a `[re, im]` pair of strings.
//! A gate whose name is a built-in may omit `matrix`. The gate set is
//! closed under adjoints on load.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GateSet, GsconInstance, HamiltonianTerm, Real};
use crate::error::{Error, Result};
use crate::exact;
use crate::state::LocalGate;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(String),
    Complex([String; 2]),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    support: Vec<usize>,
    matrix: Vec<Entry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateFile {
    name: String,
    targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Entry>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    #[serde(default)]
    name: String,
    n: usize,
    m: usize,
    eta2: String,
    eta3: String,
    eta4: String,
    delta: String,
    terms: Vec<TermFile>,
    #[serde(default)]
    psi_circuit: Vec<GateFile>,
    #[serde(default)]
    phi_circuit: Vec<GateFile>,
    gate_set: Vec<GateFile>,
}

/// Shortest text that parses back to exactly `x`.
pub fn format_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn parse_f64(text: &str) -> Result<f64> {
    let t = text.trim();
    let v = if t.contains('/') {
        exact::to_f64(&exact::parse_exact(t)?)
    } else {
        t.parse::<f64>().map_err(|_| Error::Parse(format!("bad matrix entry {text:?}")))?
    };
    if !v.is_finite() {
        return Err(Error::Parse(format!("non-finite matrix entry {text:?}")));
    }
    Ok(v)
}

fn parse_entry(e: &Entry) -> Result<Complex64> {
    match e {
        Entry::Real(re) => Ok(Complex64::new(parse_f64(re)?, 0.0)),
        Entry::Complex([re, im]) => Ok(Complex64::new(parse_f64(re)?, parse_f64(im)?)),
    }
}

fn write_entry(z: &Complex64) -> Entry {
    if z.im == 0.0 && z.im.is_sign_positive() {
        Entry::Real(format_f64(z.re))
    } else {
        Entry::Complex([format_f64(z.re), format_f64(z.im)])
    }
}

fn parse_matrix(entries: &[Entry]) -> Result<Vec<Complex64>> {
    entries.iter().map(parse_entry).collect()
}

fn parse_gate(g: &GateFile) -> Result<LocalGate> {
    match &g.matrix {
        Some(m) => LocalGate::new(g.name.clone(), g.targets.clone(), parse_matrix(m)?),
        None => LocalGate::builtin(&g.name, &g.targets).ok_or_else(|| {
            Error::Parse(format!("gate {:?} on {:?} needs an explicit matrix", g.name, g.targets))
        }),
    }
}

fn write_gate(g: &LocalGate) -> GateFile {
    GateFile {
        name: g.name().to_string(),
        targets: g.targets().to_vec(),
        matrix: Some(g.matrix().iter().map(write_entry).collect()),
    }
}

pub fn parse_instance(text: &str) -> Result<GsconInstance> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("instance file: {e}")))?;
    if file.m == 0 {
        return Err(Error::Instance("m must be at least 1".into()));
    }
    let terms = file
        .terms
        .iter()
        .map(|t| HamiltonianTerm::new(t.support.clone(), parse_matrix(&t.matrix)?))
        .collect::<Result<Vec<_>>>()?;
    let gates = |list: &[GateFile]| list.iter().map(parse_gate).collect::<Result<Vec<_>>>();
    Ok(GsconInstance {
        name: file.name,
        n: file.n,
        m: file.m,
        terms,
        eta2: Real::parse(&file.eta2)?,
        eta3: Real::parse(&file.eta3)?,
        eta4: Real::parse(&file.eta4)?,
        delta: Real::parse(&file.delta)?,
        psi_circuit: gates(&file.psi_circuit)?,
        phi_circuit: gates(&file.phi_circuit)?,
        gate_set: GateSet::adjoint_closed(gates(&file.gate_set)?)?,
    })
}

pub fn instance_to_json(inst: &GsconInstance) -> String {
    let file = InstanceFile {
        name: inst.name.clone(),
        n: inst.n,
        m: inst.m,
        eta2: exact::to_canonical_string(inst.eta2.exact()),
        eta3: exact::to_canonical_string(inst.eta3.exact()),
        eta4: exact::to_canonical_string(inst.eta4.exact()),
        delta: exact::to_canonical_string(inst.delta.exact()),
        terms: inst
            .terms
            .iter()
            .map(|t| TermFile {
                support: t.support().to_vec(),
                matrix: t.matrix().iter().map(write_entry).collect(),
            })
            .collect(),
        psi_circuit: inst.psi_circuit.iter().map(write_gate).collect(),
        phi_circuit: inst.phi_circuit.iter().map(write_gate).collect(),
        gate_set: inst.gate_set.gates().iter().map(write_gate).collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("instance serializes");
    text.push('\n');
    text
}

pub fn load_instance(path: &Path) -> Result<GsconInstance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn save_instance(inst: &GsconInstance, path: &Path) -> Result<()> {
    std::fs::write(path, instance_to_json(inst))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{builtin_instances, validate_instance};

    const TRIVIAL: &str = r#"{
        "name": "file-trivial",
        "n": 1, "m": 1,
        "eta2": "1/2", "eta3": "0.25", "eta4": "0.75", "delta": "0.5",
        "terms": [{ "support": [0], "matrix": ["0", "0", "0", "1"] }],
        "gate_set": [{ "name": "I", "targets": [0] }, { "name": "S", "targets": [0] }]
    }"#;

    #[test]
    fn parses_builtin_names_and_closes_the_set() {
        let inst = parse_instance(TRIVIAL).unwrap();
        assert_eq!(inst.g(), 3);
        assert_eq!(inst.gate_set.gate(2).name(), "Sdg");
        assert_eq!(inst.eta2.exact(), &crate::exact::ratio(1, 2));
        assert!(validate_instance(&inst).passed());
    }

    #[test]
    fn round_trips_fixtures_bit_exactly() {
        for f in builtin_instances() {
            let text = instance_to_json(&f.instance);
            let back = parse_instance(&text).unwrap();
            assert_eq!(instance_to_json(&back), text, "{}", f.name());
            for (a, b) in f.instance.gate_set.gates().iter().zip(back.gate_set.gates()) {
                assert_eq!(a.matrix(), b.matrix());
            }
        }
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(parse_instance("{}").is_err());
        let bad_gate = TRIVIAL.replace(r#"{ "name": "S", "targets": [0] }"#, r#"{ "name": "Q", "targets": [0] }"#);
        assert!(parse_instance(&bad_gate).is_err());
        let bad_eta = TRIVIAL.replace(r#""1/2""#, r#""half""#);
        assert!(parse_instance(&bad_eta).is_err());
        let bad_entry = TRIVIAL.replace(r#"["0", "0", "0", "1"]"#, r#"["0", "0", "0", "nan"]"#);
        assert!(parse_instance(&bad_entry).is_err());
    }

    #[test]
    fn matrix_entries_accept_rationals_and_pairs() {
        assert_eq!(parse_f64("1/4").unwrap(), 0.25);
        assert_eq!(parse_entry(&Entry::Complex(["0".into(), "-1".into()])).unwrap(), Complex64::new(0.0, -1.0));
        for x in [0.1, -0.0, 1e-300, std::f64::consts::FRAC_1_SQRT_2, 12345.678] {
            assert_eq!(parse_f64(&format_f64(x)).unwrap().to_bits(), x.to_bits());
        }
    }
}
