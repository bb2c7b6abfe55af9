//! JSON dumps of witness tuples. Only nonzero amplitudes are listed.
//!
//! ```json
//! { "n": 1, "m": 1, "gate_dim": 4,
//!   "u": [ { "label": 0, "entries": [ { "index": 0, "amp": ["0.7071067811865476", "0.0"] } ] }, ... ],
//!   "u_prime": [...], "s": [...], "s_prime": [...] }
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{WitnessS, WitnessTuple, WitnessU};
use crate::error::{Error, Result};
use crate::instance::format::{format_f64, parse_f64};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    index: usize,
    amp: [String; 2],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelFile {
    label: usize,
    entries: Vec<EntryFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleFile {
    n: usize,
    m: usize,
    gate_dim: usize,
    u: Vec<LabelFile>,
    u_prime: Vec<LabelFile>,
    s: Vec<LabelFile>,
    s_prime: Vec<LabelFile>,
}

fn rows_to_file(rows: &[Vec<Complex64>]) -> Vec<LabelFile> {
    rows.iter()
        .enumerate()
        .map(|(label, row)| LabelFile {
            label,
            entries: row
                .iter()
                .enumerate()
                .filter(|(_, a)| **a != Complex64::new(0.0, 0.0))
                .map(|(index, a)| EntryFile { index, amp: [format_f64(a.re), format_f64(a.im)] })
                .collect(),
        })
        .collect()
}

fn file_to_rows(labels: &[LabelFile], count: usize, width: usize) -> Result<Vec<Vec<Complex64>>> {
    let mut rows = vec![vec![Complex64::new(0.0, 0.0); width]; count];
    for l in labels {
        let row = rows
            .get_mut(l.label)
            .ok_or_else(|| Error::Parse(format!("label {} outside 0..{count}", l.label)))?;
        for e in &l.entries {
            let slot = row
                .get_mut(e.index)
                .ok_or_else(|| Error::Parse(format!("index {} outside 0..{width}", e.index)))?;
            *slot = Complex64::new(parse_f64(&e.amp[0])?, parse_f64(&e.amp[1])?);
        }
    }
    Ok(rows)
}

pub fn tuple_to_json(t: &WitnessTuple) -> String {
    let file = TupleFile {
        n: t.s.num_qubits(),
        m: t.s.label_dim() / 2,
        gate_dim: t.u.gate_dim(),
        u: rows_to_file(&t.u.table()),
        u_prime: rows_to_file(&t.u_prime.table()),
        s: rows_to_file(&t.s.labels()),
        s_prime: rows_to_file(&t.s_prime.labels()),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("tuple serializes");
    text.push('\n');
    text
}

pub fn parse_tuple(text: &str) -> Result<WitnessTuple> {
    let f: TupleFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("witness file: {e}")))?;
    let labels = 2 * f.m;
    let u = |l: &[LabelFile]| WitnessU::from_table(&file_to_rows(l, labels, f.gate_dim)?);
    let s = |l: &[LabelFile]| WitnessS::from_labels(f.n, &file_to_rows(l, labels, 1 << f.n)?);
    Ok(WitnessTuple { u: u(&f.u)?, u_prime: u(&f.u_prime)?, s: s(&f.s)?, s_prime: s(&f.s_prime)? })
}
