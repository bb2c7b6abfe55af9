//! Proof states: the gate-sequence witness `|U>`, the state-sequence witness
//! `|S>`, and the shift-and-gate map `W`.
//!
//! Labels are 0-based here: label `i` holds the `(i+1)`-th step, so label 0
//! carries the start state and label `m` the end state.

mod adversary;
pub mod dump;

pub use adversary::{forge_adversary, forge_composite, AdversaryKind, AdversarySpec, Deviation, Forged};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Endpoint, GateSet, GsconInstance, TraversalCertificate};
use crate::state::{norm_sqr_amplitudes, RegisterShape, RegisteredState, NORM_TOLERANCE, ZERO};

/// `sum_i |i>|u_i>` over a `[2m, D]` register pair, `D >= G`. Gate-register
/// values `>= G` encode nothing in the gate set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessU {
    state: RegisteredState,
}

impl WitnessU {
    pub fn new(state: RegisteredState) -> Result<Self> {
        if state.shape().num_registers() != 2 {
            return Err(Error::Shape(format!("|U> needs [label, gate] registers, got {:?}", state.shape().dims())));
        }
        if !state.is_normalized() {
            return Err(Error::Amplitudes(format!("|U> has squared norm {}", state.norm_sqr())));
        }
        Ok(Self { state })
    }

    /// Builds from a `label x gate` amplitude table.
    pub fn from_table(table: &[Vec<Complex64>]) -> Result<Self> {
        let gate_dim = table.first().map_or(0, Vec::len);
        if table.iter().any(|row| row.len() != gate_dim) {
            return Err(Error::Shape("ragged |U> table".into()));
        }
        let shape = RegisterShape::new(vec![table.len(), gate_dim])?;
        Self::new(RegisteredState::new(shape, table.concat())?)
    }

    pub fn state(&self) -> &RegisteredState {
        &self.state
    }

    pub fn label_dim(&self) -> usize {
        self.state.shape().dim(0)
    }

    pub fn gate_dim(&self) -> usize {
        self.state.shape().dim(1)
    }

    pub fn row(&self, label: usize) -> &[Complex64] {
        let d = self.gate_dim();
        &self.state.amplitudes()[label * d..(label + 1) * d]
    }

    pub fn table(&self) -> Vec<Vec<Complex64>> {
        (0..self.label_dim()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn label_probabilities(&self) -> Vec<f64> {
        (0..self.label_dim()).map(|i| norm_sqr_amplitudes(self.row(i))).collect()
    }

    /// `|alpha_i beta_{i,g}|^2` for every label and gate value.
    pub fn joint_probabilities(&self) -> Vec<Vec<f64>> {
        (0..self.label_dim()).map(|i| self.row(i).iter().map(|a| a.norm_sqr()).collect()).collect()
    }

    /// Most likely gate value for each label.
    pub fn decoded_sequence(&self) -> Vec<usize> {
        (0..self.label_dim())
            .map(|i| {
                let row = self.row(i);
                (0..row.len()).fold(0, |best, g| if row[g].norm_sqr() > row[best].norm_sqr() { g } else { best })
            })
            .collect()
    }
}

/// `sum_i |i>|psi_i>` over `[2m, 2, ..., 2]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessS {
    state: RegisteredState,
}

impl WitnessS {
    pub fn new(state: RegisteredState) -> Result<Self> {
        let dims = state.shape().dims();
        if dims.len() < 2 || dims[1..].iter().any(|&d| d != 2) {
            return Err(Error::Shape(format!("|S> needs [label, 2, ..., 2] registers, got {dims:?}")));
        }
        if !state.is_normalized() {
            return Err(Error::Amplitudes(format!("|S> has squared norm {}", state.norm_sqr())));
        }
        Ok(Self { state })
    }

    /// Builds from one (weighted, unnormalized) data vector per label.
    pub fn from_labels(n: usize, labels: &[Vec<Complex64>]) -> Result<Self> {
        if labels.iter().any(|v| v.len() != 1 << n) {
            return Err(Error::Shape(format!("|S> data parts must have dimension 2^{n}")));
        }
        let shape = RegisterShape::qudit_and_qubits(labels.len(), n)?;
        Self::new(RegisteredState::new(shape, labels.concat())?)
    }

    pub fn state(&self) -> &RegisteredState {
        &self.state
    }

    pub fn label_dim(&self) -> usize {
        self.state.shape().dim(0)
    }

    pub fn data_dim(&self) -> usize {
        self.state.dim() / self.label_dim()
    }

    pub fn num_qubits(&self) -> usize {
        self.state.shape().num_registers() - 1
    }

    /// Weighted data part `a_i |psi_i>` at `label`.
    pub fn data(&self, label: usize) -> &[Complex64] {
        let d = self.data_dim();
        &self.state.amplitudes()[label * d..(label + 1) * d]
    }

    pub fn labels(&self) -> Vec<Vec<Complex64>> {
        (0..self.label_dim()).map(|i| self.data(i).to_vec()).collect()
    }

    pub fn label_probabilities(&self) -> Vec<f64> {
        (0..self.label_dim()).map(|i| norm_sqr_amplitudes(self.data(i))).collect()
    }

    /// Normalized `|psi_i>`, or `None` when the label carries no weight.
    pub fn label_state(&self, label: usize) -> Option<RegisteredState> {
        let data = self.data(label);
        let p = norm_sqr_amplitudes(data);
        if p == 0.0 {
            return None;
        }
        let shape = RegisterShape::qubits(self.num_qubits()).ok()?;
        let scale = Complex64::new(1.0 / p.sqrt(), 0.0);
        RegisteredState::new(shape, data.iter().map(|a| a * scale).collect()).ok()
    }
}

/// The four unentangled proofs `(|U>, |U'>, |S>, |S'>)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessTuple {
    pub u: WitnessU,
    pub u_prime: WitnessU,
    pub s: WitnessS,
    pub s_prime: WitnessS,
}

/// The `2m` gate indices of an honest `|U>`: the certificate followed by
/// the adjoints of its gates in reverse order.
pub fn honest_assignment(gate_set: &GateSet, cert: &TraversalCertificate) -> Result<Vec<usize>> {
    let mut out = cert.gates.clone();
    for &g in cert.gates.iter().rev() {
        let adj = gate_set.adjoint_of(g).ok_or_else(|| {
            Error::NotAdjointClosed(format!("no adjoint of gate {g} ({}) in the set", gate_set.gate(g).label()))
        })?;
        out.push(adj);
    }
    Ok(out)
}

pub fn build_honest_u(inst: &GsconInstance, cert: &TraversalCertificate) -> Result<WitnessU> {
    cert.check(inst)?;
    let assignment = honest_assignment(&inst.gate_set, cert)?;
    witness_u_for(&assignment, inst.g())
}

/// Uniform `|U>` on a given `2m`-long assignment.
pub fn witness_u_for(assignment: &[usize], gate_dim: usize) -> Result<WitnessU> {
    let amp = Complex64::new((1.0 / assignment.len() as f64).sqrt(), 0.0);
    let table: Vec<Vec<Complex64>> = assignment
        .iter()
        .map(|&g| {
            let mut row = vec![ZERO; gate_dim];
            row[g] = amp;
            row
        })
        .collect();
    WitnessU::from_table(&table)
}

pub fn build_honest_s(inst: &GsconInstance, cert: &TraversalCertificate) -> Result<WitnessS> {
    cert.check(inst)?;
    let assignment = honest_assignment(&inst.gate_set, cert)?;
    witness_s_for(inst, &assignment)
}

/// Uniform `|S>` whose states follow `assignment` from `|psi>`.
pub fn witness_s_for(inst: &GsconInstance, assignment: &[usize]) -> Result<WitnessS> {
    let amp = Complex64::new((1.0 / assignment.len() as f64).sqrt(), 0.0);
    let mut current = inst.prepare_state(Endpoint::Psi)?.into_amplitudes();
    let mut labels = Vec::with_capacity(assignment.len());
    for (i, &g) in assignment.iter().enumerate() {
        labels.push(current.iter().map(|a| a * amp).collect());
        if i + 1 < assignment.len() {
            current = inst.gate_set.gate(g).apply_to_data(&current, inst.n)?;
        }
    }
    WitnessS::from_labels(inst.n, &labels)
}

pub fn honest_tuple(inst: &GsconInstance, cert: &TraversalCertificate) -> Result<WitnessTuple> {
    let u = build_honest_u(inst, cert)?;
    let s = build_honest_s(inst, cert)?;
    Ok(WitnessTuple { u: u.clone(), u_prime: u, s: s.clone(), s_prime: s })
}

/// `W = sum_i |i+1><i| (x) U_i`, cyclic in the label.
pub fn apply_w(gate_set: &GateSet, assignment: &[usize], s: &WitnessS) -> Result<WitnessS> {
    let l = s.label_dim();
    if assignment.len() != l {
        return Err(Error::ShapeMismatch(format!("{} gates for {l} labels", assignment.len())));
    }
    let n = s.num_qubits();
    let mut out = vec![Vec::new(); l];
    for (i, &g) in assignment.iter().enumerate() {
        if g >= gate_set.len() {
            return Err(Error::Instance(format!("gate index {g} outside a set of {}", gate_set.len())));
        }
        out[(i + 1) % l] = gate_set.gate(g).apply_to_data(s.data(i), n)?;
    }
    WitnessS::from_labels(n, &out)
}

/// `U_{2m} ... U_1` as a dense `2^n x 2^n` row-major matrix.
pub fn sequence_product(gate_set: &GateSet, assignment: &[usize], n: usize) -> Result<Vec<Complex64>> {
    let dim = 1usize << n;
    let mut columns: Vec<Vec<Complex64>> = (0..dim)
        .map(|c| (0..dim).map(|r| if r == c { Complex64::new(1.0, 0.0) } else { ZERO }).collect())
        .collect();
    for &g in assignment {
        for col in columns.iter_mut() {
            *col = gate_set.gate(g).apply_to_data(col, n)?;
        }
    }
    let mut out = vec![ZERO; dim * dim];
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            out[r * dim + c] = *v;
        }
    }
    Ok(out)
}

/// Checks that a `|U>` table is honest-shaped: one gate per label with weight `1/(2m)`.
pub fn is_honest_form(u: &WitnessU) -> bool {
    let target = 1.0 / u.label_dim() as f64;
    u.joint_probabilities().iter().all(|row| {
        let nonzero: Vec<f64> = row.iter().copied().filter(|&p| p > 0.0).collect();
        nonzero.len() == 1 && (nonzero[0] - target).abs() <= NORM_TOLERANCE
    })
}
