//! Frustration-free ground state connectivity instances.

pub(crate) mod energy;
mod fixtures;
pub mod format;
mod search;
mod validate;

pub use energy::{dense_hamiltonian, energy_of, energy_test_reject_prob, energy_test_sample, term_energy_povm};
pub use fixtures::{builtin_instance, builtin_instances, Fixture, FixtureLabel};
pub use search::{exhaustive_search, SearchOutcome, SEARCH_LIMIT};
pub use validate::{validate_instance, Check, ValidationReport};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Exact};
use crate::state::{LocalGate, RegisteredState, ALGEBRA_TOLERANCE};

/// A threshold held both exactly and as a double.
#[derive(Clone, Debug, PartialEq)]
pub struct Real {
    exact: Exact,
    approx: f64,
}

impl Real {
    pub fn new(exact: Exact) -> Self {
        let approx = exact::to_f64(&exact);
        Self { exact, approx }
    }

    pub fn parse(text: &str) -> Result<Self> {
        exact::parse_exact(text).map(Self::new)
    }

    pub fn exact(&self) -> &Exact {
        &self.exact
    }

    pub fn value(&self) -> f64 {
        self.approx
    }
}

impl From<Exact> for Real {
    fn from(exact: Exact) -> Self {
        Self::new(exact)
    }
}

/// One positive semidefinite term acting on `support` data qubits.
#[derive(Clone, Debug)]
pub struct HamiltonianTerm {
    support: Vec<usize>,
    matrix: Vec<Complex64>,
    eigenvalues: Vec<f64>,
    /// `eigenvectors[a]` belongs to `eigenvalues[a]`.
    eigenvectors: Vec<Vec<Complex64>>,
}

impl HamiltonianTerm {
    pub fn new(support: Vec<usize>, matrix: Vec<Complex64>) -> Result<Self> {
        let k = support.len();
        if k == 0 {
            return Err(Error::Instance("a term must act on at least one qubit".into()));
        }
        let mut sorted = support.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Instance(format!("repeated qubit in term support {support:?}")));
        }
        let dim = 1usize << k;
        if matrix.len() != dim * dim {
            return Err(Error::Instance(format!(
                "term on {k} qubits needs {} entries, got {}",
                dim * dim,
                matrix.len()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Instance("term matrix has non-finite entries".into()));
        }
        // The POVM uses the Hermitian part; the validator reports any defect.
        let hermitian = DMatrix::from_fn(dim, dim, |r, c| {
            (matrix[r * dim + c] + matrix[c * dim + r].conj()) * 0.5
        });
        let eigen = hermitian.symmetric_eigen();
        let eigenvalues = eigen.eigenvalues.iter().copied().collect();
        let eigenvectors =
            (0..dim).map(|a| eigen.eigenvectors.column(a).iter().copied().collect()).collect();
        Ok(Self { support, matrix, eigenvalues, eigenvectors })
    }

    /// `|1><1|` on one qubit.
    pub fn projector_one(q: usize) -> Self {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        Self::new(vec![q], vec![o, o, o, l]).expect("valid term")
    }

    /// `|11><11|` on a qubit pair.
    pub fn projector_one_one(a: usize, b: usize) -> Self {
        let mut m = vec![Complex64::new(0.0, 0.0); 16];
        m[15] = Complex64::new(1.0, 0.0);
        Self::new(vec![a, b], m).expect("valid term")
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn local_dim(&self) -> usize {
        1 << self.support.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[Vec<Complex64>] {
        &self.eigenvectors
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.local_dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                worst = worst.max((self.matrix[r * d + c] - self.matrix[c * d + r].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Operator norm of the Hermitian part.
    pub fn operator_norm(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }
}

/// The ordered list of encodable gates, with its adjoint map.
///
/// Gate `g` corresponds to basis state `|g>` of the gate register.
#[derive(Clone, Debug)]
pub struct GateSet {
    gates: Vec<LocalGate>,
    adjoints: Vec<Option<usize>>,
    given: usize,
}

impl GateSet {
    /// Uses `gates` verbatim; adjoints that are not in the list stay unmapped.
    pub fn as_given(gates: Vec<LocalGate>) -> Result<Self> {
        if gates.is_empty() {
            return Err(Error::Instance("empty gate set".into()));
        }
        let given = gates.len();
        let adjoints = (0..given).map(|i| find_gate(&gates, &gates[i].adjoint())).collect();
        Ok(Self { gates, adjoints, given })
    }

    /// Appends any missing adjoints so every gate's inverse is encodable.
    pub fn adjoint_closed(mut gates: Vec<LocalGate>) -> Result<Self> {
        if gates.is_empty() {
            return Err(Error::Instance("empty gate set".into()));
        }
        let given = gates.len();
        let mut i = 0;
        while i < gates.len() {
            let adj = gates[i].adjoint();
            if find_gate(&gates, &adj).is_none() {
                gates.push(adj);
            }
            i += 1;
        }
        let mut set = Self::as_given(gates)?;
        set.given = given;
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gates(&self) -> &[LocalGate] {
        &self.gates
    }

    pub fn gate(&self, index: usize) -> &LocalGate {
        &self.gates[index]
    }

    pub fn adjoint_of(&self, index: usize) -> Option<usize> {
        self.adjoints[index]
    }

    /// Number of gates appended by adjoint closure.
    pub fn appended(&self) -> usize {
        self.gates.len() - self.given
    }

    pub fn is_adjoint_closed(&self) -> bool {
        self.adjoints.iter().all(Option::is_some)
    }

    pub fn identity_index(&self) -> Option<usize> {
        self.gates.iter().position(LocalGate::is_identity)
    }
}

fn find_gate(gates: &[LocalGate], target: &LocalGate) -> Option<usize> {
    gates.iter().position(|g| g.approx_eq(target, ALGEBRA_TOLERANCE))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Psi,
    Phi,
}

#[derive(Clone, Debug)]
pub struct GsconInstance {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub terms: Vec<HamiltonianTerm>,
    pub eta2: Real,
    pub eta3: Real,
    pub eta4: Real,
    pub delta: Real,
    pub psi_circuit: Vec<LocalGate>,
    pub phi_circuit: Vec<LocalGate>,
    pub gate_set: GateSet,
}

impl GsconInstance {
    /// Number of Hamiltonian terms.
    pub fn r(&self) -> usize {
        self.terms.len()
    }

    /// Size of the gate set.
    pub fn g(&self) -> usize {
        self.gate_set.len()
    }

    /// Dimension of the label register.
    pub fn label_dim(&self) -> usize {
        2 * self.m
    }

    pub fn data_dim(&self) -> usize {
        1 << self.n
    }

    /// Applies the endpoint's circuit to `|0...0>`.
    pub fn prepare_state(&self, which: Endpoint) -> Result<RegisteredState> {
        let circuit = match which {
            Endpoint::Psi => &self.psi_circuit,
            Endpoint::Phi => &self.phi_circuit,
        };
        circuit
            .iter()
            .try_fold(RegisteredState::zero_qubits(self.n), |s, g| s.apply_local_gate(g, 0))
    }

    /// `U_len ... U_1 |psi>` for gate-set indices, as amplitudes.
    pub fn replay(&self, gates: &[usize]) -> Result<Vec<Vec<Complex64>>> {
        let mut states = Vec::with_capacity(gates.len() + 1);
        states.push(self.prepare_state(Endpoint::Psi)?.into_amplitudes());
        for &g in gates {
            if g >= self.g() {
                return Err(Error::Instance(format!("gate index {g} outside a set of {}", self.g())));
            }
            let next = self.gate_set.gate(g).apply_to_data(states.last().unwrap(), self.n)?;
            states.push(next);
        }
        Ok(states)
    }
}

/// A YES certificate: `m` gate-set indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraversalCertificate {
    pub gates: Vec<usize>,
}

impl TraversalCertificate {
    pub fn new(gates: Vec<usize>) -> Self {
        Self { gates }
    }

    pub fn check(&self, inst: &GsconInstance) -> Result<()> {
        if self.gates.len() != inst.m {
            return Err(Error::Instance(format!(
                "certificate has {} gates, instance has m = {}",
                self.gates.len(),
                inst.m
            )));
        }
        if let Some(&g) = self.gates.iter().find(|&&g| g >= inst.g()) {
            return Err(Error::Instance(format!("certificate gate {g} >= G = {}", inst.g())));
        }
        Ok(())
    }
}
