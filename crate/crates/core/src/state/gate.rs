use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ALGEBRA_TOLERANCE, ONE, ZERO};
use crate::error::{Error, Result};

/// A named 1- or 2-qubit unitary on explicit data-qubit targets.
///
/// For two targets `[a, b]`, the matrix acts on the local basis `|k_a k_b>`
/// with `a` as the more significant bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalGate {
    name: String,
    targets: Vec<usize>,
    matrix: Vec<Complex64>,
}

impl LocalGate {
    pub fn new(name: impl Into<String>, targets: Vec<usize>, matrix: Vec<Complex64>) -> Result<Self> {
        let k = targets.len();
        if !(1..=2).contains(&k) {
            return Err(Error::Target(format!("a local gate acts on 1 or 2 qubits, got {k}")));
        }
        if k == 2 && targets[0] == targets[1] {
            return Err(Error::Target(format!("repeated target qubit {}", targets[0])));
        }
        let dim = 1usize << k;
        if matrix.len() != dim * dim {
            return Err(Error::ShapeMismatch(format!(
                "{}-qubit gate needs {} entries, got {}",
                k,
                dim * dim,
                matrix.len()
            )));
        }
        let defect = unitarity_defect(&matrix, dim);
        if !(defect <= ALGEBRA_TOLERANCE) {
            return Err(Error::NonUnitary(defect));
        }
        Ok(Self { name: name.into(), targets, matrix })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn local_dim(&self) -> usize {
        1 << self.targets.len()
    }

    pub fn max_target(&self) -> usize {
        self.targets.iter().copied().max().unwrap_or(0)
    }

    pub fn adjoint(&self) -> Self {
        let d = self.local_dim();
        let mut matrix = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                matrix[c * d + r] = self.matrix[r * d + c].conj();
            }
        }
        Self { name: adjoint_name(&self.name), targets: self.targets.clone(), matrix }
    }

    /// Name with targets appended, e.g. `CNOT01` or `H2`.
    pub fn label(&self) -> String {
        let digits: String = self.targets.iter().map(|q| q.to_string()).collect();
        format!("{}{}", self.name, digits)
    }

    /// Looks up a built-in gate by name (`I`, `X`, `Y`, `Z`, `H`, `S`, `Sdg`,
    /// `T`, `Tdg`, `CNOT`, `CZ`, `SWAP`).
    pub fn builtin(name: &str, targets: &[usize]) -> Option<Self> {
        let one = |f: fn(usize) -> Self| (targets.len() == 1).then(|| f(targets[0]));
        let two = |f: fn(usize, usize) -> Self| {
            (targets.len() == 2 && targets[0] != targets[1]).then(|| f(targets[0], targets[1]))
        };
        match name {
            "I" => one(Self::identity),
            "X" => one(Self::x),
            "Y" => one(Self::y),
            "Z" => one(Self::z),
            "H" => one(Self::h),
            "S" => one(Self::s),
            "Sdg" => one(Self::sdg),
            "T" => one(Self::t),
            "Tdg" => one(Self::tdg),
            "CNOT" => two(Self::cnot),
            "CZ" => two(Self::cz),
            "SWAP" => two(Self::swap),
            _ => None,
        }
    }

    /// Same targets and matrix entries within `tol`.
    pub fn approx_eq(&self, other: &LocalGate, tol: f64) -> bool {
        self.targets == other.targets
            && self.matrix.iter().zip(&other.matrix).all(|(a, b)| (a - b).norm() <= tol)
    }

    pub fn is_identity(&self) -> bool {
        let d = self.local_dim();
        (0..d * d).all(|i| {
            let expect = if i / d == i % d { ONE } else { ZERO };
            (self.matrix[i] - expect).norm() <= ALGEBRA_TOLERANCE
        })
    }

    /// Applies the gate to a bare `n`-qubit amplitude vector.
    pub fn apply_to_data(&self, amplitudes: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
        if amplitudes.len() != 1usize << n {
            return Err(Error::ShapeMismatch(format!(
                "{} amplitudes for {n} qubits",
                amplitudes.len()
            )));
        }
        if self.max_target() >= n {
            return Err(Error::Target(format!("{} targets {:?} with n = {n}", self.name, self.targets)));
        }
        let dims = vec![2; n];
        Ok(super::apply_local_matrix(amplitudes, &dims, &self.targets, &self.matrix))
    }

    pub fn identity(q: usize) -> Self {
        Self::fixed("I", vec![q], vec![ONE, ZERO, ZERO, ONE])
    }

    pub fn x(q: usize) -> Self {
        Self::fixed("X", vec![q], vec![ZERO, ONE, ONE, ZERO])
    }

    pub fn y(q: usize) -> Self {
        let i = Complex64::i();
        Self::fixed("Y", vec![q], vec![ZERO, -i, i, ZERO])
    }

    pub fn z(q: usize) -> Self {
        Self::fixed("Z", vec![q], vec![ONE, ZERO, ZERO, -ONE])
    }

    pub fn h(q: usize) -> Self {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::fixed("H", vec![q], vec![s, s, s, -s])
    }

    pub fn s(q: usize) -> Self {
        Self::fixed("S", vec![q], vec![ONE, ZERO, ZERO, Complex64::i()])
    }

    pub fn sdg(q: usize) -> Self {
        Self::fixed("Sdg", vec![q], vec![ONE, ZERO, ZERO, -Complex64::i()])
    }

    pub fn t(q: usize) -> Self {
        let p = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        Self::fixed("T", vec![q], vec![ONE, ZERO, ZERO, p])
    }

    pub fn tdg(q: usize) -> Self {
        let p = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
        Self::fixed("Tdg", vec![q], vec![ONE, ZERO, ZERO, p])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        let mut m = vec![ZERO; 16];
        m[0] = ONE;
        m[5] = ONE;
        m[11] = ONE;
        m[14] = ONE;
        Self::fixed("CNOT", vec![control, target], m)
    }

    pub fn cz(a: usize, b: usize) -> Self {
        let mut m = vec![ZERO; 16];
        m[0] = ONE;
        m[5] = ONE;
        m[10] = ONE;
        m[15] = -ONE;
        Self::fixed("CZ", vec![a, b], m)
    }

    pub fn swap(a: usize, b: usize) -> Self {
        let mut m = vec![ZERO; 16];
        m[0] = ONE;
        m[6] = ONE;
        m[9] = ONE;
        m[15] = ONE;
        Self::fixed("SWAP", vec![a, b], m)
    }

    fn fixed(name: impl Into<String>, targets: Vec<usize>, matrix: Vec<Complex64>) -> Self {
        Self::new(name, targets, matrix).expect("built-in gate is unitary")
    }
}

fn adjoint_name(name: &str) -> String {
    match name {
        "I" | "X" | "Y" | "Z" | "H" | "CNOT" | "CZ" | "SWAP" => name.to_string(),
        "S" => "Sdg".into(),
        "Sdg" => "S".into(),
        "T" => "Tdg".into(),
        "Tdg" => "T".into(),
        _ => match name.strip_suffix("^dag") {
            Some(base) => base.to_string(),
            None => format!("{name}^dag"),
        },
    }
}

/// `max |M M^dag - I|` over entries.
pub(crate) fn unitarity_defect(matrix: &[Complex64], dim: usize) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..dim {
        for c in 0..dim {
            let mut acc = ZERO;
            for k in 0..dim {
                acc += matrix[r * dim + k] * matrix[c * dim + k].conj();
            }
            let expect = if r == c { ONE } else { ZERO };
            let d = (acc - expect).norm();
            if d.is_nan() {
                return f64::INFINITY;
            }
            worst = worst.max(d);
        }
    }
    worst
}
