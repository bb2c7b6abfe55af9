//! Exact state-vector substrate over mixed-radix registers.
//!
//! A [`RegisteredState`] is a complex amplitude vector laid out over an
//! ordered list of registers with arbitrary (not necessarily power-of-two)
//! dimensions. Index order is big-endian mixed radix: register 0 is the most
//! significant digit, so for dims `[d0, d1, d2]` the basis state
//! `|k0, k1, k2>` lives at `(k0 * d1 + k1) * d2 + k2`. Qubit `q` of an
//! `n`-qubit data block is therefore bit `n - 1 - q` of the block index.
//! Every serializer in this crate uses this order.
//!
//! States are immutable values. Operations return new states.

mod gate;
mod kernel;
mod swap;

pub use gate::LocalGate;
pub use kernel::apply_local_matrix;
pub use swap::{
    phase_optimized_distance, swap_reject_amplitudes, swap_test_reject_prob, swap_test_sample,
};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for "is this state normalized" assertions.
pub const NORM_TOLERANCE: f64 = 1e-9;
/// Tolerance for algebraic identities (unitarity, norm preservation).
pub const ALGEBRA_TOLERANCE: f64 = 1e-12;
/// Projections with success probability below this return no post-state.
pub const PROJECTION_FLOOR: f64 = 1e-15;
/// Default cap on the total dimension of any state built by [`RegisteredState::tensor_with`].
pub const DEFAULT_DIMENSION_CAP: usize = 1 << 20;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegisterShape {
    dims: Vec<usize>,
}

impl RegisterShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Shape("a shape needs at least one register".into()));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::Shape(format!("register {pos} has dimension 0")));
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::Shape(format!("total dimension of {dims:?} overflows")))?;
        Ok(Self { dims })
    }

    /// `[label, 2, 2, ..., 2]`: a qudit followed by `n` qubits.
    pub fn qudit_and_qubits(label_dim: usize, n: usize) -> Result<Self> {
        let mut dims = Vec::with_capacity(n + 1);
        dims.push(label_dim);
        dims.extend(std::iter::repeat_n(2, n));
        Self::new(dims)
    }

    pub fn qubits(n: usize) -> Result<Self> {
        if n == 0 {
            return Self::new(vec![1]);
        }
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_registers(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, register: usize) -> usize {
        self.dims[register]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Distance in the flat index between consecutive values of `register`.
    pub fn stride(&self, register: usize) -> usize {
        self.dims[register + 1..].iter().product()
    }

    pub fn index_of(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.dims.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} digits for {} registers",
                digits.len(),
                self.dims.len()
            )));
        }
        let mut index = 0usize;
        for (reg, (&digit, &dim)) in digits.iter().zip(&self.dims).enumerate() {
            if digit >= dim {
                return Err(Error::Shape(format!(
                    "digit {digit} out of range for register {reg} of dimension {dim}"
                )));
            }
            index = index * dim + digit;
        }
        Ok(index)
    }

    pub fn digits_of(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.dims.len()];
        for (slot, &dim) in digits.iter_mut().zip(&self.dims).rev() {
            *slot = index % dim;
            index /= dim;
        }
        digits
    }

    pub fn concat(&self, other: &RegisterShape) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::new(dims)
    }

    /// The shape with `register` removed. Removing the only register leaves `[1]`.
    pub fn without(&self, register: usize) -> Self {
        let mut dims = self.dims.clone();
        dims.remove(register);
        if dims.is_empty() {
            dims.push(1);
        }
        Self { dims }
    }

    fn check_register(&self, register: usize) -> Result<()> {
        if register >= self.dims.len() {
            return Err(Error::Shape(format!(
                "register {register} does not exist in shape {:?}",
                self.dims
            )));
        }
        Ok(())
    }
}

/// Outcome of projecting one register onto a target vector.
#[derive(Clone, Debug)]
pub struct Projection {
    /// `||(|t><t| (x) I)|s>||^2`.
    pub probability: f64,
    /// `||((I - |t><t|) (x) I)|s>||^2`, computed from the residual directly so
    /// that tiny failure probabilities keep their relative precision.
    pub complement: f64,
    /// Renormalized post-projection state, or `None` below [`PROJECTION_FLOOR`].
    pub state: Option<RegisteredState>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegisteredState {
    shape: RegisterShape,
    amplitudes: Vec<Complex64>,
}

impl RegisteredState {
    pub fn new(shape: RegisterShape, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != shape.total_dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} amplitudes for shape {:?} of dimension {}",
                amplitudes.len(),
                shape.dims(),
                shape.total_dim()
            )));
        }
        if let Some(i) = amplitudes.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Amplitudes(format!("amplitude {i} is not finite")));
        }
        Ok(Self { shape, amplitudes })
    }

    /// Builds a state and rescales it to unit norm.
    pub fn normalized(shape: RegisterShape, amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::new(shape, amplitudes)?;
        let norm = state.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::Amplitudes("cannot normalize the zero vector".into()));
        }
        Ok(state.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn basis(shape: RegisterShape, digits: &[usize]) -> Result<Self> {
        let index = shape.index_of(digits)?;
        let mut amplitudes = vec![ZERO; shape.total_dim()];
        amplitudes[index] = ONE;
        Ok(Self { shape, amplitudes })
    }

    pub fn zero_qubits(n: usize) -> Self {
        let shape = RegisterShape::qubits(n).expect("qubit shape");
        let digits = vec![0; shape.num_registers()];
        Self::basis(shape, &digits).expect("basis digits in range")
    }

    pub fn shape(&self) -> &RegisterShape {
        &self.shape
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &RegisteredState) -> Result<Complex64> {
        self.require_same_shape(other)?;
        Ok(inner_amplitudes(&self.amplitudes, &other.amplitudes))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            shape: self.shape.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// Same amplitudes, different register split of the same total dimension.
    pub fn reshaped(&self, shape: RegisterShape) -> Result<Self> {
        Self::new(shape, self.amplitudes.clone())
    }

    pub fn tensor_with(&self, other: &RegisteredState) -> Result<Self> {
        self.tensor_with_capped(other, DEFAULT_DIMENSION_CAP)
    }

    pub fn tensor_with_capped(&self, other: &RegisteredState, cap: usize) -> Result<Self> {
        let dim = self
            .dim()
            .checked_mul(other.dim())
            .ok_or(Error::DimensionCap { dim: usize::MAX, cap })?;
        if dim > cap {
            return Err(Error::DimensionCap { dim, cap });
        }
        let shape = self.shape.concat(&other.shape)?;
        let mut amplitudes = Vec::with_capacity(dim);
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Ok(Self { shape, amplitudes })
    }

    /// Applies `gate` to the data qubits, where data qubit `q` is register
    /// `data_register_offset + q` and every such register has dimension 2.
    pub fn apply_local_gate(&self, gate: &LocalGate, data_register_offset: usize) -> Result<Self> {
        let registers = self.qubit_registers(gate.targets(), data_register_offset)?;
        let amplitudes =
            apply_local_matrix(&self.amplitudes, self.shape.dims(), &registers, gate.matrix());
        Ok(Self { shape: self.shape.clone(), amplitudes })
    }

    /// Applies an arbitrary square matrix on a set of registers (not
    /// necessarily unitary; used for Hamiltonian terms).
    pub fn apply_matrix(&self, matrix: &[Complex64], registers: &[usize]) -> Result<Self> {
        for &r in registers {
            self.shape.check_register(r)?;
        }
        let local: usize = registers.iter().map(|&r| self.shape.dim(r)).product();
        if matrix.len() != local * local {
            return Err(Error::ShapeMismatch(format!(
                "matrix with {} entries for local dimension {local}",
                matrix.len()
            )));
        }
        let amplitudes = apply_local_matrix(&self.amplitudes, self.shape.dims(), registers, matrix);
        Ok(Self { shape: self.shape.clone(), amplitudes })
    }

    pub(crate) fn qubit_registers(&self, targets: &[usize], offset: usize) -> Result<Vec<usize>> {
        targets
            .iter()
            .map(|&q| {
                let reg = offset + q;
                if reg >= self.shape.num_registers() {
                    return Err(Error::Target(format!(
                        "qubit {q} (register {reg}) outside shape {:?}",
                        self.shape.dims()
                    )));
                }
                if self.shape.dim(reg) != 2 {
                    return Err(Error::Target(format!(
                        "register {reg} has dimension {}, not a qubit",
                        self.shape.dim(reg)
                    )));
                }
                Ok(reg)
            })
            .collect()
    }

    /// `<t|_register |self>`: the (unnormalized) state of the remaining registers.
    pub fn contract_register(&self, register: usize, target: &[Complex64]) -> Result<Self> {
        self.shape.check_register(register)?;
        let dim = self.shape.dim(register);
        if target.len() != dim {
            return Err(Error::ShapeMismatch(format!(
                "target vector of length {} for register {register} of dimension {dim}",
                target.len()
            )));
        }
        let stride = self.shape.stride(register);
        let outer = self.dim() / (dim * stride);
        let mut out = vec![ZERO; outer * stride];
        for o in 0..outer {
            for (k, t) in target.iter().enumerate() {
                let tc = t.conj();
                if tc == ZERO {
                    continue;
                }
                let base = (o * dim + k) * stride;
                for s in 0..stride {
                    out[o * stride + s] += tc * self.amplitudes[base + s];
                }
            }
        }
        Ok(Self { shape: self.shape.without(register), amplitudes: out })
    }

    /// The slice of amplitudes with `register` fixed to `outcome`, register removed.
    pub fn slice_register(&self, register: usize, outcome: usize) -> Result<Self> {
        self.shape.check_register(register)?;
        let dim = self.shape.dim(register);
        if outcome >= dim {
            return Err(Error::Shape(format!("outcome {outcome} >= dimension {dim}")));
        }
        let stride = self.shape.stride(register);
        let outer = self.dim() / (dim * stride);
        let mut out = Vec::with_capacity(outer * stride);
        for o in 0..outer {
            let base = (o * dim + outcome) * stride;
            out.extend_from_slice(&self.amplitudes[base..base + stride]);
        }
        Ok(Self { shape: self.shape.without(register), amplitudes: out })
    }

    /// Inverse of [`Self::contract_register`] for product states: inserts a
    /// register holding `vector` at position `register`.
    pub fn insert_register(&self, register: usize, vector: &[Complex64]) -> Result<Self> {
        if register > self.shape.num_registers() {
            return Err(Error::Shape(format!("cannot insert at register {register}")));
        }
        let mut dims = self.shape.dims().to_vec();
        if dims == [1] {
            dims.clear();
        }
        let register = register.min(dims.len());
        let stride: usize = dims[register..].iter().product();
        let outer: usize = dims[..register].iter().product();
        dims.insert(register, vector.len());
        let shape = RegisterShape::new(dims)?;
        let mut out = vec![ZERO; shape.total_dim()];
        for o in 0..outer {
            for (k, v) in vector.iter().enumerate() {
                let base = (o * vector.len() + k) * stride;
                for s in 0..stride {
                    out[base + s] = v * self.amplitudes[o * stride + s];
                }
            }
        }
        Ok(Self { shape, amplitudes: out })
    }

    /// Born probabilities of a computational-basis measurement of `register`.
    pub fn register_distribution(&self, register: usize) -> Result<Vec<f64>> {
        self.shape.check_register(register)?;
        let dim = self.shape.dim(register);
        let stride = self.shape.stride(register);
        let mut probs = vec![0.0; dim];
        for (i, a) in self.amplitudes.iter().enumerate() {
            probs[(i / stride) % dim] += a.norm_sqr();
        }
        Ok(probs)
    }

    pub fn project_onto(&self, register: usize, target: &[Complex64]) -> Result<Projection> {
        let target_norm: f64 = target.iter().map(|t| t.norm_sqr()).sum();
        if (target_norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Amplitudes(format!(
                "projection target has squared norm {target_norm}"
            )));
        }
        let reduced = self.contract_register(register, target)?;
        let projected = reduced.insert_register(register, target)?;
        let probability = projected.norm_sqr();
        let complement = self
            .amplitudes
            .iter()
            .zip(&projected.amplitudes)
            .map(|(a, p)| (a - p).norm_sqr())
            .sum();
        let state = (probability >= PROJECTION_FLOOR)
            .then(|| projected.scaled(Complex64::new(1.0 / probability.sqrt(), 0.0)));
        Ok(Projection { probability, complement, state })
    }

    /// Conditional state after observing `outcome` on `register` (register kept).
    pub fn condition_on(&self, register: usize, outcome: usize) -> Result<(f64, Option<Self>)> {
        let dim = self.shape.dim(register);
        let stride = self.shape.stride(register);
        let mut amplitudes = self.amplitudes.clone();
        let mut prob = 0.0;
        for (i, a) in amplitudes.iter_mut().enumerate() {
            if (i / stride) % dim == outcome {
                prob += a.norm_sqr();
            } else {
                *a = ZERO;
            }
        }
        if prob < PROJECTION_FLOOR {
            return Ok((prob, None));
        }
        let scale = Complex64::new(1.0 / prob.sqrt(), 0.0);
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        Ok((prob, Some(Self { shape: self.shape.clone(), amplitudes })))
    }

    pub fn measure_register_sample<R: Rng + ?Sized>(
        &self,
        register: usize,
        rng: &mut R,
    ) -> Result<(usize, Self)> {
        let probs = self.register_distribution(register)?;
        let outcome = sample_index(&probs, rng);
        let (_, state) = self.condition_on(register, outcome)?;
        let state = state.ok_or_else(|| {
            Error::Amplitudes(format!("sampled outcome {outcome} has negligible weight"))
        })?;
        Ok((outcome, state))
    }

    pub(crate) fn require_same_shape(&self, other: &RegisteredState) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape.dims(),
                other.shape.dims()
            )));
        }
        Ok(())
    }
}

pub fn inner_amplitudes(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr_amplitudes(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Uniform superposition over the first `support` of `dim` basis states.
pub fn uniform_vector(dim: usize, support: usize) -> Vec<Complex64> {
    let amp = Complex64::new(1.0 / (support as f64).sqrt(), 0.0);
    (0..dim).map(|k| if k < support { amp } else { ZERO }).collect()
}

/// Draws an index from a (possibly slightly unnormalized) probability vector.
/// Weights are clamped to `[0, 1]` first.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let clamped: Vec<f64> = probs.iter().map(|p| p.clamp(0.0, 1.0)).collect();
    let total: f64 = clamped.iter().sum();
    let u: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, p) in clamped.iter().enumerate() {
        if *p > 0.0 {
            last = i;
        }
        acc += p;
        if u < acc {
            return i;
        }
    }
    last
}
