use num_complex::Complex64;
use rand::Rng;

use super::GsconInstance;
use crate::error::{Error, Result};
use crate::state::{apply_local_matrix, inner_amplitudes, norm_sqr_amplitudes, sample_index, RegisteredState};

fn data_amplitudes<'a>(inst: &GsconInstance, s: &'a RegisteredState) -> Result<&'a [Complex64]> {
    if s.dim() != inst.data_dim() {
        return Err(Error::ShapeMismatch(format!(
            "state of dimension {} for {} data qubits",
            s.dim(),
            inst.n
        )));
    }
    Ok(s.amplitudes())
}

/// `<s|H|s>`, summed term by term from the stored matrices.
pub fn energy_of(inst: &GsconInstance, s: &RegisteredState) -> Result<f64> {
    let amps = data_amplitudes(inst, s)?;
    Ok(energy_of_amplitudes(inst, amps))
}

pub(crate) fn energy_of_amplitudes(inst: &GsconInstance, amps: &[Complex64]) -> f64 {
    let dims = vec![2; inst.n];
    inst.terms
        .iter()
        .map(|t| {
            let h_s = apply_local_matrix(amps, &dims, t.support(), t.matrix());
            inner_amplitudes(amps, &h_s).re
        })
        .sum()
}

/// `H = sum_i H_i` as a dense row-major `2^n x 2^n` matrix.
pub fn dense_hamiltonian(inst: &GsconInstance) -> Result<Vec<Complex64>> {
    const MAX_QUBITS: usize = 12;
    if inst.n > MAX_QUBITS {
        return Err(Error::DeskScale(format!("dense H on {} qubits (limit {MAX_QUBITS})", inst.n)));
    }
    let dim = inst.data_dim();
    let dims = vec![2; inst.n];
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for c in 0..dim {
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        e[c] = Complex64::new(1.0, 0.0);
        for t in &inst.terms {
            let col = apply_local_matrix(&e, &dims, t.support(), t.matrix());
            for (r, v) in col.iter().enumerate() {
                out[r * dim + c] += v;
            }
        }
    }
    Ok(out)
}

/// Outcome distribution of measuring term `term` in its eigenbasis:
/// `(probability, eigenvalue)` per eigenvector.
pub fn term_energy_povm(inst: &GsconInstance, term: usize, s: &RegisteredState) -> Result<Vec<(f64, f64)>> {
    let amps = data_amplitudes(inst, s)?;
    let t = inst
        .terms
        .get(term)
        .ok_or_else(|| Error::Instance(format!("term {term} out of {}", inst.r())))?;
    Ok(povm_amplitudes(inst.n, t, amps))
}

pub(crate) fn povm_amplitudes(n: usize, t: &super::HamiltonianTerm, amps: &[Complex64]) -> Vec<(f64, f64)> {
    let dims = vec![2; n];
    let d = t.local_dim();
    t.eigenvectors()
        .iter()
        .zip(t.eigenvalues())
        .map(|(v, &lambda)| {
            let mut proj = vec![Complex64::new(0.0, 0.0); d * d];
            for r in 0..d {
                for c in 0..d {
                    proj[r * d + c] = v[r] * v[c].conj();
                }
            }
            let p = norm_sqr_amplitudes(&apply_local_matrix(amps, &dims, t.support(), &proj));
            (p, lambda)
        })
        .collect()
}

/// Pick a term uniformly, measure it in its eigenbasis, reject with
/// probability equal to the observed eigenvalue. The rejection
/// probability is `<s|H|s>/R`.
pub fn energy_test_reject_prob(inst: &GsconInstance, s: &RegisteredState) -> Result<f64> {
    let amps = data_amplitudes(inst, s)?;
    reject_prob_amplitudes(inst, amps)
}

pub(crate) fn reject_prob_amplitudes(inst: &GsconInstance, amps: &[Complex64]) -> Result<f64> {
    if inst.terms.is_empty() {
        return Err(Error::Instance("energy test needs at least one term".into()));
    }
    let total: f64 = inst
        .terms
        .iter()
        .flat_map(|t| povm_amplitudes(inst.n, t, amps))
        .map(|(p, lambda)| p * lambda.clamp(0.0, 1.0))
        .sum();
    Ok((total / inst.r() as f64).clamp(0.0, 1.0))
}

/// One run of the energy test. Returns `true` when it accepts.
pub fn energy_test_sample<R: Rng + ?Sized>(
    inst: &GsconInstance,
    s: &RegisteredState,
    rng: &mut R,
) -> Result<bool> {
    let amps = data_amplitudes(inst, s)?;
    if inst.terms.is_empty() {
        return Err(Error::Instance("energy test needs at least one term".into()));
    }
    let term = &inst.terms[rng.random_range(0..inst.r())];
    let outcomes = povm_amplitudes(inst.n, term, amps);
    let probs: Vec<f64> = outcomes.iter().map(|o| o.0).collect();
    let lambda = outcomes[sample_index(&probs, rng)].1.clamp(0.0, 1.0);
    Ok(rng.random::<f64>() >= lambda)
}
