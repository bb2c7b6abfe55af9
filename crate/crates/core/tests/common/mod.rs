//! Reference computations shared by the oracle and acceptance targets.
#![allow(dead_code)]

use ffgscon::rng::stream_rng;
use num_complex::Complex64;
use rand::Rng;

pub type C = Complex64;
pub const O: C = C::new(0.0, 0.0);

pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> Vec<C> {
    let v: Vec<C> = (0..dim).map(|_| C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / n).collect()
}

pub fn seeded_state(seed: u64, dim: usize) -> Vec<C> {
    random_state(&mut stream_rng(seed, 77), dim)
}

/// Probability of reading 1 on the ancilla of H . CSWAP . H acting on |0>|a>|b>.
pub fn swap_circuit(a: &[C], b: &[C]) -> f64 {
    let d = a.len();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut st = vec![O; 2 * d * d];
    for i in 0..d {
        for j in 0..d {
            st[i * d + j] = a[i] * b[j];
        }
    }
    // Hadamard on the ancilla.
    let mut s1 = vec![O; 2 * d * d];
    for k in 0..d * d {
        s1[k] = st[k] * h;
        s1[d * d + k] = st[k] * h;
    }
    // Controlled swap.
    let mut s2 = s1.clone();
    for i in 0..d {
        for j in 0..d {
            s2[d * d + i * d + j] = s1[d * d + j * d + i];
        }
    }
    (0..d * d).map(|k| ((s2[k] - s2[d * d + k]) * h).norm_sqr()).sum()
}

fn bit(x: usize, q: usize, n: usize) -> usize {
    (x >> (n - 1 - q)) & 1
}

/// Embeds a local matrix on `support` into the full `2^n` space.
pub fn embed(n: usize, support: &[usize], local: &[C]) -> Vec<C> {
    let dim = 1 << n;
    let ld = 1 << support.len();
    let loc = |x: usize| support.iter().fold(0, |acc, &q| 2 * acc + bit(x, q, n));
    let mut out = vec![O; dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            let same_rest = (0..n).filter(|q| !support.contains(q)).all(|q| bit(r, q, n) == bit(c, q, n));
            if same_rest {
                out[r * dim + c] = local[loc(r) * ld + loc(c)];
            }
        }
    }
    out
}

pub fn dense_h(inst: &ffgscon::instance::GsconInstance) -> Vec<C> {
    let dim = inst.data_dim();
    let mut h = vec![O; dim * dim];
    for t in &inst.terms {
        for (acc, v) in h.iter_mut().zip(embed(inst.n, t.support(), t.matrix())) {
            *acc += v;
        }
    }
    h
}

pub fn mul(m: &[C], v: &[C]) -> Vec<C> {
    let d = v.len();
    (0..d).map(|r| (0..d).map(|c| m[r * d + c] * v[c]).sum()).collect()
}

pub fn dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
