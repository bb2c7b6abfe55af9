//! Pairwise SWAP tests between two copies of a product-form composite proof.
//!
//! Only product inputs are modelled: each copy is a list of separate parts,
//! so each SWAP test acts on its own pair and the tests are independent.

use rand::Rng;

use super::{Mode, TestId, TestOutcome, TraceEvent, Verdict, PRODUCT_CHANNEL};
use crate::error::{Error, Result};
use crate::rng::trial_rng;
use crate::state::{swap_reject_amplitudes, RegisteredState};
use crate::witness::WitnessTuple;

#[derive(Clone, Debug, PartialEq)]
pub struct ProductWitness {
    pub parts: Vec<RegisteredState>,
}

impl ProductWitness {
    pub fn new(parts: Vec<RegisteredState>) -> Self {
        Self { parts }
    }
}

impl From<&WitnessTuple> for ProductWitness {
    fn from(t: &WitnessTuple) -> Self {
        Self::new(vec![t.u.state().clone(), t.u_prime.state().clone(), t.s.state().clone(), t.s_prime.state().clone()])
    }
}

fn part_rejects(a: &ProductWitness, b: &ProductWitness) -> Result<Vec<f64>> {
    if a.parts.len() != b.parts.len() {
        return Err(Error::ShapeMismatch(format!("{} parts against {}", a.parts.len(), b.parts.len())));
    }
    a.parts
        .iter()
        .zip(&b.parts)
        .map(|(x, y)| {
            x.require_same_shape(y)?;
            Ok(swap_reject_amplitudes(x.amplitudes(), y.amplitudes()))
        })
        .collect()
}

/// `prod_k (1 + |<a_k|b_k>|^2)/2`.
pub fn product_test_exact(a: &ProductWitness, b: &ProductWitness) -> Result<f64> {
    Ok(part_rejects(a, b)?.iter().map(|r| 1.0 - r).product())
}

/// One sampled run; all SWAP tests are performed, and the run accepts iff
/// every one of them does.
pub fn product_test(a: &ProductWitness, b: &ProductWitness, seed: u64, trial: u64) -> Result<TestOutcome> {
    let rejects = part_rejects(a, b)?;
    let mut rng = trial_rng(seed, PRODUCT_CHANNEL, trial);
    let mut trace = Vec::with_capacity(rejects.len());
    let mut all = true;
    for (k, r) in rejects.iter().enumerate() {
        let ok = rng.random::<f64>() >= *r;
        all &= ok;
        trace.push(TraceEvent { step: format!("swap part {k}"), value: usize::from(ok) });
    }
    let accept: f64 = rejects.iter().map(|r| 1.0 - r).product();
    Ok(TestOutcome {
        test: TestId::Product,
        mode: Mode::Sampled,
        accept_probability: Some(accept),
        reject_probability: Some(1.0 - accept),
        verdict: Some(Verdict::from(all)),
        seed: Some(seed),
        trial: Some(trial),
        trace,
    })
}
