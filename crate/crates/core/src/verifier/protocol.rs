use num_traits::Zero;
use rand::Rng;

use super::{compile_test, BranchTree, Mode, TestId, TestOutcome, TraceEvent, Verdict, ROUND_CHANNEL};
use crate::error::Result;
use crate::exact::{self, Exact};
use crate::instance::GsconInstance;
use crate::ledger::ParameterLedger;
use crate::rng::trial_rng;
use crate::witness::WitnessTuple;

/// All eight tests compiled for one witness tuple, weighted by the ledger's `p_i`.
#[derive(Clone, Debug)]
pub struct Protocol {
    trees: Vec<BranchTree>,
    p: [f64; 8],
    p_exact: Vec<Exact>,
    cumulative: [f64; 8],
}

impl Protocol {
    pub fn new(inst: &GsconInstance, ledger: &ParameterLedger, t: &WitnessTuple) -> Result<Self> {
        let trees = (1..=8).map(|i| compile_test(i, inst, t)).collect::<Result<Vec<_>>>()?;
        let p = ledger.p_values();
        let mut cumulative = [0.0; 8];
        let mut acc = 0.0;
        for (c, pi) in cumulative.iter_mut().zip(p) {
            acc += pi;
            *c = acc;
        }
        Ok(Self { trees, p, p_exact: ledger.p.iter().map(|x| x.exact().clone()).collect(), cumulative })
    }

    pub fn tree(&self, id: usize) -> &BranchTree {
        &self.trees[id - 1]
    }

    pub fn probabilities(&self) -> [f64; 8] {
        self.p
    }

    /// `sum_i p_i a_i`.
    pub fn exact_accept(&self) -> f64 {
        self.trees.iter().zip(self.p).map(|(t, p)| p * t.accept_probability()).sum()
    }

    /// `sum_i p_i (1 - a_i)` in exact arithmetic, with each test's reject
    /// mass taken as the exact value of its double.
    pub fn exact_reject(&self) -> Exact {
        self.trees
            .iter()
            .zip(&self.p_exact)
            .map(|(t, p)| p * exact::from_f64(t.reject_probability()))
            .fold(Exact::zero(), |s, v| s + v)
    }

    /// Draws the test index from `p` on the rng.
    pub fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.random::<f64>() * self.cumulative[7];
        self.cumulative.iter().position(|&c| u < c).unwrap_or(7) + 1
    }

    /// One round on the stream `(seed, ROUND_CHANNEL, trial)`. Returns the
    /// chosen test and whether it accepted.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, bool) {
        let id = self.pick(rng);
        (id, self.trees[id - 1].sample(rng))
    }

    pub fn round(&self, seed: u64, trial: u64) -> TestOutcome {
        let mut rng = trial_rng(seed, ROUND_CHANNEL, trial);
        let id = self.pick(&mut rng);
        let (accept, mut trace) = self.trees[id - 1].sample_traced(&mut rng);
        trace.insert(0, TraceEvent { step: "test".into(), value: id });
        TestOutcome {
            test: TestId::Round,
            mode: Mode::Sampled,
            accept_probability: Some(self.exact_accept()),
            reject_probability: Some(exact::to_f64(&self.exact_reject())),
            verdict: Some(Verdict::from(accept)),
            seed: Some(seed),
            trial: Some(trial),
            trace,
        }
    }
}

pub fn run_protocol_round(
    t: &WitnessTuple,
    inst: &GsconInstance,
    ledger: &ParameterLedger,
    seed: u64,
    trial: u64,
) -> Result<TestOutcome> {
    Ok(Protocol::new(inst, ledger, t)?.round(seed, trial))
}
