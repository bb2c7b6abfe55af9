//! The verifier: eight tests on the four unentangled proofs, the randomized
//! round that picks one of them, and the product test.
//!
//! Test numbering follows the protocol, 1 to 8. Labels are 0-based, so the
//! start test looks at label 0 and the end test at label `m`.

mod product;
mod protocol;
mod suite;
mod tree;

pub use product::{product_test, product_test_exact, ProductWitness};
pub use protocol::{run_protocol_round, Protocol};
pub use suite::{
    check_tuple, compile_test, test1_swap_u, test2_unique, test3_uniform, test4_swap_s, test5_sequence,
    test6_start, test7_end, test8_low,
};
pub use tree::{outcome, BranchTree, Node, Outcome};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::instance::GsconInstance;
use crate::rng::trial_rng;
use crate::witness::WitnessTuple;

pub const TEST_NAMES: [&str; 8] = ["swap-U", "unique", "uniform", "swap-S", "sequence", "start", "end", "low"];

/// RNG channel of the protocol round; tests 1 to 8 use their own number.
pub const ROUND_CHANNEL: u16 = 10;
pub const PRODUCT_CHANNEL: u16 = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestId {
    Test(u8),
    Product,
    Round,
}

impl TestId {
    pub fn channel(self) -> u16 {
        match self {
            TestId::Test(i) => u16::from(i),
            TestId::Product => PRODUCT_CHANNEL,
            TestId::Round => ROUND_CHANNEL,
        }
    }
}

impl fmt::Display for TestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestId::Test(i) => write!(f, "{i}"),
            TestId::Product => f.write_str("PRODUCT"),
            TestId::Round => f.write_str("ROUND"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Sampled => "sampled",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

impl From<bool> for Verdict {
    fn from(accept: bool) -> Self {
        if accept {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }
}

/// A measured outcome, or a leaf (`value` 1 for accept, 0 for reject).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub step: String,
    pub value: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub test: TestId,
    pub mode: Mode,
    pub accept_probability: Option<f64>,
    pub reject_probability: Option<f64>,
    pub verdict: Option<Verdict>,
    pub seed: Option<u64>,
    pub trial: Option<u64>,
    pub trace: Vec<TraceEvent>,
}

impl TestOutcome {
    pub fn exact(test: TestId, tree: &BranchTree) -> Self {
        Self {
            test,
            mode: Mode::Exact,
            accept_probability: Some(tree.accept_probability()),
            reject_probability: Some(tree.reject_probability()),
            verdict: None,
            seed: None,
            trial: None,
            trace: Vec::new(),
        }
    }

    /// `test=5 mode=sampled accept=NA reject=NA verdict=accept seed=7 trial=0 trace=label:0>swap-start:1`
    pub fn to_line(&self) -> String {
        let opt = |v: Option<f64>| v.map_or("NA".to_string(), |x| format!("{x:?}"));
        let verdict = self.verdict.map_or("NA", |v| match v {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        });
        let trace = if self.trace.is_empty() {
            "-".to_string()
        } else {
            self.trace.iter().map(|e| format!("{}:{}", e.step.replace(' ', "-"), e.value)).collect::<Vec<_>>().join(">")
        };
        format!(
            "test={} mode={} accept={} reject={} verdict={verdict} seed={} trial={} trace={trace}",
            self.test,
            self.mode,
            opt(self.accept_probability),
            opt(self.reject_probability),
            self.seed.map_or("NA".into(), |s| s.to_string()),
            self.trial.map_or("NA".into(), |s| s.to_string()),
        )
    }
}

/// Exact outcome of test `id`.
pub fn run_exact(id: usize, inst: &GsconInstance, t: &WitnessTuple) -> Result<TestOutcome> {
    let tree = compile_test(id, inst, t)?;
    Ok(TestOutcome::exact(TestId::Test(id as u8), &tree))
}

/// One sampled run of test `id` on the stream `(seed, id, trial)`.
pub fn run_sampled(id: usize, inst: &GsconInstance, t: &WitnessTuple, seed: u64, trial: u64) -> Result<TestOutcome> {
    let tree = compile_test(id, inst, t)?;
    Ok(sample_outcome(TestId::Test(id as u8), &tree, seed, trial))
}

pub fn sample_outcome(test: TestId, tree: &BranchTree, seed: u64, trial: u64) -> TestOutcome {
    let mut rng = trial_rng(seed, test.channel(), trial);
    let (accept, trace) = tree.sample_traced(&mut rng);
    TestOutcome {
        test,
        mode: Mode::Sampled,
        accept_probability: None,
        reject_probability: None,
        verdict: Some(accept.into()),
        seed: Some(seed),
        trial: Some(trial),
        trace,
    }
}

#[cfg(test)]
mod tests;
