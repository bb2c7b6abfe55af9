//! Branch trees: the measurement structure of one verifier test.
//!
//! Exact mode sums leaf probabilities; sampled mode walks one path. Reject
//! mass is summed from reject leaves directly, never as `1 - accept`.

use rand::Rng;

use super::TraceEvent;

#[derive(Clone, Debug)]
pub enum Node {
    Accept(&'static str),
    Reject(&'static str),
    /// Terminal Bernoulli step (a SWAP test or an energy outcome).
    Coin { step: &'static str, reject: f64 },
    Branch { step: &'static str, outcomes: Vec<Outcome> },
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub value: usize,
    pub probability: f64,
    pub node: Node,
}

impl Node {
    pub fn branch(step: &'static str, outcomes: Vec<Outcome>) -> Self {
        Node::Branch { step, outcomes: outcomes.into_iter().filter(|o| o.probability > 0.0).collect() }
    }

    pub fn coin(step: &'static str, reject: f64) -> Self {
        Node::Coin { step, reject: reject.clamp(0.0, 1.0) }
    }

    /// `(accept, reject)` probability mass below this node.
    pub fn mass(&self) -> (f64, f64) {
        match self {
            Node::Accept(_) => (1.0, 0.0),
            Node::Reject(_) => (0.0, 1.0),
            Node::Coin { reject, .. } => (1.0 - reject, *reject),
            Node::Branch { outcomes, .. } => outcomes.iter().fold((0.0, 0.0), |(a, r), o| {
                let (ca, cr) = o.node.mass();
                (a + o.probability * ca, r + o.probability * cr)
            }),
        }
    }
}

pub fn outcome(value: usize, probability: f64, node: Node) -> Outcome {
    Outcome { value, probability, node }
}

/// A compiled test, ready for exact evaluation or repeated sampling.
#[derive(Clone, Debug)]
pub struct BranchTree {
    root: Node,
    accept: f64,
    reject: f64,
}

impl BranchTree {
    pub fn new(root: Node) -> Self {
        let (accept, reject) = root.mass();
        Self { root, accept: accept.clamp(0.0, 1.0), reject: reject.clamp(0.0, 1.0) }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn accept_probability(&self) -> f64 {
        self.accept
    }

    pub fn reject_probability(&self) -> f64 {
        self.reject
    }

    /// One run. Returns `true` when it accepts.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        walk(&self.root, rng, &mut None)
    }

    pub fn sample_traced<R: Rng + ?Sized>(&self, rng: &mut R) -> (bool, Vec<TraceEvent>) {
        let mut trace = Some(Vec::new());
        let accept = walk(&self.root, rng, &mut trace);
        (accept, trace.unwrap_or_default())
    }
}

fn note(trace: &mut Option<Vec<TraceEvent>>, step: &'static str, value: usize) {
    if let Some(t) = trace {
        t.push(TraceEvent { step: step.into(), value });
    }
}

fn walk<R: Rng + ?Sized>(node: &Node, rng: &mut R, trace: &mut Option<Vec<TraceEvent>>) -> bool {
    match node {
        Node::Accept(reason) => {
            note(trace, reason, 1);
            true
        }
        Node::Reject(reason) => {
            note(trace, reason, 0);
            false
        }
        Node::Coin { step, reject } => {
            let accept = rng.random::<f64>() >= *reject;
            note(trace, step, usize::from(accept));
            accept
        }
        Node::Branch { step, outcomes } => {
            let total: f64 = outcomes.iter().map(|o| o.probability).sum();
            let u = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = outcomes.len() - 1;
            for (i, o) in outcomes.iter().enumerate() {
                acc += o.probability;
                if u < acc {
                    pick = i;
                    break;
                }
            }
            let o = &outcomes[pick];
            note(trace, step, o.value);
            walk(&o.node, rng, trace)
        }
    }
}
