//! The eight tests, each compiled to a [`BranchTree`].

use num_complex::Complex64;

use super::tree::{outcome, BranchTree, Node};
use crate::error::{Error, Result};
use crate::instance::{energy::povm_amplitudes, Endpoint, GsconInstance};
use crate::state::{norm_sqr_amplitudes, swap_reject_amplitudes, uniform_vector, ZERO};
use crate::witness::{WitnessS, WitnessTuple};

pub fn check_tuple(inst: &GsconInstance, t: &WitnessTuple) -> Result<()> {
    let l = inst.label_dim();
    let bad = |what: String| Err(Error::ShapeMismatch(what));
    if t.u.label_dim() != l || t.u_prime.label_dim() != l || t.s.label_dim() != l || t.s_prime.label_dim() != l {
        return bad(format!("every witness needs a label register of dimension 2m = {l}"));
    }
    if t.u.gate_dim() < inst.g() || t.u_prime.gate_dim() != t.u.gate_dim() {
        return bad(format!(
            "gate registers of dimension {} and {} for G = {}",
            t.u.gate_dim(),
            t.u_prime.gate_dim(),
            inst.g()
        ));
    }
    if t.s.num_qubits() != inst.n || t.s_prime.num_qubits() != inst.n {
        return bad(format!("state witnesses need {} data qubits", inst.n));
    }
    Ok(())
}

pub fn test1_swap_u(inst: &GsconInstance, t: &WitnessTuple) -> Result<BranchTree> {
    check_tuple(inst, t)?;
    let reject = swap_reject_amplitudes(t.u.state().amplitudes(), t.u_prime.state().amplitudes());
    Ok(BranchTree::new(Node::coin("swap U U'", reject)))
}

pub fn test2_unique(inst: &GsconInstance, t: &WitnessTuple) -> Result<BranchTree> {
    check_tuple(inst, t)?;
    let l = inst.label_dim();
    let d = t.u.gate_dim();
    let g = inst.g();
    let (ju, jv) = (t.u.joint_probabilities(), t.u_prime.joint_probabilities());
    let (lu, lv) = (t.u.label_probabilities(), t.u_prime.label_probabilities());
    let mut pairs = Vec::with_capacity(l * l);
    for k in 0..l {
        for m in 0..l {
            let p = lu[k] * lv[m];
            let node = if k != m || p == 0.0 {
                Node::Accept("labels differ")
            } else {
                let mut gates = Vec::with_capacity(d * d);
                for a in 0..d {
                    for b in 0..d {
                        let q = ju[k][a] / lu[k] * (jv[k][b] / lv[k]);
                        let leaf = if a == b && a < g {
                            Node::Accept("gates match")
                        } else if a == b {
                            Node::Reject("gate outside the set")
                        } else {
                            Node::Reject("gates differ")
                        };
                        gates.push(outcome(a * d + b, q, leaf));
                    }
                }
                Node::branch("gate pair", gates)
            };
            pairs.push(outcome(k * l + m, p, node));
        }
    }
    Ok(BranchTree::new(Node::branch("label pair", pairs)))
}

pub fn test3_uniform(inst: &GsconInstance, t: &WitnessTuple) -> Result<BranchTree> {
    check_tuple(inst, t)?;
    let l = inst.label_dim();
    let gbar = t.u.state().project_onto(1, &uniform_vector(t.u.gate_dim(), inst.g()))?;
    let success = match gbar.state {
        Some(post) => {
            let labels = post.project_onto(0, &uniform_vector(l, l))?;
            Node::branch(
                "label register uniform",
                vec![
                    outcome(1, labels.probability, Node::Accept("labels uniform")),
                    outcome(0, labels.complement, Node::Reject("labels not uniform")),
                ],
            )
        }
        None => Node::Accept("gate projection negligible"),
    };
    Ok(BranchTree::new(Node::branch(
        "gate register uniform",
        vec![
            outcome(0, gbar.complement, Node::Accept("gate register not uniform")),
            outcome(1, gbar.probability, success),
        ],
    )))
}

pub fn test4_swap_s(inst: &GsconInstance, t: &WitnessTuple) -> Result<BranchTree> {
    check_tuple(inst, t)?;
    let reject = swap_reject_amplitudes(t.s.state().amplitudes(), t.s_prime.state().amplitudes());
    Ok(BranchTree::new(Node::coin("swap S S'", reject)))
}

/// Weighted, gate-projected data blocks
/// `A_ij = G^-1/2 sum_{g<G} u_ig V_g s_j` for label `i` of `|U>` and `j` of `|S>`.
pub(crate) fn sequence_blocks(inst: &GsconInstance, t: &WitnessTuple) -> Result<Vec<Vec<Vec<Complex64>>>> {
    let l = inst.label_dim();
    let g = inst.g();
    let amp = Complex64::new((1.0 / g as f64).sqrt(), 0.0);
    let moved: Vec<Vec<Vec<Complex64>>> = (0..l)
        .map(|j| (0..g).map(|k| inst.gate_set.gate(k).apply_to_data(t.s.data(j), inst.n)).collect())
        .collect::<Result<_>>()?;
    Ok((0..l)
        .map(|i| {
            let row = t.u.row(i);
            (0..l)
                .map(|j| {
                    let mut a = vec![ZERO; inst.data_dim()];
                    for (k, v) in moved[j].iter().enumerate() {
                        let w = row[k] * amp;
                        if w != ZERO {
                            a.iter_mut().zip(v).for_each(|(x, y)| *x += w * y);
                        }
                    }
                    a
                })
                .collect()
        })
        .collect())
}

pub fn test5_sequence(inst: &GsconInstance, t: &WitnessTuple) -> Result<BranchTree> {
    check_tuple(inst, t)?;
    let l = inst.label_dim();
    let blocks = sequence_blocks(inst, t)?;
    let p_gate: f64 = blocks.iter().flatten().map(|a| norm_sqr_amplitudes(a)).sum();
    let p_diag: f64 = (0..l).map(|i| norm_sqr_amplitudes(&blocks[i][i])).sum();
    let matched = if p_diag > 0.0 {
        // Uncompute the second label copy and shift: label i lands on i+1.
        let dim = inst.data_dim();
        let scale = Complex64::new(1.0 / p_diag.sqrt(), 0.0);
        let mut shifted = vec![ZERO; l * dim];
        for (i, row) in blocks.iter().enumerate() {
            let to = (i + 1) % l;
            for (x, y) in shifted[to * dim..(to + 1) * dim].iter_mut().zip(&row[i]) {
                *x = y * scale;
            }
        }
        Node::coin("swap T' S'", swap_reject_amplitudes(&shifted, t.s_prime.state().amplitudes()))
    } else {
        Node::Accept("labels never match")
    };
    let label_match = if p_gate > 0.0 {
        let q = (p_diag / p_gate).min(1.0);
        Node::branch(
            "labels equal",
            vec![outcome(1, q, matched), outcome(0, 1.0 - q, Node::Accept("labels not equal"))],
        )
    } else {
        Node::Accept("gate projection negligible")
    };
    Ok(BranchTree::new(Node::branch(
        "gate register uniform",
        vec![
            outcome(1, p_gate.min(1.0), label_match),
            outcome(0, (1.0 - p_gate).max(0.0), Node::Accept("gate register not uniform")),
        ],
    )))
}

fn endpoint_test(
    inst: &GsconInstance,
    t: &WitnessTuple,
    label: usize,
    which: Endpoint,
    step: &'static str,
) -> Result<BranchTree> {
    check_tuple(inst, t)?;
    let target = inst.prepare_state(which)?;
    let outcomes = label_outcomes(&t.s, |i, state| {
        if i != label {
            return Ok(Node::Accept("other label"));
        }
        Ok(Node::coin(step, swap_reject_amplitudes(state, target.amplitudes())))
    })?;
    Ok(BranchTree::new(Node::branch("label", outcomes)))
}

fn label_outcomes(
    s: &WitnessS,
    mut node: impl FnMut(usize, &[Complex64]) -> Result<Node>,
) -> Result<Vec<super::tree::Outcome>> {
    (0..s.label_dim())
        .filter_map(|i| s.label_state(i).map(|st| (i, st)))
        .map(|(i, st)| Ok(outcome(i, norm_sqr_amplitudes(s.data(i)), node(i, st.amplitudes())?)))
        .collect()
}

pub fn test6_start(inst: &GsconInstance, t: &WitnessTuple) -> Result<BranchTree> {
    endpoint_test(inst, t, 0, Endpoint::Psi, "swap start")
}

pub fn test7_end(inst: &GsconInstance, t: &WitnessTuple) -> Result<BranchTree> {
    endpoint_test(inst, t, inst.m, Endpoint::Phi, "swap end")
}

pub fn test8_low(inst: &GsconInstance, t: &WitnessTuple) -> Result<BranchTree> {
    check_tuple(inst, t)?;
    if inst.terms.is_empty() {
        return Err(Error::Instance("energy test needs at least one term".into()));
    }
    let r = inst.r() as f64;
    let outcomes = label_outcomes(&t.s, |_, state| {
        let terms = inst
            .terms
            .iter()
            .enumerate()
            .map(|(k, term)| {
                let eig = povm_amplitudes(inst.n, term, state)
                    .into_iter()
                    .enumerate()
                    .map(|(a, (p, lambda))| outcome(a, p, Node::coin("energy", lambda)))
                    .collect();
                outcome(k, 1.0 / r, Node::branch("eigenvector", eig))
            })
            .collect();
        Ok(Node::branch("term", terms))
    })?;
    Ok(BranchTree::new(Node::branch("label", outcomes)))
}

/// Compiles test `id` (1 to 8).
pub fn compile_test(id: usize, inst: &GsconInstance, t: &WitnessTuple) -> Result<BranchTree> {
    match id {
        1 => test1_swap_u(inst, t),
        2 => test2_unique(inst, t),
        3 => test3_uniform(inst, t),
        4 => test4_swap_s(inst, t),
        5 => test5_sequence(inst, t),
        6 => test6_start(inst, t),
        7 => test7_end(inst, t),
        8 => test8_low(inst, t),
        _ => Err(Error::Config(format!("no test {id}; tests are numbered 1 to 8"))),
    }
}
