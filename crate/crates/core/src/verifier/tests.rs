use num_complex::Complex64;

use super::*;
use crate::instance::{builtin_instance, builtin_instances, Fixture};
use crate::ledger::{derive_parameters, swap_failure};
use crate::rng::stream_rng;
use crate::state::{RegisterShape, RegisteredState, ZERO};
use crate::witness::{forge_adversary, honest_tuple, AdversaryKind, AdversarySpec, WitnessU};

fn honest(f: &Fixture) -> WitnessTuple {
    honest_tuple(&f.instance, f.certificate().unwrap()).unwrap()
}

#[test]
fn honest_witnesses_pass_all_but_the_end_test() {
    for f in builtin_instances().iter().filter(|f| f.is_yes()) {
        let inst = &f.instance;
        let t = honest(f);
        for id in [1, 2, 3, 4, 5, 6, 8] {
            let tree = compile_test(id, inst, &t).unwrap();
            assert!(tree.reject_probability() <= 1e-9, "{} test {id}: {}", f.name(), tree.reject_probability());
            assert!((tree.accept_probability() - 1.0).abs() <= 1e-9);
        }
        let end = compile_test(7, inst, &t).unwrap().reject_probability();
        let bound = crate::exact::to_f64(&swap_failure(inst.eta3.exact())) / inst.label_dim() as f64;
        assert!(end <= bound * (1.0 + 1e-9), "{}: {end} > {bound}", f.name());
    }
}

#[test]
fn honest_sequence_projection_succeeds_with_one_over_2mg() {
    for f in builtin_instances().iter().filter(|f| f.is_yes()) {
        let inst = &f.instance;
        let t = honest(f);
        let blocks = suite::sequence_blocks(inst, &t).unwrap();
        let p_diag: f64 = (0..inst.label_dim()).map(|i| crate::state::norm_sqr_amplitudes(&blocks[i][i])).sum();
        let want = 1.0 / (inst.label_dim() * inst.g()) as f64;
        assert!((p_diag - want).abs() < 1e-15, "{}", f.name());
    }
}

#[test]
fn uniform_gate_register_on_one_label() {
    let f = builtin_instance("blockade-3q").unwrap();
    let inst = &f.instance;
    let g = inst.g();
    let mut table = vec![vec![ZERO; g]; inst.label_dim()];
    table[0] = vec![Complex64::new((1.0 / g as f64).sqrt(), 0.0); g];
    let mut t = honest(&f);
    t.u = WitnessU::from_table(&table).unwrap();
    let tree = test3_uniform(inst, &t).unwrap();
    assert!((tree.accept_probability() - 1.0 / inst.label_dim() as f64).abs() < 1e-12);
}

#[test]
fn orthogonal_copies_accept_half_the_time() {
    let f = builtin_instance("trivial-1q").unwrap();
    let inst = &f.instance;
    let mut t = honest(&f);
    let mut table = t.u.table();
    for row in table.iter_mut() {
        row.rotate_right(1);
    }
    t.u_prime = WitnessU::from_table(&table).unwrap();
    assert!((test1_swap_u(inst, &t).unwrap().accept_probability() - 0.5).abs() < 1e-15);
    let s_perp = crate::witness::WitnessS::from_labels(1, &[vec![ZERO, Complex64::new(0.5f64.sqrt(), 0.0)], vec![ZERO, Complex64::new(0.5f64.sqrt(), 0.0)]]).unwrap();
    t.s_prime = s_perp;
    assert!((test4_swap_s(inst, &t).unwrap().accept_probability() - 0.5).abs() < 1e-15);
}

#[test]
fn out_of_set_gate_values_are_rejected_on_collisions() {
    let f = builtin_instance("trivial-1q").unwrap();
    let inst = &f.instance;
    let g = inst.g();
    let q = 0.3f64;
    // Gate register of dimension G + 1; label 0 puts weight q on the extra value.
    let mut table = vec![vec![ZERO; g + 1]; 2];
    table[0][0] = Complex64::new((0.5 * (1.0 - q)).sqrt(), 0.0);
    table[0][g] = Complex64::new((0.5 * q).sqrt(), 0.0);
    table[1][0] = Complex64::new(0.5f64.sqrt(), 0.0);
    let u = WitnessU::from_table(&table).unwrap();
    let mut t = honest(&f);
    t.u = u.clone();
    t.u_prime = u;
    let reject = test2_unique(inst, &t).unwrap().reject_probability();
    // Both copies at label 0 (probability 1/4), then any pair that hits the
    // extra value: 1 - (1-q)^2.
    let want = 0.25 * (1.0 - (1.0 - q) * (1.0 - q));
    assert!((reject - want).abs() < 1e-15);
    assert!(reject >= q * 0.25);
}

#[test]
fn targeted_tests_see_each_adversary() {
    let f = builtin_instance("blockade-3q").unwrap();
    let inst = &f.instance;
    let m2 = inst.label_dim() as f64;
    let cases = [
        (AdversaryKind::WrongStart, 0.2, 6, swap_failure_f64(0.2) / m2),
        (AdversaryKind::InconsistentS, 1e-4, 4, 1e-4 / 2.0 - 1e-8 / 8.0),
        (AdversaryKind::HighEnergy, 0.25, 8, 0.25 / (m2 * inst.r() as f64)),
    ];
    for (kind, x, test, want) in cases {
        let t = forge_adversary(inst, f.certificate(), &AdversarySpec::new(kind, x)).unwrap().tuple;
        let r = compile_test(test, inst, &t).unwrap().reject_probability();
        assert!((r - want).abs() <= 1e-12, "{kind}: {r} vs {want}");
    }
}

fn swap_failure_f64(w: f64) -> f64 {
    w * w / 2.0 - w.powi(4) / 8.0
}

#[test]
fn sampled_runs_track_exact_probabilities() {
    let f = builtin_instance("superposed-2q").unwrap();
    let inst = &f.instance;
    let t = forge_adversary(inst, f.certificate(), &AdversarySpec::new(AdversaryKind::SmearedGate, 0.3)).unwrap().tuple;
    for id in 1..=8 {
        let tree = compile_test(id, inst, &t).unwrap();
        let mut rng = stream_rng(11, id as u64);
        let n = 20_000;
        let acc = (0..n).filter(|_| tree.sample(&mut rng)).count() as f64 / n as f64;
        let p = tree.accept_probability();
        let sigma = (p * (1.0 - p) / n as f64).sqrt().max(1e-12);
        assert!((acc - p).abs() <= 4.0 * sigma + 1e-12, "test {id}: {acc} vs {p}");
    }
}

#[test]
fn protocol_total_matches_weighted_sum() {
    let f = builtin_instance("blockade-3q").unwrap();
    let inst = &f.instance;
    let ledger = derive_parameters(inst).unwrap();
    let proto = Protocol::new(inst, &ledger, &honest(&f)).unwrap();
    let p = ledger.p_values();
    let direct: f64 = (1..=8).map(|i| p[i - 1] * compile_test(i, inst, &honest(&f)).unwrap().accept_probability()).sum();
    assert!((proto.exact_accept() - direct).abs() < 1e-12);
    assert!(proto.exact_reject() <= ledger.one_minus_c_prime_lower.exact().clone() * crate::exact::ratio(1_000_000_001, 1_000_000_000));
    let round = proto.round(5, 0);
    assert_eq!(round.trace[0].step, "test");
    assert_eq!(round, proto.round(5, 0));
}

#[test]
fn product_test_on_product_inputs() {
    let q = |a: f64, b: f64| RegisteredState::normalized(RegisterShape::qubits(1).unwrap(), vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)]).unwrap();
    let a = ProductWitness::new(vec![q(1.0, 0.0), q(1.0, 1.0), q(0.3, 0.7), q(1.0, 0.0)]);
    let b = ProductWitness::new(vec![q(1.0, 0.0), q(1.0, 0.0), q(0.7, 0.3), q(0.0, 1.0)]);
    let overlaps = [1.0, 0.5, (0.42f64 / 0.58).powi(2), 0.0];
    let want: f64 = overlaps.iter().map(|o| (1.0 + o) / 2.0).product();
    assert!((product_test_exact(&a, &b).unwrap() - want).abs() < 1e-15);
    assert_eq!(product_test_exact(&a, &a).unwrap(), 1.0);
    assert!(product_test_exact(&a, &b).unwrap() <= 0.5);
    let out = product_test(&a, &a, 1, 2).unwrap();
    assert_eq!(out.verdict, Some(Verdict::Accept));
    assert_eq!(out.trace.len(), 4);
    let short = ProductWitness::new(vec![q(1.0, 0.0)]);
    assert!(product_test_exact(&a, &short).is_err());
}

#[test]
fn outcome_lines() {
    let f = builtin_instance("trivial-1q").unwrap();
    let t = honest(&f);
    let e = run_exact(4, &f.instance, &t).unwrap();
    assert_eq!(e.to_line(), "test=4 mode=exact accept=1.0 reject=0.0 verdict=NA seed=NA trial=NA trace=-");
    let s = run_sampled(6, &f.instance, &t, 3, 9).unwrap();
    assert!(s.to_line().starts_with("test=6 mode=sampled accept=NA reject=NA verdict=accept seed=3 trial=9 trace=label:"));
    assert!(run_exact(9, &f.instance, &t).is_err());
}
