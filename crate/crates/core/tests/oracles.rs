//! Independent reference computations: a doubled-register SWAP circuit,
//! dense embedded Hamiltonians and gates, a brute-force joint state for the
//! sequence test, and ledger values computed separately at 200 digits.

use ffgscon::exact::{parse_exact, relative_difference, Exact};
use ffgscon::instance::{builtin_instance, builtin_instances, energy_test_reject_prob, GsconInstance};
use ffgscon::ledger::derive_parameters;
use ffgscon::rng::stream_rng;
use ffgscon::state::{swap_test_reject_prob, RegisterShape, RegisteredState};
use ffgscon::verifier::compile_test;
use ffgscon::witness::{forge_adversary, honest_tuple, AdversaryKind, AdversarySpec, WitnessTuple};

mod common;
use common::*;

#[test]
fn swap_matches_the_doubled_register_circuit() {
    let mut rng = stream_rng(2024, 1);
    for k in 0..100 {
        let dim = [2, 3, 4, 6, 8][k % 5];
        let a = random_state(&mut rng, dim);
        let b = if k % 7 == 0 { a.clone() } else { random_state(&mut rng, dim) };
        let shape = RegisterShape::new(vec![dim]).unwrap();
        let sa = RegisteredState::new(shape.clone(), a.clone()).unwrap();
        let sb = RegisteredState::new(shape, b.clone()).unwrap();
        let got = swap_test_reject_prob(&sa, &sb).unwrap();
        assert!((got - swap_circuit(&a, &b)).abs() <= 1e-12, "pair {k}");
    }
}

#[test]
fn energy_test_matches_the_expectation_value() {
    let mut rng = stream_rng(7, 3);
    for f in builtin_instances() {
        let inst = &f.instance;
        let dim = inst.data_dim();
        let h = dense_h(inst);
        let shape = RegisterShape::qubits(inst.n).unwrap();
        for _ in 0..10 {
            let a = random_state(&mut rng, dim);
            let want = dot(&a, &mul(&h, &a)).re / inst.r() as f64;
            let s = RegisteredState::new(shape.clone(), a).unwrap();
            assert!((energy_test_reject_prob(inst, &s).unwrap() - want).abs() <= 1e-12, "{}", f.name());
        }
        let psi = inst.prepare_state(ffgscon::instance::Endpoint::Psi).unwrap();
        assert!(energy_test_reject_prob(inst, &psi).unwrap().abs() <= 1e-12);
    }
}

/// Rejection of the sequence test from the full joint state of `|U>` and `|S>`.
fn sequence_reject_brute_force(inst: &GsconInstance, t: &WitnessTuple) -> f64 {
    let l = inst.label_dim();
    let g = inst.g();
    let d = inst.data_dim();
    let gates: Vec<Vec<C>> = (0..g)
        .map(|k| {
            let gate = inst.gate_set.gate(k);
            embed(inst.n, gate.targets(), gate.matrix())
        })
        .collect();
    let u = t.u.table();
    let s = t.s.labels();
    let gd = t.u.gate_dim();
    // Amplitudes after the controlled gate. Gate values outside the set are
    // orthogonal to the uniform state, so they are left at zero.
    let idx = |i: usize, k: usize, j: usize, x: usize| ((i * gd + k) * l + j) * d + x;
    let mut joint = vec![O; l * gd * l * d];
    for i in 0..l {
        for k in 0..g {
            for j in 0..l {
                let moved = mul(&gates[k], &s[j]);
                for x in 0..d {
                    joint[idx(i, k, j, x)] = u[i][k] * moved[x];
                }
            }
        }
    }
    // Uniform projection on the gate register, then keep equal labels.
    let w = (1.0 / g as f64).sqrt();
    let mut t_prime = vec![O; l * d];
    for i in 0..l {
        for x in 0..d {
            let amp: C = (0..g).map(|k| joint[idx(i, k, i, x)] * w).sum();
            t_prime[((i + 1) % l) * d + x] = amp;
        }
    }
    let p_diag: f64 = t_prime.iter().map(|a| a.norm_sqr()).sum();
    if p_diag == 0.0 {
        return 0.0;
    }
    let norm = p_diag.sqrt();
    let t_prime: Vec<C> = t_prime.iter().map(|a| a / norm).collect();
    p_diag * swap_circuit(&t_prime, t.s_prime.state().amplitudes())
}

#[test]
fn sequence_test_matches_the_joint_state() {
    let cases = [
        None,
        Some(AdversarySpec::new(AdversaryKind::BrokenSequence, 0.1)),
        Some(AdversarySpec::new(AdversaryKind::SmearedGate, 0.3)),
        Some(AdversarySpec::new(AdversaryKind::NonuniformLabels, 0.05)),
        Some(AdversarySpec::new(AdversaryKind::WrongEnd, 0.7)),
    ];
    for name in ["trivial-1q", "blockade-3q", "superposed-2q"] {
        let f = builtin_instance(name).unwrap();
        let inst = &f.instance;
        for spec in &cases {
            let t = match spec {
                None => honest_tuple(inst, f.certificate().unwrap()).unwrap(),
                Some(s) => forge_adversary(inst, f.certificate(), s).unwrap().tuple,
            };
            let got = compile_test(5, inst, &t).unwrap().reject_probability();
            let want = sequence_reject_brute_force(inst, &t);
            assert!((got - want).abs() <= 1e-12, "{name} {spec:?}: {got} vs {want}");
        }
    }
}

struct Frozen {
    fixture: &'static str,
    h: &'static str,
    mu: &'static str,
    t: &'static str,
    delta: &'static str,
    r: [&'static str; 8],
    one_minus_s: &'static str,
    one_minus_c: &'static str,
    gap_lower: &'static str,
    gap: &'static str,
}

const FROZEN: [Frozen; 3] = [
    Frozen {
        fixture: "trivial-1q",
        h: "0.117851130197757920733474060350808173214139322948079006098057",
        mu: "0.000262200138496512062036757816764269497590993406849049591075284",
        t: "49338962179.2902768494710019472582657946536164388788539372316",
        delta: "2.60183643722778819098462894152881677499011987754436145938314e-34",
        r: [
            "8.46194105760773774937016554242610716390834073664403361372947e-69",
            "1.05467821871611757861815028307540150242429684471306656519902e-44",
            "2.05395055316929923274641239673822909555065927894667196552483e-23",
            "0.0000000171872281568975266539822872510833985672351617760784614353629",
            "0.000000000537100879903047707936946476596356205226098805502451919855091",
            "0.00173064860822576710981867865659518882991129874846842257796371",
            "0.0325814006637765812228027693406727864624753858390727745803896",
            "0.0625",
        ],
        one_minus_s: "8.46194105760773774937015875320403053913570948465455632657286e-69",
        one_minus_c: "3.99466943701115870467371597295132203993991541306837703488556e-69",
        gap_lower: "8.29315649902502193441663139837298412744151325054158187339559e-71",
        gap: "4.4672716205965790446964427802527084991957940715861792916873e-69",
    },
    Frozen {
        fixture: "blockade-3q",
        h: "0.08333333333333333333333333333333333333333",
        mu: "0.00007233796296296296296296296296296296296296",
        t: "3889327767552.0",
        delta: "1.475447932613908879410680210681663233271e-41",
        r: [
            "2.721183252318322246878418879183057190502e-83",
            "2.84518563514366160772605318266242509067e-54",
            "1.377240147334192308936645801887111588928e-28",
            "0.0000000001635244026759687928669410150891632373114",
            "0.000000000001703379194541341592363968907178783721994",
            "0.0004332742573302469135802469135802469135802",
            "0.01347964356138545953360768175582990397805",
            "0.015625",
        ],
        one_minus_s: "2.721183252318322246878418879157031337562e-83",
        one_minus_c: "1.552494201605261935806026631839068052674e-83",
        gap_lower: "1.460312006213062373480095597261909984878e-85",
        gap: "1.168689050713060311072392247317963284889e-83",
    },
    Frozen {
        fixture: "superposed-2q",
        h: "0.1054092553389459777332964514810906177907",
        mu: "0.000126323109857176845975832730393842657865",
        t: "1275385504125.85522967555407813605982936",
        delta: "4.184302667684528069608731383089482938376e-40",
        r: [
            "2.188548601848982268008616427947262564398e-80",
            "2.460610529609497073961143692375444140733e-52",
            "1.280783752137598252400051728581506247592e-27",
            "0.0000000004986727526246365633660876253654520663244",
            "0.000000000005194507839839964201730079430890125690879",
            "0.0006923390592801581636781805656045470668134",
            "0.01135294667669262814227505044147603220626",
            "0.025",
        ],
        one_minus_s: "2.188548601848982268008616427752605794258e-80",
        one_minus_c: "9.542294073654940934133624577571507723207e-81",
        gap_lower: "2.044265521366577463788137381932678767268e-82",
        gap: "1.234319194483488174595253969995455021937e-80",
    },
];

#[test]
fn ledger_matches_frozen_high_precision_values() {
    for fz in &FROZEN {
        let f = builtin_instance(fz.fixture).unwrap();
        let l = derive_parameters(&f.instance).unwrap();
        // The blockade-3q and superposed-2q references carry 40 digits.
        let tol = if fz.fixture == "trivial-1q" { 1e-55 } else { 1e-38 };
        let check = |name: &str, got: &Exact, want: &str| {
            let w = parse_exact(want).unwrap();
            let rel = relative_difference(got, &w);
            assert!(rel <= tol, "{} {name}: relative difference {rel:e}", fz.fixture);
        };
        check("h", l.h.exact(), fz.h);
        check("mu", l.mu.exact(), fz.mu);
        check("t", l.t.exact(), fz.t);
        check("delta", l.delta_small.exact(), fz.delta);
        for (i, want) in fz.r.iter().enumerate() {
            check(&format!("r{}", i + 1), l.r[i].value.exact(), want);
        }
        check("1 - s'", l.one_minus_s_prime.exact(), fz.one_minus_s);
        check("1 - c'", l.one_minus_c_prime_lower.exact(), fz.one_minus_c);
        check("gap lower", l.gap_lower.exact(), fz.gap_lower);
        check("gap", l.gap.exact(), fz.gap);
    }
}
