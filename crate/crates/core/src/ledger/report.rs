//! Key/value text rendering of a ledger.

use std::fmt::Write;

use super::{qma2_tuning, GapEstimate, HBranch, ParameterLedger};
use crate::exact;
use crate::instance::Real;

/// Significant digits printed for exact values.
const DIGITS: u32 = 60;

fn line(out: &mut String, key: &str, v: &Real, formula: &str) {
    let row = format!("{key:<16} = {:<68} ~ {:<24e} {formula}", exact::to_sci_string(v.exact(), DIGITS), v.value());
    let _ = writeln!(out, "{}", row.trim_end());
}

pub fn ledger_report(l: &ParameterLedger, estimate: Option<&GapEstimate>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# ledger m={} G={} R={}", l.m, l.g, l.r_terms);
    line(&mut out, "eta2", &l.eta2, "");
    line(&mut out, "eta3", &l.eta3, "");
    line(&mut out, "eta4", &l.eta4, "");
    line(&mut out, "Delta", &l.delta_gap, "");
    let h_formula = match l.h_branch {
        HBranch::PromiseGap => "min{(eta4-eta3)/4, sqrt(eta2/R)/6} = (eta4-eta3)/4",
        HBranch::Energy => "min{(eta4-eta3)/4, sqrt(eta2/R)/6} = sqrt(eta2/R)/6",
    };
    line(&mut out, "h", &l.h, h_formula);
    line(&mut out, "mu", &l.mu, "h^2/(144 m (eta3+h))");
    line(&mut out, "t", &l.t, "848 G m^2/mu^2");
    line(&mut out, "z", &l.z, "mu^2/m^3");
    line(&mut out, "c", &l.c, "1/(G m^2 t^2)");
    line(&mut out, "x", &l.x, "1/(m^2 t)");
    line(&mut out, "delta", &l.delta_small, "c x/(2G)");
    for (i, th) in l.r.iter().enumerate() {
        line(&mut out, &format!("r{}", i + 1), &th.value, th.formula);
        line(&mut out, &format!("r{}_closed", i + 1), &th.closed_form, th.closed_formula);
    }
    for (i, p) in l.p.iter().enumerate() {
        line(&mut out, &format!("p{}", i + 1), p, "r_i^-1 / sum_j r_j^-1");
    }
    line(&mut out, "1-s'", &l.one_minus_s_prime, "1/sum_j r_j^-1");
    line(&mut out, "s'", &l.s_prime, "");
    line(&mut out, "1-c'_lower", &l.one_minus_c_prime_lower, "(p7/(2m)) F(eta3)");
    line(&mut out, "c'_lower", &l.c_prime_lower, "");
    line(&mut out, "gamma_lower", &l.gamma_lower, "h^2 (eta3+h)/(16m)");
    line(&mut out, "gap_lower", &l.gap_lower, "p7 gamma_lower");
    line(&mut out, "c'-s'", &l.gap, "");
    let _ = writeln!(out, "{:<16} = {:e}", "p_i r_i spread", l.product_spread());
    let _ = writeln!(out, "{:<16} = {:e}", "|sum p - 1|", l.probability_defect());
    if let Ok(q) = qma2_tuning(l.c_prime_lower.exact(), l.s_prime.exact()) {
        line(&mut out, "qma2.p", &q.p_product, "(1-c'+(c'-s')^2/50)/(1-c'+(11/512)(1-s')^2)");
        line(&mut out, "qma2.c''", &q.c_double_prime, "p + (1-p) c'");
        line(&mut out, "qma2.s''_upper", &q.s_double_prime_upper, "1 - p (11/512)(1-s')^2");
        line(&mut out, "qma2.gap", &q.gap2_lower, ">= (c'-s')^2/50");
    }
    if let Some(e) = estimate {
        line(&mut out, "gap_estimate", &e.estimate, "Delta^13 m^-32 G^-10");
        line(&mut out, "gap/estimate", &e.ratio, "");
        let _ = writeln!(out, "{:<16} = {} (kappa {:e})", "estimate holds", e.holds, super::GAP_KAPPA);
    }
    for (name, ok) in l.constraints() {
        let _ = writeln!(out, "check {name}: {}", if ok { "ok" } else { "VIOLATED" });
    }
    let _ = writeln!(out, "check mu < 1/(24m): {}", if *l.mu.exact() < l.mu_weak_limit() { "ok" } else { "VIOLATED" });
    for n in &l.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}
