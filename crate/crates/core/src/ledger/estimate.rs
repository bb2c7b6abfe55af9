//! Constant-free order estimate of the completeness-soundness gap.

use crate::exact::{self, int, Exact};
use crate::instance::{GsconInstance, Real};

use super::ParameterLedger;

/// Reporting constant: over the built-in fixtures `gap_lower / estimate`
/// ranges from about `3e-64` to `8e-60`, so `1e-65` sits below all of them.
/// The estimate drops every constant factor, hence the tiny value.
pub const GAP_KAPPA: f64 = 1e-65;

#[derive(Clone, Debug)]
pub struct GapEstimate {
    /// `Delta^13 m^-32 G^-10`.
    pub estimate: Real,
    pub gap_lower: Real,
    /// `gap_lower / estimate`.
    pub ratio: Real,
    /// `gap_lower >= GAP_KAPPA * estimate`.
    pub holds: bool,
}

pub fn order_estimate(delta: &Exact, m: usize, g: usize) -> Exact {
    let m = int(m as i64);
    let g = int(g as i64);
    exact::pow(delta, 13) / (exact::pow(&m, 32) * exact::pow(&g, 10))
}

pub fn gap_order_estimate(inst: &GsconInstance, ledger: &ParameterLedger) -> GapEstimate {
    let estimate = order_estimate(inst.delta.exact(), inst.m, inst.g());
    let gap = ledger.gap_lower.exact().clone();
    let ratio = &gap / &estimate;
    let holds = gap >= exact::from_f64(GAP_KAPPA) * &estimate;
    GapEstimate { estimate: Real::new(estimate), gap_lower: Real::new(gap), ratio: Real::new(ratio), holds }
}
