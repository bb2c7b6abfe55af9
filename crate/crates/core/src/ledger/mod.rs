//! Derived protocol constants, carried as exact rationals.
//!
//! Every quantity is a [`Real`]: the exact value plus its nearest double.
//! The one irrational input is the energy branch of `h`, which goes through
//! [`exact::sqrt_approx`]; everything downstream is exact arithmetic on that
//! approximation.

mod estimate;
mod qma2;
mod report;

pub use estimate::{gap_order_estimate, GapEstimate, GAP_KAPPA};
pub use qma2::{qma2_tuning, qma2_tuning_f64, Qma2Tuning};
pub use report::ledger_report;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, int, ratio, Exact};
use crate::instance::{GsconInstance, Real};

/// Which side of the minimum fixed `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HBranch {
    /// `h = (eta4 - eta3)/4`
    PromiseGap,
    /// `h = sqrt(eta2/R)/6`
    Energy,
}

/// One rejection threshold, evaluated from its defining expression and from
/// an independent closed form.
#[derive(Clone, Debug)]
pub struct Threshold {
    pub value: Real,
    pub closed_form: Real,
    pub formula: &'static str,
    pub closed_formula: &'static str,
}

impl Threshold {
    fn new(value: Exact, closed: Exact, formula: &'static str, closed_formula: &'static str) -> Self {
        Self { value: Real::new(value), closed_form: Real::new(closed), formula, closed_formula }
    }

    pub fn relative_gap(&self) -> f64 {
        exact::relative_difference(self.value.exact(), self.closed_form.exact())
    }
}

#[derive(Clone, Debug)]
pub struct ParameterLedger {
    pub m: usize,
    pub g: usize,
    pub r_terms: usize,
    pub eta2: Real,
    pub eta3: Real,
    pub eta4: Real,
    pub delta_gap: Real,
    pub h: Real,
    pub h_branch: HBranch,
    pub mu: Real,
    pub t: Real,
    pub z: Real,
    pub c: Real,
    pub x: Real,
    pub delta_small: Real,
    /// `r_1 ... r_8`.
    pub r: Vec<Threshold>,
    /// `p_1 ... p_8`.
    pub p: Vec<Real>,
    /// `1 / sum_j r_j^-1`, equal to every `p_i r_i`.
    pub one_minus_s_prime: Real,
    pub s_prime: Real,
    pub one_minus_c_prime_lower: Real,
    pub c_prime_lower: Real,
    pub gamma_lower: Real,
    /// `p_7 gamma_lower`.
    pub gap_lower: Real,
    /// `c'_lower - s'`.
    pub gap: Real,
    pub notes: Vec<String>,
}

/// `w^2/2 - w^4/8`, the SWAP rejection at phase-optimized distance `w`.
pub fn swap_failure(w: &Exact) -> Exact {
    let w2 = w * w;
    &w2 / int(2) - &w2 * &w2 / int(8)
}

fn uint(v: usize) -> Exact {
    int(i64::try_from(v).expect("small integer"))
}

pub fn derive_parameters(inst: &GsconInstance) -> Result<ParameterLedger> {
    if inst.m == 0 || inst.g() == 0 || inst.r() == 0 {
        return Err(Error::Constraint("m, G and R must all be at least 1".into()));
    }
    let (m, g, rr) = (uint(inst.m), uint(inst.g()), uint(inst.r()));
    let (eta2, eta3, eta4) = (inst.eta2.exact().clone(), inst.eta3.exact().clone(), inst.eta4.exact().clone());
    if !eta2.is_positive() || eta4 <= eta3 || eta3.is_negative() {
        return Err(Error::Constraint("need eta2 > 0 and eta4 > eta3 >= 0".into()));
    }
    let mut notes = Vec::new();

    // Compare the squares so the branch choice is exact.
    let gap_side = (&eta4 - &eta3) / int(4);
    let energy_sq = &eta2 / (int(36) * &rr);
    let (h, h_branch) = if &gap_side * &gap_side <= energy_sq {
        (gap_side, HBranch::PromiseGap)
    } else {
        notes.push(format!("h = sqrt(eta2/R)/6 evaluated to {} digits", exact::SQRT_DIGITS));
        (exact::sqrt_approx(&energy_sq), HBranch::Energy)
    };
    let a = &eta3 + &h;
    let mu = &h * &h / (int(144) * &m * &a);
    let t = int(848) * &g * &m * &m / (&mu * &mu);
    let z = &mu * &mu / exact::pow(&m, 3);
    let c = Exact::one() / (&g * &m * &m * &t * &t);
    let x = Exact::one() / (&m * &m * &t);
    let delta = &c * &x / (int(2) * &g);

    let half_over_m = Exact::one() / (int(2) * &m);
    let weight = &half_over_m - int(6) * &mu;
    let m_pow = |e: u32| exact::pow(&m, e);
    let g_pow = |e: u32| exact::pow(&g, e);
    let t_pow = |e: u32| exact::pow(&t, e);

    let r = vec![
        Threshold::new(
            &delta * &delta / int(8),
            Exact::one() / (int(32) * g_pow(4) * m_pow(8) * t_pow(6)),
            "delta^2/8",
            "1/(32 G^4 m^8 t^6)",
        ),
        Threshold::new(
            &c * &x * &x / int(4),
            Exact::one() / (int(4) * &g * m_pow(6) * t_pow(4)),
            "c x^2/4",
            "1/(4 G m^6 t^4)",
        ),
        Threshold::new(
            Exact::one() / (int(5) * &g * m_pow(4) * t_pow(2)),
            exact::pow(&mu, 4) / (int(5 * 848 * 848) * g_pow(3) * m_pow(8)),
            "1/(5 G m^4 t^2)",
            "mu^4/(5 848^2 G^3 m^8)",
        ),
        Threshold::new(&z / int(4), &mu * &mu / (int(4) * m_pow(3)), "z/4", "mu^2/(4 m^3)"),
        Threshold::new(
            Exact::one() / (int(8) * &m * &g) * (&z / int(4)),
            &mu * &mu / (int(32) * &g * m_pow(4)),
            "(1/(8 m G)) z/4",
            "mu^2/(32 G m^4)",
        ),
        Threshold::new(
            &weight * &h * &h / int(4),
            &h * &h / (int(8) * &m) - ratio(3, 2) * &mu * &h * &h,
            "(1/(2m) - 6 mu) h^2/4",
            "h^2/(8m) - 3 mu h^2/2",
        ),
        Threshold::new(
            &weight * swap_failure(&a),
            (Exact::one() - int(12) * &m * &mu) / (int(16) * &m) * &a * &a * (int(4) - &a * &a),
            "(1/(2m) - 6 mu) F(eta3 + h)",
            "(1 - 12 m mu) a^2 (4 - a^2)/(16 m), a = eta3 + h",
        ),
        Threshold::new(
            &eta2 / (int(8) * &rr * &m),
            (&eta2 / &rr) * (Exact::one() / (int(8) * &m)),
            "eta2/(8 R m)",
            "(eta2/R)(1/(8m))",
        ),
    ];

    let inv_sum: Exact = r.iter().map(|th| Exact::one() / th.value.exact()).fold(Exact::zero(), |s, v| s + v);
    let p: Vec<Real> = r.iter().map(|th| Real::new(Exact::one() / (th.value.exact() * &inv_sum))).collect();
    let one_minus_s = Exact::one() / &inv_sum;
    let one_minus_c = p[6].exact() * &half_over_m * swap_failure(&eta3);
    let gamma = &h * &h * &a / (int(16) * &m);
    let gap_lower = p[6].exact() * &gamma;
    let gap = &one_minus_s - &one_minus_c;

    notes.push("mu < 1/(36m) enforced; the low-energy step only needs mu < 1/(24m)".into());
    notes.push(format!(
        "test 5 joint projection success for honest witnesses is 1/(2mG) = {}, not 1/(2m)",
        exact::to_sci_string(&(Exact::one() / (int(2) * &m * &g)), 6)
    ));

    let ledger = ParameterLedger {
        m: inst.m,
        g: inst.g(),
        r_terms: inst.r(),
        eta2: Real::new(eta2),
        eta3: Real::new(eta3),
        eta4: Real::new(eta4),
        delta_gap: inst.delta.clone(),
        h: Real::new(h),
        h_branch,
        mu: Real::new(mu),
        t: Real::new(t),
        z: Real::new(z),
        c: Real::new(c),
        x: Real::new(x),
        delta_small: Real::new(delta),
        r,
        p,
        s_prime: Real::new(Exact::one() - &one_minus_s),
        one_minus_s_prime: Real::new(one_minus_s),
        c_prime_lower: Real::new(Exact::one() - &one_minus_c),
        one_minus_c_prime_lower: Real::new(one_minus_c),
        gamma_lower: Real::new(gamma),
        gap_lower: Real::new(gap_lower),
        gap: Real::new(gap),
        notes,
    };
    ledger.check_constraints()?;
    Ok(ledger)
}

impl ParameterLedger {
    /// `(name, holds)` for every enforced constraint.
    pub fn constraints(&self) -> Vec<(&'static str, bool)> {
        let m = uint(self.m);
        let mu = self.mu.exact();
        let h = self.h.exact();
        let a = self.eta3.exact() + h;
        vec![
            ("6 mu <= h", int(6) * mu <= *h),
            ("mu < 1/(36m)", *mu < Exact::one() / (int(36) * &m)),
            ("(eta3 + h)^2 <= 2", &a * &a <= int(2)),
            ("every r_i in (0, 1)", self.r.iter().all(|th| th.value.exact().is_positive() && *th.value.exact() < Exact::one())),
            ("gap lower bound > 0", self.gap_lower.exact().is_positive()),
            ("c' - s' >= p_7 gamma", self.gap.exact() >= self.gap_lower.exact()),
        ]
    }

    fn check_constraints(&self) -> Result<()> {
        match self.constraints().into_iter().find(|(_, ok)| !ok) {
            Some((name, _)) => Err(Error::Constraint(name.into())),
            None => Ok(()),
        }
    }

    pub fn r_values(&self) -> [f64; 8] {
        std::array::from_fn(|i| self.r[i].value.value())
    }

    pub fn p_values(&self) -> [f64; 8] {
        std::array::from_fn(|i| self.p[i].value())
    }

    /// Largest relative spread of `p_i r_i` around `1 - s'`.
    pub fn product_spread(&self) -> f64 {
        self.r
            .iter()
            .zip(&self.p)
            .map(|(th, p)| exact::relative_difference(&(th.value.exact() * p.exact()), self.one_minus_s_prime.exact()))
            .fold(0.0, f64::max)
    }

    /// `|sum p_i - 1|`.
    pub fn probability_defect(&self) -> f64 {
        let sum: Exact = self.p.iter().map(|p| p.exact().clone()).fold(Exact::zero(), |s, v| s + v);
        exact::to_f64(&(sum - Exact::one()).abs())
    }

    /// `1/(24m)`, the weaker bound on `mu`, for reporting.
    pub fn mu_weak_limit(&self) -> Exact {
        Exact::one() / (int(24) * uint(self.m))
    }
}
