//! Mixing in the product test to trade four unentangled proofs for two.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, ratio, Exact};
use crate::instance::Real;

#[derive(Clone, Debug)]
pub struct Qma2Tuning {
    /// Probability of running the product test instead of the original protocol.
    pub p_product: Real,
    /// `p + (1 - p) c'`.
    pub c_double_prime: Real,
    /// `1 - p (11/512) (1 - s')^2`.
    pub s_double_prime_upper: Real,
    /// `c'' - s''_upper`.
    pub gap2_lower: Real,
    /// `(c' - s')^2 / 50`.
    pub target: Real,
}

pub fn qma2_tuning(c_prime: &Exact, s_prime: &Exact) -> Result<Qma2Tuning> {
    if c_prime <= s_prime || *s_prime < Exact::zero() || *c_prime > Exact::one() {
        return Err(Error::Constraint(format!(
            "need 0 <= s' < c' <= 1, got c' = {}, s' = {}",
            exact::to_sci_string(c_prime, 12),
            exact::to_sci_string(s_prime, 12)
        )));
    }
    let one = Exact::one();
    let d = c_prime - s_prime;
    let target = &d * &d * ratio(1, 50);
    let miss = &one - s_prime;
    let product_reject = ratio(11, 512) * &miss * &miss;
    let p = (&one - c_prime + &target) / (&one - c_prime + &product_reject);
    let c2 = &p + (&one - &p) * c_prime;
    let s2 = &one - &p * &product_reject;
    Ok(Qma2Tuning {
        gap2_lower: Real::new(&c2 - &s2),
        p_product: Real::new(p),
        c_double_prime: Real::new(c2),
        s_double_prime_upper: Real::new(s2),
        target: Real::new(target),
    })
}

/// [`qma2_tuning`] on doubles, converted exactly.
pub fn qma2_tuning_f64(c_prime: f64, s_prime: f64) -> Result<Qma2Tuning> {
    if !c_prime.is_finite() || !s_prime.is_finite() {
        return Err(Error::Constraint("c' and s' must be finite".into()));
    }
    qma2_tuning(&exact::from_f64(c_prime), &exact::from_f64(s_prime))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_completeness_gives_a_fixed_mix() {
        for eps in [ratio(1, 10), ratio(1, 1000), ratio(1, 1_000_000_007)] {
            let t = qma2_tuning(&Exact::one(), &(Exact::one() - eps)).unwrap();
            assert_eq!(t.p_product.exact(), &ratio(512, 550));
        }
    }

    #[test]
    fn tiny_gap_still_meets_the_target() {
        let t = qma2_tuning_f64(0.5, 0.5 - 1e-6).unwrap();
        assert!(t.gap2_lower.value() >= 2e-14 * (1.0 - 1e-9));
        assert!(t.gap2_lower.exact() >= t.target.exact());
    }

    #[test]
    fn rejects_inverted_pairs() {
        assert!(qma2_tuning_f64(0.4, 0.5).is_err());
        assert!(qma2_tuning_f64(0.5, 0.5).is_err());
        assert!(qma2_tuning_f64(1.5, 0.5).is_err());
    }
}
