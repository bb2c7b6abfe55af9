use num_complex::Complex64;
use rand::Rng;

use super::{inner_amplitudes, RegisteredState};
use crate::error::{Error, Result};

/// Rejection probability of the SWAP test on two normalized states,
/// `(1 - |<a|b>|^2) / 2`.
pub fn swap_test_reject_prob(a: &RegisteredState, b: &RegisteredState) -> Result<f64> {
    a.require_same_shape(b)?;
    Ok(swap_reject_amplitudes(a.amplitudes(), b.amplitudes()))
}

/// [`swap_test_reject_prob`] on raw amplitude slices of equal length.
///
/// Evaluated as `w^2/2 - w^4/8` with `w` the phase-optimized distance, which
/// equals `(1 - |<a|b>|^2)/2` for unit vectors but keeps full relative
/// precision when the states are nearly identical.
pub fn swap_reject_amplitudes(a: &[Complex64], b: &[Complex64]) -> f64 {
    let w2 = aligned_distance_sqr(a, b);
    (w2 / 2.0 - w2 * w2 / 8.0).clamp(0.0, 0.5)
}

/// `min_w || |a> - e^{iw}|b> ||`.
pub fn phase_optimized_distance(a: &RegisteredState, b: &RegisteredState) -> Result<f64> {
    a.require_same_shape(b)?;
    Ok(aligned_distance_sqr(a.amplitudes(), b.amplitudes()).sqrt())
}

/// Squared distance after rotating `b` onto the phase of `<a|b>`. For
/// orthogonal inputs the phase is taken as 0.
pub(crate) fn aligned_distance_sqr(a: &[Complex64], b: &[Complex64]) -> f64 {
    let overlap = inner_amplitudes(a, b);
    let norm = overlap.norm();
    let phase = if norm > 0.0 { overlap.conj() / norm } else { Complex64::new(1.0, 0.0) };
    a.iter().zip(b).map(|(x, y)| (x - phase * y).norm_sqr()).sum()
}

/// One SWAP test. Returns `true` when it accepts.
pub fn swap_test_sample<R: Rng + ?Sized>(
    a: &RegisteredState,
    b: &RegisteredState,
    rng: &mut R,
) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::ShapeMismatch(format!("dimensions {} and {}", a.dim(), b.dim())));
    }
    let reject = swap_test_reject_prob(a, b)?;
    Ok(rng.random::<f64>() >= reject)
}
