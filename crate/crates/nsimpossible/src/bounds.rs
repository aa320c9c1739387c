//! Closed-form attack distances and universal lower bounds.
//!
//! The XOR bit admits an exact formula: the attack distance over n boxes
//! is the probability that an odd number of boxes err,
//!
//!   d_XOR(n, ε) = Σ_i C(n, n−2i−1)·(1−ε)^{n−2i−1}·ε^{2i+1},
//!
//! which grows toward ½ as boxes accumulate. For an arbitrary
//! nonconstant bit no such formula exists, but a universal floor does:
//! every total function on n boxes is attacked to distance at least
//!
//!   (−1 + √(1 + 64ε²)) / (32ε),
//!
//! independent of n and of the function. The companion crossing point
//! doubles it and is the fixed point of δ = 2ε(1 − 4δ²), the largest δ
//! that the guessing-probability bound 1 − 2ε(1 − 4δ²) still forces.

use crate::error::ImpossibleError;

/// Binomial coefficients stay finite in f64 up to this row of Pascal's
/// triangle.
const XOR_TERM_CAP: usize = 1029;

/// The exact attack distance on the XOR of all n output bits: the odd
/// tail of the per-box error binomial.
///
/// # Panics
/// On n = 0, n > 1029, or ε outside [0, ½].
pub fn xor_attack_distance_closed_form(n: usize, eps: f64) -> f64 {
    assert!(n >= 1, "the XOR of zero boxes is not a bit");
    assert!(
        n <= XOR_TERM_CAP,
        "binomial terms overflow f64 past n = {XOR_TERM_CAP}"
    );
    assert!(
        (0.0..=0.5).contains(&eps),
        "error rate must lie in [0, ½], got {eps}"
    );
    // C(n, k) for k = n, n−1, …: walk down the row once, picking the
    // terms with an odd error count k = 2i + 1
    let mut coeff = vec![0.0f64; n + 1];
    coeff[0] = 1.0;
    for row in 1..=n {
        for k in (1..=row).rev() {
            coeff[k] += coeff[k - 1];
        }
    }
    let mut total = 0.0;
    let mut k = 1;
    while k <= n {
        total += coeff[k] * (1.0 - eps).powi((n - k) as i32) * eps.powi(k as i32);
        k += 2;
    }
    total
}

/// The function-independent floor on the attack distance,
/// (−1 + √(1 + 64ε²)) / (32ε), evaluated in the cancellation-free form
/// 2ε / (1 + √(1 + 64ε²)). Returns the ε → 0 limit 0 at ε = 0.
pub fn general_lower_bound(eps: f64) -> Result<f64, ImpossibleError> {
    check_error_rate(eps)?;
    Ok(2.0 * eps / (1.0 + (1.0 + 64.0 * eps * eps).sqrt()))
}

/// The fixed point δ* of δ = 2ε(1 − 4δ²): the crossing of the distance
/// with the guessing-probability curve, equal to twice
/// [`general_lower_bound`] and approaching 2ε for small ε.
pub fn general_lower_bound_crossing(eps: f64) -> Result<f64, ImpossibleError> {
    check_error_rate(eps)?;
    Ok(4.0 * eps / (1.0 + (1.0 + 64.0 * eps * eps).sqrt()))
}

fn check_error_rate(eps: f64) -> Result<(), ImpossibleError> {
    if !(0.0..=0.5).contains(&eps) {
        return Err(ImpossibleError::OutOfRegime(format!(
            "error rate must lie in [0, ½], got {eps}"
        )));
    }
    Ok(())
}
