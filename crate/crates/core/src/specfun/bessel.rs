//! Modified Bessel function `K_ν(x)` by contour quadrature.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::SpecFunError;
use crate::quad;

const REL_TOL: f64 = 1e-13;
const MAX_SUBDIVISIONS: usize = 400;
/// Log-magnitude drop at which the integrand tail is cut.
const TAIL_DROP: f64 = 46.0;
const MAX_HALF_WIDTH: f64 = 250.0;

/// `K_ν(x) = ½ ∫_ℝ exp(−x cosh t − ν t) dt` for real `x > 0`.
///
/// For `Im ν ≠ 0` the integration line is moved to pass through the saddle
/// `sinh t = −ν/x`, with `|Im t|` capped below `π/2` so the ends still decay.
/// This removes most of the cancellation between the integrand and the
/// `e^{−π|Im ν|/2}` size of the result.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn bessel_k(nu: Complex64, x: f64) -> Result<Complex64, SpecFunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecFunError::Domain("bessel_k requires x > 0"));
    }
    if !(nu.re.is_finite() && nu.im.is_finite()) {
        return Err(SpecFunError::NonFinite);
    }
    let b = nu.im;
    let cap = FRAC_PI_2 * (1.0 - 1.0 / (1.0 + b.abs()));
    let beta = (-nu / x).asinh().im.clamp(-cap, cap);
    let shift = Complex64::new(0.0, beta);
    let log_mag = |s: f64| -x * beta.cos() * s.cosh() - nu.re * s + b * beta;

    // Integrand peak and cut-off points on each side.
    let peak = {
        // maximizer of −x cosβ cosh s − ν_r s: sinh s = −ν_r/(x cos β)
        let s0 = (-nu.re / (x * beta.cos())).asinh();
        log_mag(s0)
    };
    if !peak.is_finite() || peak > 700.0 {
        return Err(SpecFunError::Overflow);
    }
    let edge = |dir: f64| -> Result<f64, SpecFunError> {
        let mut s = 0.0;
        while log_mag(dir * s) > peak - TAIL_DROP {
            s += 0.25;
            if s > MAX_HALF_WIDTH {
                return Err(SpecFunError::Overflow);
            }
        }
        Ok(dir * s)
    };
    let lo = edge(-1.0)?;
    let hi = edge(1.0)?;
    let f = |s: f64| {
        let t = Complex64::new(s, 0.0) + shift;
        (-x * t.cosh() - nu * t).exp()
    };
    let out = quad::integrate(f, lo, hi, REL_TOL, 0.0, MAX_SUBDIVISIONS);
    if !out.value.re.is_finite() || !out.value.im.is_finite() {
        return Err(SpecFunError::Overflow);
    }
    Ok(0.5 * out.value)
}
