//! Complex log-gamma and the reflection pair `Γ(u)Γ(−u)`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use super::SpecFunError;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln(2π)/2`
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;

const POLE_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `ln(1 + w)` accurate for small `|w|`.
fn ln_1p(w: Complex64) -> Complex64 {
    let u = 1.0 + w;
    if u == c(1.0, 0.0) {
        return w;
    }
    if w.norm() < 0.5 {
        u.ln() * w / (u - 1.0)
    } else {
        u.ln()
    }
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = c(LANCZOS[0], 0.0);
    for (i, &ci) in LANCZOS.iter().enumerate().skip(1) {
        x += ci / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_2PI + (z + 0.5) * t.ln() - t + x.ln()
}

/// Branch-consistent `ln sin(πz)` for `Im z ≥ 0`, after reducing `Re z` to
/// `[-1/2, 1/2]`.
fn ln_sin_pi_upper(z: Complex64) -> Complex64 {
    let n = z.re.round();
    let t = z - n;
    let e = (c(0.0, 2.0 * PI) * t).exp();
    c(-LN_2, PI / 2.0) - c(0.0, PI) * t + ln_1p(-e) - c(0.0, PI * n)
}

fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im >= 0.0 {
        ln_sin_pi_upper(z)
    } else {
        ln_sin_pi_upper(z.conj()).conj()
    }
}

/// Principal branch of `ln Γ(z)`.
///
/// Lanczos (g = 7, 9 terms) for `Re z ≥ 1/2`, reflection otherwise.
pub fn log_gamma(z: Complex64) -> Result<Complex64, SpecFunError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecFunError::NonFinite);
    }
    if z.re >= 0.5 {
        return Ok(lanczos(z));
    }
    let n = z.re.round();
    if n <= 0.0 && (z - n).norm() < POLE_TOL {
        return Err(SpecFunError::Pole { re: z.re, im: z.im });
    }
    Ok(c(PI.ln(), 0.0) - lanczos(1.0 - z) - ln_sin_pi(z))
}

/// `Γ(z)`.
pub fn gamma(z: Complex64) -> Result<Complex64, SpecFunError> {
    Ok(log_gamma(z)?.exp())
}

/// `Γ(u)Γ(−u) = −π / (u sin πu)`.
pub fn gamma_pair(u: Complex64) -> Result<Complex64, SpecFunError> {
    let n = u.re.round();
    if (u - n).norm() < POLE_TOL {
        return Err(SpecFunError::Pole { re: u.re, im: u.im });
    }
    Ok((log_gamma(u)? + log_gamma(-u)?).exp())
}

/// `1 / (Γ(u)Γ(−u)) = −u sin(πu) / π`, an entire function.
pub fn inv_gamma_pair(u: Complex64) -> Complex64 {
    -u * (u * PI).sin() / PI
}

/// `ln(1/(Γ(u)Γ(−u)))` for `u` off the integers.
pub fn log_inv_gamma_pair(u: Complex64) -> Result<Complex64, SpecFunError> {
    let n = u.re.round();
    if (u - n).norm() < POLE_TOL {
        return Err(SpecFunError::Pole { re: u.re, im: u.im });
    }
    // −u sin πu / π with a stable log of sin for large |Im u|.
    Ok((-u).ln() + ln_sin_pi(u) - PI.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference values of the principal `ln Γ`, computed with mpmath at 30 digits.
    #[allow(clippy::excessive_precision)]
    const REFERENCE: [(f64, f64, f64, f64); 11] = [
        (1.0, 0.0, 0.0, 0.0),
        (0.5, 0.0, 0.572_364_942_924_700_087_07, 0.0),
        (2.5, 3.0, -1.470_954_610_348_841_691_3, 2.822_615_638_260_799_45),
        (-3.7, 0.2, -1.636_433_092_562_456_417_2, -12.663_282_679_635_771_969),
        (-0.3, -4.1, -6.653_206_412_098_599_333_4, -0.360_666_762_701_885_844_04),
        (0.1, 25.0, -39.638_510_364_662_785_76, 54.842_043_623_010_912_591),
        (-12.25, -0.75, -21.117_518_339_716_778_199, 38.154_517_484_288_940_521),
        (7.0, -60.0, -66.703_006_177_819_022_041, -195.520_138_392_273_319_3),
        (300.0, 400.0, 1_191.276_076_810_027_006_7, 2_363.568_023_827_034_049_6),
        (-20.5, 0.001, -42.707_200_885_814_815_361, -65.970_401_108_502_767_768),
        (0.0, 1.0, -0.650_923_199_301_856_338_89, -1.872_436_647_262_429_817_1),
    ];

    #[test]
    fn matches_high_precision_reference() {
        for (re, im, vr, vi) in REFERENCE {
            let v = log_gamma(c(re, im)).unwrap();
            let tol = 1e-12 * (1.0 + c(vr, vi).norm() / 100.0);
            assert!(
                (v - c(vr, vi)).norm() < tol,
                "lnΓ({re}+{im}i) = {v}, expected {vr}+{vi}i"
            );
        }
    }

    #[test]
    fn half_integer_value() {
        let v = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((v.re - PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn poles_are_reported() {
        for z in [0.0, -1.0, -2.0, -7.0] {
            assert!(matches!(log_gamma(c(z, 0.0)), Err(SpecFunError::Pole { .. })));
        }
        assert!(matches!(gamma_pair(c(1.0, 0.0)), Err(SpecFunError::Pole { .. })));
        assert!(log_gamma(c(-1.0, 1e-6)).is_ok());
    }

    #[test]
    fn gamma_pair_on_imaginary_axis() {
        // Γ(iy)Γ(−iy) = |Γ(iy)|² = π / (y sinh πy)
        for y in [0.3, 1.0, 2.5, 7.0] {
            let v = gamma_pair(c(0.0, y)).unwrap();
            let exact = PI / (y * (PI * y).sinh());
            assert!((v.re - exact).abs() < 1e-12 * exact, "y = {y}");
            assert!(v.im.abs() < 1e-12 * exact);
        }
    }

    #[test]
    fn inverse_pair_is_reciprocal() {
        for u in [c(0.3, 0.2), c(-1.7, 2.0), c(0.0, 4.0), c(2.2, -0.1)] {
            let prod = gamma_pair(u).unwrap() * inv_gamma_pair(u);
            assert!((prod - 1.0).norm() < 1e-12, "u = {u}");
            let l = log_inv_gamma_pair(u).unwrap().exp();
            assert!((l - inv_gamma_pair(u)).norm() < 1e-12 * l.norm());
        }
        assert_eq!(inv_gamma_pair(c(0.0, 0.0)), c(0.0, 0.0));
    }
}
