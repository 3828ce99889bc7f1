use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toda_dual_core::lax::{monodromy, reconstruct, separated_divisor, PhasePoint};
use toda_dual_core::mellinbarnes::{default_contour, WhittakerParams};
use toda_dual_core::specfun::{bessel_k, gamma, gamma_pair, inv_gamma_pair, log_gamma, measure};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn away_from_poles(z: Complex64) -> bool {
    z.re > 0.0 || (z.re - z.re.round()).abs() > 0.05 || z.im.abs() > 0.05
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn log_gamma_recurrence(re in -8.0f64..8.0, im in -8.0f64..8.0) {
        let z = c(re, im);
        prop_assume!(away_from_poles(z) && z.norm() > 0.05);
        // Γ(z + 1) = z Γ(z), compared through exp to drop the 2πi ambiguity
        let lhs = log_gamma(z + 1.0).unwrap();
        let rhs = log_gamma(z).unwrap() + z.ln();
        let d = lhs - rhs;
        prop_assert!(d.re.abs() < 1e-11 * (1.0 + lhs.norm()));
        prop_assert!((d.im / (2.0 * PI) - (d.im / (2.0 * PI)).round()).abs() < 1e-11 * (1.0 + lhs.norm()));
    }

    #[test]
    fn gamma_reflection(re in -3.0f64..3.0, im in -2.0f64..2.0) {
        let z = c(re, im);
        prop_assume!(away_from_poles(z) && away_from_poles(1.0 - z));
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = PI / (PI * z).sin();
        prop_assert!((lhs - rhs).norm() < 1e-11 * rhs.norm());
    }

    #[test]
    fn log_gamma_is_conjugation_symmetric(re in -6.0f64..6.0, im in 0.01f64..6.0) {
        let z = c(re, im);
        let a = log_gamma(z).unwrap();
        let b = log_gamma(z.conj()).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn gamma_pair_and_its_inverse(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let u = c(re, im);
        prop_assume!(away_from_poles(u) && away_from_poles(-u));
        let p = gamma_pair(u).unwrap();
        prop_assert!((p * inv_gamma_pair(u) - 1.0).norm() < 1e-11);
    }

    #[test]
    fn measure_symmetric_and_positive(l in prop::collection::vec(-2.0f64..2.0, 2..6), hbar in 0.3f64..2.0) {
        let n = l.len();
        prop_assume!((0..n).all(|i| ((i + 1)..n).all(|j| (l[i] - l[j]).abs() > 1e-3)));
        let m = measure(&l, hbar);
        prop_assert!(m > 0.0);
        let mut r = l.clone();
        r.reverse();
        prop_assert!((measure(&r, hbar) - m).abs() <= 1e-13 * m);
    }

    #[test]
    fn classical_round_trip(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ph = PhasePoint::random(n, &mut rng);
        let d = separated_divisor(&monodromy(&ph)).unwrap();
        let (q, p) = reconstruct(&d, n).unwrap();
        for i in 0..n {
            prop_assert!((q[i] - ph.q()[i]).abs() < 1e-8);
            prop_assert!((p[i] - ph.p()[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn default_contour_is_ordered_and_admissible(
        l in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..=3),
        hbar in 0.3f64..2.0,
    ) {
        let lambda: Vec<Complex64> = l.iter().map(|&(a, b)| c(a, b)).collect();
        let n = lambda.len();
        let p = WhittakerParams::new(lambda.clone(), vec![0.0; n], hbar).unwrap();
        let contour = default_contour(&p);
        prop_assert!(contour.is_admissible(&lambda));
        // stays admissible after lowering λ by up to N·iħ
        for k in 1..=n {
            let lowered: Vec<Complex64> = lambda.iter().map(|&x| x - c(0.0, k as f64 * hbar)).collect();
            prop_assert!(contour.is_admissible(&lowered));
        }
    }
}

/// `x² K'' + x K' − (x² + ν²) K = 0` by central differences.
#[test]
fn bessel_k_solves_modified_bessel_equation() {
    let h = 1e-3;
    for (nu, x) in [
        (c(0.3, 0.0), 0.7),
        (c(0.0, 1.2), 1.5),
        (c(1.5, -0.8), 3.0),
        (c(0.0, 2.0), 6.0),
    ] {
        let k = |t: f64| bessel_k(nu, t).unwrap();
        let (km, k0, kp) = (k(x - h), k(x), k(x + h));
        let d2 = (kp - 2.0 * k0 + km) / (h * h);
        let d1 = (kp - km) / (2.0 * h);
        let residual = x * x * d2 + x * d1 - (x * x + nu * nu) * k0;
        assert!(residual.norm() < 1e-5 * (1.0 + k0.norm()), "ν={nu} x={x}: {residual}");
    }
}

#[test]
fn bessel_k_half_order_closed_form() {
    for x in [0.2, 1.0, 4.0, 20.0] {
        let exact = (PI / (2.0 * x)).sqrt() * (-x).exp();
        let v = bessel_k(c(0.5, 0.0), x).unwrap();
        assert!((v.re - exact).abs() < 1e-12 * exact && v.im.abs() < 1e-12 * exact);
    }
}
