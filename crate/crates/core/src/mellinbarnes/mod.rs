//! The `SL(N)` Whittaker function as an iterated Mellin–Barnes integral over
//! a triangular array `γ_{nj}`, `1 ≤ j ≤ n ≤ N − 1`, with row `N` equal to `λ`:
//!
//! `w(λ, q) = ∫ e^{−(1/iħ) Σ_n q_n (Γ_n − Γ_{n−1})}
//!     ∏_{n<N} ∏_{j,k} B^{(γ_{nj} − γ_{n+1,k})/iħ} Γ((γ_{nj} − γ_{n+1,k})/iħ)
//!     / ∏_{n<N} ∏_{i<j} Γ(u_{ij}) Γ(−u_{ij}),  u_{ij} = (γ_{ni} − γ_{nj})/iħ`,
//!
//! where `Γ_n = Σ_j γ_{nj}` and `B` is the power base.

mod contour;
mod tensor;

pub use contour::ContourSpec;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quad;
use crate::specfun::{log_gamma, log_inv_gamma_pair};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MBError {
    #[error("quadrature is implemented for N = 2 and N = 3, got N = {0}")]
    Unsupported(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("contour violation: Γ argument {re}{im:+}i is within 1e-8 of a pole")]
    ContourViolation { re: f64, im: f64 },
    #[error("contour offsets are not admissible for these λ")]
    InadmissibleContour,
    #[error("quadrature did not converge: error estimate {estimate:e} above target {target:e}")]
    NonConvergence { estimate: f64, target: f64 },
    #[error("truncation tail {tail:e} above abs_tol {abs_tol:e}")]
    Truncation { tail: f64, abs_tol: f64 },
    #[error("non-finite integrand value")]
    NonFinite,
}

const POLE_PROXIMITY: f64 = 1e-8;

/// Base of the power prefactor `B^{(γ − γ')/iħ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerBase {
    /// `B = iħ`, principal logarithm. Yields the dual equations with the
    /// signs `(−1)^{k(N−1)}`.
    IHbar,
    /// `B = ħ`. Equals the `iħ` function at `q + iπρ/2`, `ρ_n = 2n − N − 1`.
    Hbar,
}

impl PowerBase {
    pub fn ln(self, hbar: f64) -> Complex64 {
        match self {
            PowerBase::IHbar => Complex64::new(hbar.ln(), FRAC_PI_2),
            PowerBase::Hbar => Complex64::new(hbar.ln(), 0.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PowerBase::IHbar => "ihbar",
            PowerBase::Hbar => "hbar",
        }
    }
}

impl std::str::FromStr for PowerBase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ihbar" => Ok(PowerBase::IHbar),
            "hbar" => Ok(PowerBase::Hbar),
            other => Err(format!("unknown power base '{other}' (expected ihbar or hbar)")),
        }
    }
}

/// Arguments of `w(λ, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WhittakerParams {
    pub n: usize,
    pub lambda: Vec<Complex64>,
    pub q: Vec<f64>,
    pub hbar: f64,
    pub base: PowerBase,
}

impl WhittakerParams {
    pub fn new(lambda: Vec<Complex64>, q: Vec<f64>, hbar: f64) -> Result<Self, MBError> {
        let n = lambda.len();
        if n < 2 {
            return Err(MBError::InvalidParams("N must be at least 2".into()));
        }
        if q.len() != n {
            return Err(MBError::InvalidParams(format!(
                "q has length {}, expected {n}",
                q.len()
            )));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(MBError::InvalidParams("ħ must be positive".into()));
        }
        if lambda.iter().any(|l| !l.re.is_finite() || !l.im.is_finite()) || q.iter().any(|x| !x.is_finite()) {
            return Err(MBError::InvalidParams("non-finite λ or q".into()));
        }
        Ok(WhittakerParams {
            n,
            lambda,
            q,
            hbar,
            base: PowerBase::IHbar,
        })
    }

    pub fn real(lambda: &[f64], q: &[f64], hbar: f64) -> Result<Self, MBError> {
        Self::new(
            lambda.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            q.to_vec(),
            hbar,
        )
    }

    pub fn with_base(mut self, base: PowerBase) -> Self {
        self.base = base;
        self
    }

    pub fn with_lambda(&self, lambda: Vec<Complex64>) -> Self {
        WhittakerParams { lambda, ..self.clone() }
    }

    pub fn with_q(&self, q: Vec<f64>) -> Self {
        WhittakerParams { q, ..self.clone() }
    }
}

/// Quadrature settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub truncation_radius: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

/// Tail target used to size the default truncation radius.
pub const TRUNCATION_TARGET: f64 = 1e-12;

impl QuadConfig {
    /// `rel_tol` 1e-9 (N = 2) or 1e-6 (N = 3), radius for a 1e-12 tail bound.
    pub fn default_for(params: &WhittakerParams) -> Self {
        QuadConfig {
            truncation_radius: truncation_radius(params, TRUNCATION_TARGET),
            rel_tol: if params.n <= 2 { 1e-9 } else { 1e-6 },
            abs_tol: 1e-12,
            max_subdivisions: 50,
        }
    }

    fn validate(&self) -> Result<(), MBError> {
        let ok = self.truncation_radius > 0.0 && self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_subdivisions >= 4;
        if ok {
            Ok(())
        } else {
            Err(MBError::InvalidParams(format!("invalid quadrature config {self:?}")))
        }
    }
}

/// How the abscissas were (or should be) chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum QuadPlan {
    /// Globally adaptive (N = 2) or panel doubling (N = 3).
    Adaptive,
    /// N = 2: reuse these panels.
    Panels(Vec<(f64, f64)>),
    /// N = 3: uniform panels per axis on `[−R, R]`.
    Uniform { panels: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MBResult {
    pub value: Complex64,
    pub est_error: f64,
    pub evaluations: usize,
    /// The abscissas actually used; pass back to reproduce them.
    pub plan: QuadPlan,
}

/// `δ_n = (N − n)·ħ/2 + max(0, max_j Im λ_j)`, with rows bending down to the
/// right of `max Re λ + 2ħ` (slope 1, width ħ/2).
pub fn default_contour(params: &WhittakerParams) -> ContourSpec {
    let n = params.n;
    let top = params.lambda.iter().map(|l| l.im).fold(0.0, f64::max);
    let right = params.lambda.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    ContourSpec {
        row_offsets: (1..n).map(|row| (n - row) as f64 * params.hbar / 2.0 + top).collect(),
        bend: 1.0,
        bend_width: params.hbar / 2.0,
        bend_start: right + 2.0 * params.hbar,
    }
}

/// Smallest `R` on a grid of step `ħ/2` such that the Stirling envelope
/// `(X)^p e^{−πX/2}`, `X = (R − max|Re λ|)/ħ`, `p = N(N−1)/2`, is below
/// `target`.
///
/// Each `Γ((γ − γ')/iħ)` decays like `e^{−π|Re(γ − γ')|/(2ħ)}` along the
/// rows; the envelope keeps a single such factor and one power per
/// integration variable, which bounds every direction of the tail.
pub fn truncation_radius(params: &WhittakerParams, target: f64) -> f64 {
    let p = (params.n * (params.n - 1) / 2) as f64;
    let spread = params.lambda.iter().map(|l| l.re.abs()).fold(0.0, f64::max);
    let mut x: f64 = 4.0;
    while p * x.ln() - PI * x / 2.0 > target.ln() {
        x += 0.5;
    }
    spread + params.hbar * x
}

fn check_gamma_arg(z: Complex64) -> Result<(), MBError> {
    let n = z.re.round();
    if n <= 0.0 && (z - n).norm() < POLE_PROXIMITY {
        return Err(MBError::ContourViolation { re: z.re, im: z.im });
    }
    Ok(())
}

/// `ln Γ(z)` with the pole-proximity check.
fn lgamma_checked(z: Complex64) -> Result<Complex64, MBError> {
    check_gamma_arg(z)?;
    log_gamma(z).map_err(|_| MBError::ContourViolation { re: z.re, im: z.im })
}

/// Logarithm of the full integrand at rows `gamma[0..N−1]` (row `n` has
/// `n + 1` entries, 0-based). Row `N` is `λ`.
pub fn integrand_log(gamma: &[Vec<Complex64>], params: &WhittakerParams) -> Result<Complex64, MBError> {
    let n = params.n;
    if gamma.len() != n - 1 || gamma.iter().enumerate().any(|(r, row)| row.len() != r + 1) {
        return Err(MBError::InvalidParams("γ must be triangular with N − 1 rows".into()));
    }
    let ih = Complex64::new(0.0, params.hbar);
    let ln_b = params.base.ln(params.hbar);
    let row = |r: usize| -> &[Complex64] {
        if r < n - 1 {
            &gamma[r]
        } else {
            &params.lambda
        }
    };
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prev_sum = Complex64::new(0.0, 0.0);
    for r in 0..n {
        let s: Complex64 = row(r).iter().sum();
        acc -= params.q[r] * (s - prev_sum) / ih;
        prev_sum = s;
    }
    for r in 0..n - 1 {
        for &g in row(r) {
            for &g2 in row(r + 1) {
                let u = (g - g2) / ih;
                acc += ln_b * u + lgamma_checked(u)?;
            }
        }
        let cur = row(r);
        for i in 0..cur.len() {
            for j in (i + 1)..cur.len() {
                let u = (cur[i] - cur[j]) / ih;
                acc += log_inv_gamma_pair(u).map_err(|_| MBError::ContourViolation { re: u.re, im: u.im })?;
            }
        }
    }
    Ok(acc)
}

/// `w(λ, q)` by quadrature over the real parts of `γ`, each on `[−R, R]`.
pub fn whittaker(params: &WhittakerParams, contour: &ContourSpec, quad: &QuadConfig) -> Result<MBResult, MBError> {
    whittaker_with_plan(params, contour, quad, &QuadPlan::Adaptive)
}

/// As [`whittaker`], optionally reusing the abscissas of an earlier run.
pub fn whittaker_with_plan(
    params: &WhittakerParams,
    contour: &ContourSpec,
    quad: &QuadConfig,
    plan: &QuadPlan,
) -> Result<MBResult, MBError> {
    quad.validate()?;
    if contour.row_offsets.len() != params.n - 1 {
        return Err(MBError::InvalidParams(format!(
            "contour has {} rows, expected {}",
            contour.row_offsets.len(),
            params.n - 1
        )));
    }
    if !contour.is_admissible(&params.lambda) {
        return Err(MBError::InadmissibleContour);
    }
    match params.n {
        2 => whittaker_n2(params, contour, quad, plan),
        3 => tensor::whittaker_n3(params, contour, quad, plan),
        n => Err(MBError::Unsupported(n)),
    }
}

fn whittaker_n2(
    params: &WhittakerParams,
    contour: &ContourSpec,
    quad: &QuadConfig,
    plan: &QuadPlan,
) -> Result<MBResult, MBError> {
    let ih = Complex64::new(0.0, params.hbar);
    let ln_b = params.base.ln(params.hbar);
    let (l1, l2) = (params.lambda[0], params.lambda[1]);
    let (q1, q2) = (params.q[0], params.q[1]);
    let mut failure: Option<MBError> = None;
    let mut density = |x: f64| -> Complex64 {
        let g = contour.point(0, x);
        let u1 = (g - l1) / ih;
        let u2 = (g - l2) / ih;
        let lg = lgamma_checked(u1).and_then(|a| Ok(a + lgamma_checked(u2)?));
        match lg {
            Ok(lg) => {
                let e = -(q1 * g + q2 * (l1 + l2 - g)) / ih + ln_b * (u1 + u2) + lg;
                e.exp() * contour.jacobian(x)
            }
            Err(err) => {
                failure.get_or_insert(err);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let r = quad.truncation_radius;
    let out = match plan {
        QuadPlan::Panels(p) => quad::integrate_fixed(&mut density, p),
        _ => quad::integrate(&mut density, -r, r, quad.rel_tol, quad.abs_tol, quad.max_subdivisions),
    };
    let tail = (density(-r).norm() + density(r).norm()) * 2.0 * params.hbar / PI;
    if let Some(err) = failure {
        return Err(err);
    }
    if !(out.value.re.is_finite() && out.value.im.is_finite()) {
        return Err(MBError::NonFinite);
    }
    if tail > quad.abs_tol.max(quad.rel_tol * out.value.norm()) {
        return Err(MBError::Truncation {
            tail,
            abs_tol: quad.abs_tol,
        });
    }
    let target = quad.abs_tol.max(quad.rel_tol * out.value.norm());
    if !out.converged && matches!(plan, QuadPlan::Adaptive) {
        return Err(MBError::NonConvergence {
            estimate: out.error,
            target,
        });
    }
    Ok(MBResult {
        value: out.value,
        est_error: out.error + tail,
        evaluations: out.evaluations + 2,
        plan: QuadPlan::Panels(out.panels),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn default_contour_instances() {
        let p2 = WhittakerParams::real(&[0.6, -0.6], &[0.2, -0.3], 1.0).unwrap();
        assert_eq!(default_contour(&p2).row_offsets, vec![0.5]);
        let p3 = WhittakerParams::real(&[0.6, -0.6, 0.1], &[0.2, -0.3, 0.0], 1.0).unwrap();
        assert_eq!(default_contour(&p3).row_offsets, vec![1.0, 0.5]);
        let shifted = p3.with_lambda(vec![c(0.6, -1.0), c(-0.6, -1.0), c(0.1, 0.0)]);
        assert!(default_contour(&p3).is_admissible(&shifted.lambda));
    }

    #[test]
    fn truncation_radius_behaviour() {
        let p = WhittakerParams::real(&[0.5, -0.5], &[0.3, -0.2], 1.0).unwrap();
        let r = truncation_radius(&p, 1e-12);
        assert!((20.0..=60.0).contains(&r), "R = {r}");
        assert!(truncation_radius(&p, 5e-13) >= r);
        let p2 = WhittakerParams::real(&[0.5, -0.5], &[0.3, -0.2], 2.0).unwrap();
        let r2 = truncation_radius(&p2, 1e-12);
        assert!(((r2 - 0.5) / (r - 0.5) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn n2_integrand_matches_direct_formula() {
        let p = WhittakerParams::real(&[0.6, -0.6], &[0.2, -0.3], 1.0).unwrap();
        let g = c(0.4, 0.5);
        let ih = c(0.0, 1.0);
        let ln_b = c(0.0, FRAC_PI_2);
        let mut direct = -(0.2 * g + -0.3 * (c(0.0, 0.0) - g)) / ih;
        for l in [0.6, -0.6] {
            let u = (g - l) / ih;
            direct += ln_b * u + log_gamma(u).unwrap();
        }
        let v = integrand_log(&[vec![g]], &p).unwrap();
        assert!((v.exp() - direct.exp()).norm() < 1e-13 * direct.exp().norm());
    }

    #[test]
    fn integrand_symmetric_within_rows() {
        let p = WhittakerParams::real(&[0.6, -0.6, 0.2], &[0.2, -0.3, 0.1], 1.0).unwrap();
        let a = integrand_log(&[vec![c(0.1, 1.0)], vec![c(0.3, 0.5), c(-0.8, 0.5)]], &p).unwrap();
        let b = integrand_log(&[vec![c(0.1, 1.0)], vec![c(-0.8, 0.5), c(0.3, 0.5)]], &p).unwrap();
        assert!((a.exp() - b.exp()).norm() < 1e-13 * a.exp().norm());
    }

    #[test]
    fn pole_proximity_is_a_contour_violation() {
        let p = WhittakerParams::real(&[0.6, -0.6], &[0.0, 0.0], 1.0).unwrap();
        let err = integrand_log(&[vec![c(0.6, 0.0)]], &p).unwrap_err();
        assert!(matches!(err, MBError::ContourViolation { .. }));
    }

    #[test]
    fn n2_matches_bessel_closed_form() {
        // base ħ: w = 4πħ e^{iσ₁(q₁+q₂)/(2ħ)} K_ν(2e^{(q₁−q₂)/2}/ħ), ν = (λ₁−λ₂)/(iħ)
        for (lam, q, hbar) in [([0.6, -0.6], [0.2, -0.3], 1.0), ([0.5, -0.2], [-0.3, 0.4], 0.7)] {
            let p = WhittakerParams::real(&lam, &q, hbar)
                .unwrap()
                .with_base(PowerBase::Hbar);
            let w = whittaker(&p, &default_contour(&p), &QuadConfig::default_for(&p)).unwrap();
            let nu = c(lam[0] - lam[1], 0.0) / c(0.0, hbar);
            let k = bessel_k(nu, 2.0 * ((q[0] - q[1]) / 2.0f64).exp() / hbar).unwrap();
            let phase = c(0.0, (lam[0] + lam[1]) * (q[0] + q[1]) / (2.0 * hbar)).exp();
            let expected = 4.0 * PI * hbar * phase * k;
            assert!(
                (w.value - expected).norm() < 1e-9 * expected.norm(),
                "{} vs {expected}",
                w.value
            );
        }
    }

    #[test]
    fn n2_weyl_symmetry() {
        let p = WhittakerParams::real(&[0.7, -0.25], &[0.1, -0.2], 1.0).unwrap();
        let q = QuadConfig::default_for(&p);
        let a = whittaker(&p, &default_contour(&p), &q).unwrap();
        let swapped = p.with_lambda(vec![p.lambda[1], p.lambda[0]]);
        let b = whittaker(&swapped, &default_contour(&swapped), &q).unwrap();
        assert!((a.value - b.value).norm() < 1e-8 * a.value.norm());
    }

    #[test]
    fn unsupported_rank() {
        let p = WhittakerParams::real(&[0.1, 0.2, 0.3, 0.4], &[0.0; 4], 1.0).unwrap();
        let r = whittaker(&p, &default_contour(&p), &QuadConfig::default_for(&p));
        assert_eq!(r, Err(MBError::Unsupported(4)));
    }
}
