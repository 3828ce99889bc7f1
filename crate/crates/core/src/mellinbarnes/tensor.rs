//! `N = 3` on a tensor grid of uniform G7–K15 panels.
//!
//! With `γ₁₁ = a` and `γ₂₁, γ₂₂ = b₁, b₂` the integrand factorizes as
//! `C · E₁(a) G(a, b₁) G(a, b₂) F₂(b₁) F₂(b₂) P(b₁, b₂)` with
//! `G(a, b) = Γ((a − b)/iħ)` and `P` the inverse gamma pair. The sum over `a`
//! is a Gram-type product that is symmetric in `(b₁, b₂)`, so the cost is
//! `M³/2` for `M` nodes per axis.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{check_gamma_arg, lgamma_checked, ContourSpec, MBError, MBResult, QuadConfig, QuadPlan, WhittakerParams};
use crate::quad::{gk15_nodes, CompensatedSum};
use crate::specfun::inv_gamma_pair;

/// Doublings of the panel count allowed before giving up.
const MAX_REFINEMENTS: usize = 2;

/// Starting panel density. The nearest Γ poles sit `ħ/2` off the contour, so
/// panels of width `2ħ/3` already resolve the integrand to about `1e-9`.
const INITIAL_PANELS_PER_HBAR: f64 = 1.5;

struct Grid {
    x: Vec<f64>,
    w: Vec<f64>,
}

fn grid(r: f64, panels: usize) -> Grid {
    let width = 2.0 * r / panels as f64;
    let nodes = gk15_nodes();
    let mut x = Vec::with_capacity(15 * panels);
    let mut w = Vec::with_capacity(15 * panels);
    for p in 0..panels {
        let a = -r + p as f64 * width;
        for &(xi, wk, _) in &nodes {
            x.push(a + 0.5 * width * (1.0 + xi));
            w.push(0.5 * width * wk);
        }
    }
    Grid { x, w }
}

struct Factors<'a> {
    params: &'a WhittakerParams,
    contour: &'a ContourSpec,
    ih: Complex64,
    ln_b: Complex64,
}

impl Factors<'_> {
    /// `ln E₁` without weight and Jacobian.
    fn e1(&self, a: Complex64) -> Complex64 {
        let q = &self.params.q;
        (-(q[0] - q[1]) * a + 2.0 * self.ln_b * a) / self.ih
    }

    /// `ln F₂` without weight and Jacobian.
    fn f2(&self, b: Complex64) -> Result<Complex64, MBError> {
        let q = &self.params.q;
        let mut acc = (-(q[1] - q[2]) * b + 2.0 * self.ln_b * b) / self.ih;
        for &l in &self.params.lambda {
            acc += lgamma_checked((b - l) / self.ih)?;
        }
        Ok(acc)
    }

    fn g(&self, a: Complex64, b: Complex64) -> Result<Complex64, MBError> {
        Ok(lgamma_checked((a - b) / self.ih)?.exp())
    }

    fn constant(&self) -> Complex64 {
        let s: Complex64 = self.params.lambda.iter().sum();
        ((-self.params.q[2] - 2.0 * self.ln_b) * s / self.ih).exp()
    }

    fn pair(&self, b1: Complex64, b2: Complex64) -> Complex64 {
        inv_gamma_pair((b1 - b2) / self.ih)
    }
}

struct Tables {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    e1: Vec<Complex64>,
    f2: Vec<Complex64>,
    /// `gt[j][i] = G(a_i, b_j)`.
    gt: Vec<Vec<Complex64>>,
}

fn tables(fac: &Factors, g: &Grid) -> Result<Tables, MBError> {
    let a: Vec<Complex64> = g.x.iter().map(|&x| fac.contour.point(0, x)).collect();
    let b: Vec<Complex64> = g.x.iter().map(|&x| fac.contour.point(1, x)).collect();
    let e1 = a
        .iter()
        .zip(&g.x)
        .zip(&g.w)
        .map(|((&ai, &x), &w)| fac.e1(ai).exp() * w * fac.contour.jacobian(x))
        .collect();
    let f2 = b
        .iter()
        .zip(&g.x)
        .zip(&g.w)
        .map(|((&bi, &x), &w)| Ok(fac.f2(bi)?.exp() * w * fac.contour.jacobian(x)))
        .collect::<Result<Vec<_>, MBError>>()?;
    let gt = b
        .par_iter()
        .map(|&bj| a.iter().map(|&ai| fac.g(ai, bj)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Tables { a, b, e1, f2, gt })
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (x, y) in u.iter().zip(v) {
        re += x.re * y.re - x.im * y.im;
        im += x.re * y.im + x.im * y.re;
    }
    Complex64::new(re, im)
}

/// The full tensor sum on a grid.
fn tensor_sum(fac: &Factors, t: &Tables) -> Complex64 {
    let m = t.b.len();
    let rows: Vec<Complex64> = (0..m)
        .into_par_iter()
        .map(|j1| {
            let v: Vec<Complex64> = t.e1.iter().zip(&t.gt[j1]).map(|(e, g)| e * g).collect();
            let mut row = CompensatedSum::default();
            row.add(dot(&v, &t.gt[j1]) * t.f2[j1] * fac.pair(t.b[j1], t.b[j1]));
            for j2 in (j1 + 1)..m {
                let s = dot(&v, &t.gt[j2]);
                row.add(2.0 * s * t.f2[j2] * fac.pair(t.b[j1], t.b[j2]));
            }
            row.total() * t.f2[j1]
        })
        .collect();
    let mut total = CompensatedSum::default();
    rows.into_iter().for_each(|r| total.add(r));
    total.total() * fac.constant()
}

/// Size of the integrand on the faces of the box, times the decay length
/// `2ħ/π` of the Gamma factors.
fn boundary_tail(fac: &Factors, t: &Tables, r: f64) -> Result<f64, MBError> {
    let c = fac.constant().norm();
    let mut tail = 0.0;
    for x in [-r, r] {
        let jac = fac.contour.jacobian(x).norm();
        // face γ₁₁ = x
        let a = fac.contour.point(0, x);
        let ea = fac.e1(a).exp().norm() * jac;
        let ga = t.b.iter().map(|&bj| fac.g(a, bj)).collect::<Result<Vec<_>, _>>()?;
        let mut face = 0.0;
        for j1 in 0..t.b.len() {
            for j2 in 0..t.b.len() {
                face += (ga[j1] * ga[j2] * t.f2[j1] * t.f2[j2] * fac.pair(t.b[j1], t.b[j2])).norm();
            }
        }
        tail += ea * face;
        // faces γ₂₁ = x and γ₂₂ = x
        let b = fac.contour.point(1, x);
        let fb = fac.f2(b)?.exp().norm() * jac;
        let gb = t.a.iter().map(|&ai| fac.g(ai, b)).collect::<Result<Vec<_>, _>>()?;
        let v: Vec<Complex64> = t.e1.iter().zip(&gb).map(|(e, g)| e * g).collect();
        let mut face = 0.0;
        for j in 0..t.b.len() {
            let s = dot(&v, &t.gt[j]);
            face += (s * t.f2[j] * fac.pair(b, t.b[j])).norm();
        }
        tail += 2.0 * fb * face;
    }
    Ok(c * tail * 2.0 * fac.params.hbar / std::f64::consts::PI)
}

fn evaluate(fac: &Factors, r: f64, panels: usize) -> Result<(Complex64, Tables, Grid), MBError> {
    let g = grid(r, panels);
    let t = tables(fac, &g)?;
    let v = tensor_sum(fac, &t);
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(MBError::NonFinite);
    }
    Ok((v, t, g))
}

pub(super) fn whittaker_n3(
    params: &WhittakerParams,
    contour: &ContourSpec,
    quad: &QuadConfig,
    plan: &QuadPlan,
) -> Result<MBResult, MBError> {
    for &l in &params.lambda {
        check_gamma_arg(l)?;
    }
    let fac = Factors {
        params,
        contour,
        ih: Complex64::new(0.0, params.hbar),
        ln_b: params.base.ln(params.hbar),
    };
    let r = quad.truncation_radius;
    let (mut panels, pinned) = match plan {
        QuadPlan::Uniform { panels } => (*panels, true),
        _ => {
            let p = (INITIAL_PANELS_PER_HBAR * 2.0 * r / params.hbar).ceil() as usize;
            (p + p % 2, false)
        }
    };
    let mut refinements = 0;
    loop {
        let (value, t, g) = evaluate(&fac, r, panels)?;
        let coarse_panels = (panels * 3).div_ceil(4).max(1);
        let (coarse, _, _) = evaluate(&fac, r, coarse_panels)?;
        let tail = boundary_tail(&fac, &t, r)?;
        let est_error = (value - coarse).norm() + tail;
        let target = quad.abs_tol.max(quad.rel_tol * value.norm());
        let m = g.x.len();
        let evaluations = m * m * m + coarse_panels.pow(3) * 3375;
        let done = est_error <= target || pinned;
        if done {
            if tail > target && !pinned {
                return Err(MBError::Truncation {
                    tail,
                    abs_tol: quad.abs_tol,
                });
            }
            return Ok(MBResult {
                value,
                est_error,
                evaluations,
                plan: QuadPlan::Uniform { panels },
            });
        }
        if refinements == MAX_REFINEMENTS || tail > target {
            return Err(MBError::NonConvergence {
                estimate: est_error,
                target,
            });
        }
        refinements += 1;
        panels *= 2;
    }
}
