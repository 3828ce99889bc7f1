//! Difference operators `X^(k)`, `Y^(k)` in the separated variables, the
//! quadratic algebra they satisfy, and the interpolation identity behind the
//! dual difference equations.

mod appendix;

pub use appendix::{
    appendix_degree_check, appendix_identity_check, appendix_lhs_exact, appendix_lhs_float, appendix_residue_check,
    appendix_rhs_exact, appendix_rhs_float, IdentityMode,
};

use std::time::Instant;

use itertools::Itertools;
use num_complex::Complex64;
use num_rational::BigRational;
use thiserror::Error;

use crate::exactalg::{schwartz_zippel_equal, MultiPoly, RatFunc, ShiftExpr};
use crate::report::{CheckParams, CheckReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DualError {
    #[error("invalid operator index k = {k} for N = {n}")]
    InvalidIndex { k: usize, n: usize },
    #[error("coincident spectral parameters λ_{i} and λ_{j}")]
    CoefficientSingular { i: usize, j: usize },
    #[error("no non-degenerate sample found after {0} attempts")]
    DegenerateSamples(usize),
}

const COINCIDENCE_TOL: f64 = 1e-8;

/// All `k`-subsets of `{0..n-1}`, each sorted, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

/// `S_[k](λ) = ∏_{i∈S} ∏_{j∉S} 1/(λ_i − λ_j)` as an exact rational function
/// in `λ_1..λ_n, h`.
pub fn s_coeff(n: usize, subset: &[usize]) -> RatFunc {
    let nv = n + 1;
    let den: Vec<(MultiPoly, u32)> = subset
        .iter()
        .flat_map(|&i| {
            (0..n)
                .filter(|j| !subset.contains(j))
                .map(move |j| (&MultiPoly::var(nv, i) - &MultiPoly::var(nv, j), 1))
        })
        .collect();
    RatFunc::from_factors(MultiPoly::one(nv), den).expect("λ_i − λ_j is a nonzero polynomial")
}

/// Numeric `S_[k](λ)`.
pub fn s_coeff_value(lambda: &[Complex64], subset: &[usize]) -> Complex64 {
    let mut d = Complex64::new(1.0, 0.0);
    for &i in subset {
        for j in 0..lambda.len() {
            if !subset.contains(&j) {
                d *= lambda[i] - lambda[j];
            }
        }
    }
    1.0 / d
}

/// Exact `S_[k]` at a rational point; `None` on a coincidence.
pub fn s_coeff_rational(lambda: &[BigRational], subset: &[usize]) -> Option<BigRational> {
    let mut d = BigRational::from_integer(1.into());
    for &i in subset {
        for j in 0..lambda.len() {
            if !subset.contains(&j) {
                d *= &lambda[i] - &lambda[j];
            }
        }
    }
    (!num_traits::Zero::is_zero(&d)).then(|| d.recip())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    X,
    Y,
}

/// A freshly built `X^(k)` or `Y^(k)`, unstarred (`λ → λ + iħ`) or starred
/// (`λ → λ − iħ`).
#[derive(Debug, Clone, PartialEq)]
pub struct DualOperator {
    pub kind: OperatorKind,
    pub k: usize,
    pub starred: bool,
    pub exact: ShiftExpr,
}

impl DualOperator {
    /// `+1` for `μ`, `−1` for `μ*`.
    pub fn direction(&self) -> i32 {
        if self.starred {
            -1
        } else {
            1
        }
    }
}

fn build(kind: OperatorKind, k: usize, n: usize, starred: bool) -> Result<DualOperator, DualError> {
    if k > n {
        return Err(DualError::InvalidIndex { k, n });
    }
    let dir = if starred { -1 } else { 1 };
    let nv = n + 1;
    let mut exact = ShiftExpr::zero(n);
    for s in subsets(n, k) {
        let mut coeff = s_coeff(n, &s);
        if kind == OperatorKind::Y {
            let rest = (0..n)
                .filter(|j| !s.contains(j))
                .fold(MultiPoly::zero(nv), |acc, j| &acc + &MultiPoly::var(nv, j));
            coeff = &coeff * &RatFunc::from_poly(rest);
        }
        let e: Vec<i32> = (0..n).map(|i| if s.contains(&i) { dir } else { 0 }).collect();
        exact = &exact + &ShiftExpr::term(e, coeff);
    }
    Ok(DualOperator {
        kind,
        k,
        starred,
        exact,
    })
}

/// `X^(k) = Σ_{|S|=k} S_S(λ) μ_S`.
pub fn build_x(k: usize, n: usize, starred: bool) -> Result<DualOperator, DualError> {
    build(OperatorKind::X, k, n, starred)
}

/// `Y^(k) = Σ_{|S|=k} S_S(λ) (Σ_{i∉S} λ_i) μ_S`.
pub fn build_y(k: usize, n: usize, starred: bool) -> Result<DualOperator, DualError> {
    build(OperatorKind::Y, k, n, starred)
}

/// Rejects `λ` with two components closer than `1e-8`.
pub fn check_distinct(lambda: &[Complex64]) -> Result<(), DualError> {
    for i in 0..lambda.len() {
        for j in (i + 1)..lambda.len() {
            if (lambda[i] - lambda[j]).norm() < COINCIDENCE_TOL {
                return Err(DualError::CoefficientSingular { i, j });
            }
        }
    }
    Ok(())
}

/// `Σ_e c_e(λ, iħ) · f(λ + iħ e)` with coefficients evaluated numerically.
pub fn apply_functional<E, F>(op: &DualOperator, mut f: F, lambda: &[Complex64], hbar: f64) -> Result<Complex64, E>
where
    F: FnMut(&[Complex64]) -> Result<Complex64, E>,
    E: From<DualError>,
{
    check_distinct(lambda)?;
    let ih = Complex64::new(0.0, hbar);
    let mut point: Vec<Complex64> = lambda.to_vec();
    point.push(ih);
    let mut acc = Complex64::new(0.0, 0.0);
    for (e, c) in op.exact.terms() {
        let shifted: Vec<Complex64> = lambda.iter().zip(e).map(|(&l, &s)| l + ih * s as f64).collect();
        acc += c.eval_complex(&point) * f(&shifted)?;
    }
    Ok(acc)
}

fn theta(x: i64) -> i64 {
    i64::from(x > 0)
}

/// Outcome of the three commutator relations for one `(N, k, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgebraOutcome {
    pub xx: bool,
    pub xy: bool,
    pub yy: bool,
}

/// Tests, exactly and with `h = iħ` formal,
/// `[X^k, X^l] = 0`,
/// `[X^k, Y^l] = h (k−l) θ(k−l) X^k X^l`,
/// `[Y^k, Y^l] = h (k−l) (θ(k−l) Y^k X^l + θ(l−k) Y^l X^k)`, with `θ(0) = 0`.
pub fn quadratic_algebra_relations(
    n: usize,
    k: usize,
    l: usize,
    trials: usize,
    seed: u64,
) -> Result<AlgebraOutcome, crate::Error> {
    let xk = build_x(k, n, false)?.exact;
    let xl = build_x(l, n, false)?.exact;
    let yk = build_y(k, n, false)?.exact;
    let yl = build_y(l, n, false)?.exact;
    let d = k as i64 - l as i64;
    let h = RatFunc::from_poly(MultiPoly::var(n + 1, n));
    let h_scaled = |c: i64| h.scale(&BigRational::from_integer(c.into()));

    let xx = schwartz_zippel_equal(&xk.commutator(&xl), &ShiftExpr::zero(n), trials, seed)?;

    let xy_rhs = if d * theta(d) != 0 {
        xk.compose(&xl).left_mul(&h_scaled(d * theta(d)))
    } else {
        ShiftExpr::zero(n)
    };
    let xy = schwartz_zippel_equal(&xk.commutator(&yl), &xy_rhs, trials, seed.wrapping_add(1))?;

    let mut yy_rhs = ShiftExpr::zero(n);
    if theta(d) != 0 {
        yy_rhs = &yy_rhs + &yk.compose(&xl).left_mul(&h_scaled(d));
    }
    if theta(-d) != 0 {
        yy_rhs = &yy_rhs + &yl.compose(&xk).left_mul(&h_scaled(d));
    }
    let yy = schwartz_zippel_equal(&yk.commutator(&yl), &yy_rhs, trials, seed.wrapping_add(2))?;
    Ok(AlgebraOutcome { xx, xy, yy })
}

/// Report wrapper around [`quadratic_algebra_relations`].
pub fn verify_quadratic_algebra(n: usize, k: usize, l: usize, trials: usize, seed: u64) -> CheckReport {
    let started = Instant::now();
    let params = CheckParams {
        n: Some(n),
        k: Some(k),
        l: Some(l),
        seed: Some(seed),
        trials: Some(trials),
        mode: Some("exact".into()),
        ..Default::default()
    };
    const NAME: &str = "quadratic_algebra";
    match quadratic_algebra_relations(n, k, l, trials, seed) {
        Ok(out) => {
            let params = params
                .with_extra("xx", out.xx)
                .with_extra("xy", out.xy)
                .with_extra("yy", out.yy);
            CheckReport::exact(NAME, params, out.xx && out.xy && out.yy, started)
        }
        Err(e) => CheckReport::failed(NAME, params, e.to_string(), started),
    }
}
