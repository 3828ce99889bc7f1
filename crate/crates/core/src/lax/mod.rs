//! Classical closed Toda chain: Lax monodromy, separated divisor, Hamiltonian
//! linear solve and inverse reconstruction of `(q, p)`.

mod open;
mod poly;

pub use open::{eval_open_terms, open_hamiltonian_terms, OpenTerm};
pub use poly::PolyC;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::dualops::{s_coeff_value, subsets};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaxError {
    #[error("invalid phase point: {0}")]
    InvalidPhase(String),
    #[error("eigenvalue solver failed for the companion matrix")]
    RootFinding,
    #[error("degenerate divisor: roots {i} and {j} are {gap:e} apart")]
    DegenerateDivisor { i: usize, j: usize, gap: f64 },
    #[error("singular Vandermonde system")]
    SingularVandermonde,
    #[error("reconstruction singular: X^({k}) vanishes")]
    ReconstructionSingular { k: usize },
    #[error("inconsistent reconstruction: e^q_{i} = {re}{im:+}i is not positive real")]
    Inconsistent { i: usize, re: f64, im: f64 },
}

const GAUGE_TOL: f64 = 1e-12;
const DEGENERATE_GAP: f64 = 1e-6;
const REALITY_TOL: f64 = 1e-6;

/// A point of the closed chain with `N + 1` particles, in the gauge
/// `q_{N+1} = 0` and at total momentum zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    n: usize,
    q: Vec<f64>,
    p: Vec<f64>,
}

impl PhasePoint {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self, LaxError> {
        if q.len() != p.len() || q.len() < 3 {
            return Err(LaxError::InvalidPhase(format!(
                "need q and p of equal length ≥ 3, got {} and {}",
                q.len(),
                p.len()
            )));
        }
        if q.last().unwrap().abs() > GAUGE_TOL {
            return Err(LaxError::InvalidPhase("q_{N+1} must be 0".into()));
        }
        let total: f64 = p.iter().sum();
        if total.abs() > GAUGE_TOL * (1.0 + p.iter().map(|x| x.abs()).sum::<f64>()) {
            return Err(LaxError::InvalidPhase(format!("total momentum {total} ≠ 0")));
        }
        Ok(PhasePoint { n: q.len() - 1, q, p })
    }

    /// Entries uniform in `[-1, 1]`, then projected to the gauge.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut q: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        q[n] = 0.0;
        let mut p: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let mean = p.iter().sum::<f64>() / (n + 1) as f64;
        p.iter_mut().for_each(|x| *x -= mean);
        PhasePoint { n, q, p }
    }

    /// Number of separated variables.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }
}

/// The closed-chain energy matching the trace of the monodromy:
/// `½ Σ p_i² + Σ_i e^{q_i − q_{i+1}}` with `q_{N+2} ≡ q_1`.
pub fn toda_hamiltonian(phase: &PhasePoint) -> f64 {
    let m = phase.q.len();
    let kin = 0.5 * phase.p.iter().map(|x| x * x).sum::<f64>();
    let pot: f64 = (0..m).map(|i| (phase.q[i] - phase.q[(i + 1) % m]).exp()).sum();
    kin + pot
}

/// Monodromy entries `T(λ) = [[A, B], [C, D]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monodromy {
    pub a: PolyC,
    pub b: PolyC,
    pub c: PolyC,
    pub d: PolyC,
}

impl Monodromy {
    /// `t(λ) = A(λ) + D(λ)`.
    pub fn trace(&self) -> PolyC {
        &self.a + &self.d
    }

    /// `A D − B C` at `λ`.
    pub fn det_at(&self, lambda: Complex64) -> Complex64 {
        self.a.eval(lambda) * self.d.eval(lambda) - self.b.eval(lambda) * self.c.eval(lambda)
    }
}

/// `T_1(λ) ··· T_{N+1}(λ)` with `T_j = [[λ + p_j, −e^{q_j}], [e^{−q_j}, 0]]`.
pub fn monodromy(phase: &PhasePoint) -> Monodromy {
    let c = |x: f64| Complex64::new(x, 0.0);
    let one = PolyC::constant(c(1.0));
    let mut m = [[one.clone(), PolyC::zero()], [PolyC::zero(), one]];
    for (&q, &p) in phase.q.iter().zip(&phase.p) {
        let t = [
            [PolyC::linear(c(p)), PolyC::constant(c(-q.exp()))],
            [PolyC::constant(c((-q).exp())), PolyC::zero()],
        ];
        let mut next: [[PolyC; 2]; 2] = Default::default();
        for r in 0..2 {
            for col in 0..2 {
                next[r][col] = &(&m[r][0] * &t[0][col]) + &(&m[r][1] * &t[1][col]);
            }
        }
        m = next;
    }
    let [[a, b], [cc, d]] = m;
    Monodromy { a, b, c: cc, d }
}

/// Separated variables `(λ_i, μ_i)` with `B(λ_i) = 0`, `μ_i = D(λ_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Divisor {
    pub points: Vec<(Complex64, Complex64)>,
}

impl Divisor {
    pub fn lambdas(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.0).collect()
    }
}

pub fn separated_divisor(m: &Monodromy) -> Result<Divisor, LaxError> {
    let roots = m.b.roots().ok_or(LaxError::RootFinding)?;
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            let gap = (roots[i] - roots[j]).norm();
            if gap < DEGENERATE_GAP * scale {
                return Err(LaxError::DegenerateDivisor { i, j, gap });
            }
        }
    }
    Ok(Divisor {
        points: roots.into_iter().map(|l| (l, m.d.eval(l))).collect(),
    })
}

/// Solves `Σ_{j<N} λ_i^j H_j = μ_i + 1/μ_i − λ_i^{N+1}` and returns
/// `H_0..H_N` with `H_N = 0`.
pub fn hamiltonians_from_divisor(d: &Divisor, n: usize) -> Result<Vec<Complex64>, LaxError> {
    if d.points.len() != n {
        return Err(LaxError::InvalidPhase(format!(
            "divisor has {} points, expected {n}",
            d.points.len()
        )));
    }
    let v = DMatrix::from_fn(n, n, |i, j| d.points[i].0.powu(j as u32));
    let rhs = DVector::from_fn(n, |i, _| {
        let (l, mu) = d.points[i];
        mu + 1.0 / mu - l.powu(n as u32 + 1)
    });
    let sol = v.lu().solve(&rhs).ok_or(LaxError::SingularVandermonde)?;
    if sol.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(LaxError::SingularVandermonde);
    }
    let mut h: Vec<Complex64> = sol.iter().copied().collect();
    h.push(Complex64::new(0.0, 0.0));
    Ok(h)
}

/// Classical `X^(k)` and `Y^(k)` at commuting values `μ⁺_i = 1/μ_i`.
fn classical_xy(lambda: &[Complex64], mu_plus: &[Complex64], k: usize) -> (Complex64, Complex64) {
    let n = lambda.len();
    let mut x = Complex64::new(0.0, 0.0);
    let mut y = Complex64::new(0.0, 0.0);
    for s in subsets(n, k) {
        let coeff = s_coeff_value(lambda, &s) * s.iter().map(|&i| mu_plus[i]).product::<Complex64>();
        x += coeff;
        let rest: Complex64 = (0..n).filter(|i| !s.contains(i)).map(|i| lambda[i]).sum();
        y += coeff * rest;
    }
    (x, y)
}

/// Recovers `(q_1..q_N, p_1..p_N)` from the divisor.
///
/// Uses the other sheet point `μ⁺_i = A(λ_i) = 1/μ_i` with
/// `e^{q_i} = (−1)^{N−1+i} X^{(N−i+1)} / X^{(N−i)}` and
/// `p_i = Y^{(N−i+1)}/X^{(N−i+1)} − Y^{(N−i)}/X^{(N−i)}`,
/// `X^{(0)} = 1`, `Y^{(0)} = Σ λ`.
pub fn reconstruct(d: &Divisor, n: usize) -> Result<(Vec<f64>, Vec<f64>), LaxError> {
    let lambda = d.lambdas();
    let mu_plus: Vec<Complex64> = d.points.iter().map(|p| 1.0 / p.1).collect();
    let scale = lambda.iter().map(|l| l.norm()).fold(1.0, f64::max);
    let mut xs = Vec::with_capacity(n + 1);
    let mut ys = Vec::with_capacity(n + 1);
    xs.push(Complex64::new(1.0, 0.0));
    ys.push(lambda.iter().sum::<Complex64>());
    for k in 1..=n {
        let (x, y) = classical_xy(&lambda, &mu_plus, k);
        // written so that NaN also counts as singular
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(x.norm() > 1e-14 * scale.powi(k as i32)) {
            return Err(LaxError::ReconstructionSingular { k });
        }
        xs.push(x);
        ys.push(y);
    }
    let mut q = Vec::with_capacity(n);
    let mut p = Vec::with_capacity(n);
    for i in 1..=n {
        let (a, b) = (n - i + 1, n - i);
        let sign = if (n - 1 + i) % 2 == 0 { 1.0 } else { -1.0 };
        let eq = sign * xs[a] / xs[b];
        if eq.re <= 0.0 || eq.im.abs() > REALITY_TOL * eq.re {
            return Err(LaxError::Inconsistent {
                i,
                re: eq.re,
                im: eq.im,
            });
        }
        q.push(eq.re.ln());
        p.push((ys[a] / xs[a] - ys[b] / xs[b]).re);
    }
    Ok((q, p))
}

/// `Σ_k λ^{N−k} h_k = −e^{−q_{N+1}} B(λ)`.
pub fn open_hamiltonians(phase: &PhasePoint) -> PolyC {
    let m = monodromy(phase);
    m.b.scale(Complex64::new(-(-phase.q[phase.n]).exp(), 0.0))
}
