//! The interpolation identity relating `S`-sums over `N` and `N − 1` points:
//!
//! `Σ_{|S|=k} S_S(γ_N) ∏_{j∈S} ∏_i (γ_{N−1,i} − γ_{N,j})
//!   = (−1)^{(N−k)k} Σ_{|T|=k−1} S_T(γ_{N−1}) ∏_{i∈T} ∏_j (γ_{N−1,i} − γ_{N,j})`.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{s_coeff_rational, subsets, DualError};
use crate::exactalg::random_rational;
use crate::report::{CheckParams, CheckReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityMode {
    Exact,
    Float,
}

const MAX_RESAMPLE: usize = 100;
/// Relative tolerance for the floating-point mirror of the identity.
pub const FLOAT_TOL: f64 = 1e-10;

fn sign(n: usize, k: usize) -> i64 {
    if ((n - k) * k) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Left side, exactly. `None` if two entries of `gn` coincide.
pub fn appendix_lhs_exact(gn: &[BigRational], gm: &[BigRational], k: usize) -> Option<BigRational> {
    let mut acc = BigRational::zero();
    for s in subsets(gn.len(), k) {
        let mut term = s_coeff_rational(gn, &s)?;
        for &j in &s {
            for g in gm {
                term *= g - &gn[j];
            }
        }
        acc += term;
    }
    Some(acc)
}

/// Right side, exactly. `None` if two entries of `gm` coincide.
pub fn appendix_rhs_exact(gn: &[BigRational], gm: &[BigRational], k: usize) -> Option<BigRational> {
    let mut acc = BigRational::zero();
    for t in subsets(gm.len(), k - 1) {
        let mut term = s_coeff_rational(gm, &t)?;
        for &i in &t {
            for g in gn {
                term *= &gm[i] - g;
            }
        }
        acc += term;
    }
    Some(acc * BigRational::from_integer(sign(gn.len(), k).into()))
}

fn s_float(x: &[f64], subset: &[usize]) -> f64 {
    let mut d = 1.0;
    for &i in subset {
        for j in 0..x.len() {
            if !subset.contains(&j) {
                d *= x[i] - x[j];
            }
        }
    }
    1.0 / d
}

pub fn appendix_lhs_float(gn: &[f64], gm: &[f64], k: usize) -> f64 {
    subsets(gn.len(), k)
        .iter()
        .map(|s| {
            let p: f64 = s
                .iter()
                .map(|&j| gm.iter().map(|g| g - gn[j]).product::<f64>())
                .product();
            s_float(gn, s) * p
        })
        .sum()
}

pub fn appendix_rhs_float(gn: &[f64], gm: &[f64], k: usize) -> f64 {
    let sum: f64 = subsets(gm.len(), k - 1)
        .iter()
        .map(|t| {
            let p: f64 = t
                .iter()
                .map(|&i| gn.iter().map(|g| gm[i] - g).product::<f64>())
                .product();
            s_float(gm, t) * p
        })
        .sum();
    sign(gn.len(), k) as f64 * sum
}

fn all_distinct(x: &[BigRational]) -> bool {
    (0..x.len()).all(|i| ((i + 1)..x.len()).all(|j| x[i] != x[j]))
}

fn sample_exact<R: Rng>(rng: &mut R, n: usize) -> Result<(Vec<BigRational>, Vec<BigRational>), DualError> {
    for _ in 0..MAX_RESAMPLE {
        let gn: Vec<BigRational> = (0..n).map(|_| random_rational(rng)).collect();
        let gm: Vec<BigRational> = (0..n - 1).map(|_| random_rational(rng)).collect();
        if all_distinct(&gn) && all_distinct(&gm) {
            return Ok((gn, gm));
        }
    }
    Err(DualError::DegenerateSamples(MAX_RESAMPLE))
}

fn sample_float<R: Rng>(rng: &mut R, n: usize) -> Result<(Vec<f64>, Vec<f64>), DualError> {
    let gap_ok = |x: &[f64]| (0..x.len()).all(|i| ((i + 1)..x.len()).all(|j| (x[i] - x[j]).abs() > 0.05));
    for _ in 0..MAX_RESAMPLE {
        let gn: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let gm: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
        if gap_ok(&gn) && gap_ok(&gm) {
            return Ok((gn, gm));
        }
    }
    Err(DualError::DegenerateSamples(MAX_RESAMPLE))
}

/// Evaluates both sides at `points` seeded random samples.
///
/// Exact mode compares rationals for equality; float mode reports the
/// largest relative discrepancy against [`FLOAT_TOL`].
pub fn appendix_identity_check(n: usize, k: usize, mode: IdentityMode, points: usize, seed: u64) -> CheckReport {
    let started = Instant::now();
    let params = CheckParams {
        n: Some(n),
        k: Some(k),
        seed: Some(seed),
        trials: Some(points),
        mode: Some(
            match mode {
                IdentityMode::Exact => "exact",
                IdentityMode::Float => "float",
            }
            .into(),
        ),
        ..Default::default()
    };
    const NAME: &str = "appendix_identity";
    if n < 2 || k < 1 || k > n {
        return CheckReport::failed(NAME, params, DualError::InvalidIndex { k, n }.to_string(), started);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        IdentityMode::Exact => {
            let mut pass = true;
            for _ in 0..points {
                let (gn, gm) = match sample_exact(&mut rng, n) {
                    Ok(s) => s,
                    Err(e) => return CheckReport::failed(NAME, params, e.to_string(), started),
                };
                let l = appendix_lhs_exact(&gn, &gm, k);
                let r = appendix_rhs_exact(&gn, &gm, k);
                if l.is_none() || l != r {
                    pass = false;
                    break;
                }
            }
            CheckReport::exact(NAME, params, pass, started)
        }
        IdentityMode::Float => {
            let mut worst: f64 = 0.0;
            for _ in 0..points {
                let (gn, gm) = match sample_float(&mut rng, n) {
                    Ok(s) => s,
                    Err(e) => return CheckReport::failed(NAME, params, e.to_string(), started),
                };
                let l = appendix_lhs_float(&gn, &gm, k);
                let r = appendix_rhs_float(&gn, &gm, k);
                worst = worst.max((l - r).abs() / r.abs().max(1.0));
            }
            CheckReport::numeric(NAME, params, worst, FLOAT_TOL, started)
        }
    }
}

/// Lagrange interpolation through `(xs, ys)` evaluated at `x`.
fn lagrange(xs: &[BigRational], ys: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 0..xs.len() {
        let mut w = BigRational::one();
        for j in 0..xs.len() {
            if i != j {
                w *= (x - &xs[j]) / (&xs[i] - &xs[j]);
            }
        }
        acc += &ys[i] * w;
    }
    acc
}

/// Both sides, as functions of `γ_{N,1}` alone, are polynomials of degree
/// `k − 1`: the interpolant through `k` values predicts a further value
/// exactly.
pub fn appendix_degree_check(n: usize, k: usize, seed: u64) -> Result<bool, DualError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut gn, gm) = sample_exact(&mut rng, n)?;
    let mut ts: Vec<BigRational> = Vec::with_capacity(k + 1);
    let mut tries = 0;
    while ts.len() < k + 1 {
        tries += 1;
        if tries > MAX_RESAMPLE {
            return Err(DualError::DegenerateSamples(MAX_RESAMPLE));
        }
        let t = random_rational(&mut rng);
        if !ts.contains(&t) && !gn[1..].contains(&t) {
            ts.push(t);
        }
    }
    let mut lhs = Vec::with_capacity(k + 1);
    let mut rhs = Vec::with_capacity(k + 1);
    for t in &ts {
        gn[0] = t.clone();
        lhs.push(appendix_lhs_exact(&gn, &gm, k).ok_or(DualError::DegenerateSamples(1))?);
        rhs.push(appendix_rhs_exact(&gn, &gm, k).ok_or(DualError::DegenerateSamples(1))?);
    }
    let predicted_l = lagrange(&ts[..k], &lhs[..k], &ts[k]);
    let predicted_r = lagrange(&ts[..k], &rhs[..k], &ts[k]);
    Ok(predicted_l == lhs[k] && predicted_r == rhs[k])
}

/// As `γ_{N,1} → γ_{N,2}` the poles of individual terms cancel: the left
/// side stays bounded and keeps equal to the (polynomial) right side.
pub fn appendix_residue_check(n: usize, k: usize, seed: u64) -> Result<bool, DualError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut gn, gm) = sample_exact(&mut rng, n)?;
    let mut first: Option<f64> = None;
    for m in 1..=12u32 {
        let eps = BigRational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), m as usize));
        gn[0] = &gn[1] + eps;
        let l = appendix_lhs_exact(&gn, &gm, k).ok_or(DualError::DegenerateSamples(1))?;
        let r = appendix_rhs_exact(&gn, &gm, k).ok_or(DualError::DegenerateSamples(1))?;
        if l != r {
            return Ok(false);
        }
        let mag = l.abs().to_f64().unwrap_or(f64::INFINITY);
        let bound = 10.0 * (1.0 + *first.get_or_insert(mag));
        if mag > bound {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn two_points_telescopes_to_minus_one() {
        let gn = [q(3, 7), q(-5, 2)];
        let gm = [q(11, 13)];
        assert_eq!(appendix_lhs_exact(&gn, &gm, 1), Some(q(-1, 1)));
        assert_eq!(appendix_rhs_exact(&gn, &gm, 1), Some(q(-1, 1)));
    }

    #[test]
    fn full_subset_is_a_plain_product() {
        let gn = [q(1, 2), q(-1, 3), q(4, 5)];
        let gm = [q(2, 9), q(-7, 4)];
        let mut prod = BigRational::one();
        for i in &gm {
            for j in &gn {
                prod *= i - j;
            }
        }
        assert_eq!(appendix_lhs_exact(&gn, &gm, 3), Some(prod.clone()));
        assert_eq!(appendix_rhs_exact(&gn, &gm, 3), Some(prod));
    }

    #[test]
    fn three_point_partition_of_unity() {
        let gn = [q(1, 3), q(-2, 5), q(7, 4)];
        let gm = [q(5, 6), q(-1, 8)];
        assert_eq!(appendix_lhs_exact(&gn, &gm, 1), Some(BigRational::one()));
    }

    #[test]
    fn four_points_k2_exact() {
        let r = appendix_identity_check(4, 2, IdentityMode::Exact, 50, 3);
        assert!(r.pass);
    }

    #[test]
    fn float_mode_agrees() {
        for k in 1..=4 {
            let r = appendix_identity_check(4, k, IdentityMode::Float, 20, 8);
            assert!(r.pass, "k = {k}: {:?}", r.residual);
        }
    }

    #[test]
    fn wrong_sign_would_fail() {
        // (−1)^{(N−k)k} is −1 for N=3, k=2; dropping it breaks equality.
        let gn = [q(1, 3), q(-2, 5), q(7, 4)];
        let gm = [q(5, 6), q(-1, 8)];
        let l = appendix_lhs_exact(&gn, &gm, 2).unwrap();
        let r = appendix_rhs_exact(&gn, &gm, 2).unwrap();
        assert_eq!(l, r);
        assert_ne!(l, -r);
    }

    #[test]
    fn degree_and_residue_structure() {
        for n in 2..=4 {
            for k in 1..=n {
                assert!(appendix_degree_check(n, k, 17).unwrap(), "degree N={n} k={k}");
                assert!(appendix_residue_check(n, k, 23).unwrap(), "residue N={n} k={k}");
            }
        }
    }
}
