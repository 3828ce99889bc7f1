//! Exact arithmetic over `Q(λ_1..λ_N, h)` and the skew algebra of shift
//! operators. The parameter `h` stands for `iħ` and is treated as a formal
//! rational variable.

mod poly;
mod ratfunc;
mod shift;

pub use num_rational::BigRational;
pub use poly::{Exponent, MultiPoly};
pub use ratfunc::RatFunc;
pub use shift::ShiftExpr;

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("no non-singular sample point found after {0} attempts")]
    SingularSamples(usize),
    #[error("at least one trial is required")]
    NoTrials,
}

/// Sampling bound for random rationals.
pub const SAMPLE_BOUND: i64 = 10_000;

const MAX_RESAMPLE: usize = 100;

/// Uniform nonzero integer in `[-SAMPLE_BOUND, SAMPLE_BOUND]`.
fn nonzero_int<R: Rng>(rng: &mut R) -> i64 {
    loop {
        let v = rng.random_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
        if v != 0 {
            return v;
        }
    }
}

/// A random rational `a/b` with `a, b` uniform in `[-10⁴, 10⁴] \ {0}`.
pub fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(BigInt::from(nonzero_int(rng)), BigInt::from(nonzero_int(rng)))
}

/// Samples points until `accept` holds, with bounded retries.
pub fn sample_point<R: Rng>(
    rng: &mut R,
    nvars: usize,
    accept: impl Fn(&[BigRational]) -> bool,
) -> Result<Vec<BigRational>, ExactError> {
    for _ in 0..MAX_RESAMPLE {
        let p: Vec<BigRational> = (0..nvars).map(|_| random_rational(rng)).collect();
        if accept(&p) {
            return Ok(p);
        }
    }
    Err(ExactError::SingularSamples(MAX_RESAMPLE))
}

/// Randomized exact identity test for two shift operators.
///
/// Each trial draws a random point `(λ, h)` avoiding every denominator, then
/// compares the coefficient of every shift vector at that point, and also the
/// action of both operators on a random monomial test function evaluated
/// there. Deterministic for a given `seed`.
pub fn schwartz_zippel_equal(a: &ShiftExpr, b: &ShiftExpr, trials: usize, seed: u64) -> Result<bool, ExactError> {
    assert_eq!(a.n(), b.n());
    if trials == 0 {
        return Err(ExactError::NoTrials);
    }
    let n = a.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keys: Vec<&Vec<i32>> = a.terms().map(|(e, _)| e).collect();
    for (e, _) in b.terms() {
        if a.coeff(e).is_none() {
            keys.push(e);
        }
    }
    let coeffs: Vec<(Option<&RatFunc>, Option<&RatFunc>)> = keys.iter().map(|e| (a.coeff(e), b.coeff(e))).collect();
    let eval = |c: Option<&RatFunc>, p: &[BigRational]| match c {
        None => Some(BigRational::from_integer(0.into())),
        Some(c) => c.eval_rational(p),
    };
    for _ in 0..trials {
        let point = sample_point(&mut rng, n + 1, |p| {
            coeffs
                .iter()
                .all(|(x, y)| eval(*x, p).is_some() && eval(*y, p).is_some())
        })?;
        let h = &point[n];
        let exps: Vec<u32> = (0..n).map(|_| rng.random_range(0..=3)).collect();
        let mut act_a = BigRational::from_integer(0.into());
        let mut act_b = act_a.clone();
        for (e, (x, y)) in keys.iter().zip(&coeffs) {
            let va = eval(*x, &point).unwrap();
            let vb = eval(*y, &point).unwrap();
            if va != vb {
                return Ok(false);
            }
            // monomial ∏ (λ_i + h e_i)^{a_i}
            let mut m = BigRational::from_integer(1.into());
            for i in 0..n {
                let shifted = &point[i] + h * BigRational::from_integer(e[i].into());
                m *= num_traits::pow(shifted, exps[i] as usize);
            }
            act_a += &va * &m;
            act_b += &vb * &m;
        }
        if act_a != act_b {
            return Ok(false);
        }
    }
    Ok(true)
}
