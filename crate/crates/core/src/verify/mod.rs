//! Verification harness: individual checks, seeded check points and named
//! suites producing [`CheckReport`]s.

mod checks;
mod config;

pub use checks::{
    bessel_expression, check_bessel_oracle, check_contour_shift, check_dual_equation, check_measure,
    check_momentum_sign, check_open_toda, check_roundtrip, check_spectral, check_weyl_symmetry, default_grid_h,
    quad_config, MOMENTUM_SIGN,
};
pub use config::{parse_list, SuiteConfig, KEYS};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::dualops::{appendix_identity_check, verify_quadratic_algebra, IdentityMode};
use crate::mellinbarnes::{PowerBase, WhittakerParams};
use crate::report::CheckReport;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(
        "unknown suite '{0}' (expected one of dual, open-toda, identity, algebra, roundtrip, measure, oracle, all)"
    )]
    UnknownSuite(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("could not start worker pool: {0}")]
    Workers(String),
}

pub const SUITES: [&str; 8] = [
    "dual",
    "open-toda",
    "identity",
    "algebra",
    "roundtrip",
    "measure",
    "oracle",
    "all",
];

/// Tolerances pinned by the acceptance criteria.
pub mod tolerance {
    pub const DUAL_N2: f64 = 1e-8;
    pub const DUAL_N3: f64 = 1e-5;
    pub const OPEN_TODA_N2: f64 = 1e-6;
    pub const OPEN_TODA_N3: f64 = 1e-4;
    pub const ROUNDTRIP: f64 = 1e-8;
    pub const SPECTRAL_CURVE: f64 = 1e-9;
    pub const HAMILTONIANS: f64 = 1e-8;
    pub const BESSEL_SPREAD: f64 = 1e-8;
    pub const MEASURE: f64 = 1e-12;
    pub const WEYL_N2: f64 = 1e-8;
    pub const WEYL_N3: f64 = 1e-5;
}

/// Minimum separation of sampled `λ` components.
pub const MIN_GAP: f64 = 0.3;

/// Seeded check points: `λ` uniform in `[−1, 1]^N` with pairwise gaps at
/// least [`MIN_GAP`], `q` uniform in `[−0.5, 0.5]^N`.
pub fn default_points(n: usize, count: usize, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(n as u64));
    (0..count)
        .map(|_| {
            let lambda = loop {
                let l: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
                let ok = (0..n).all(|i| ((i + 1)..n).all(|j| (l[i] - l[j]).abs() >= MIN_GAP));
                if ok {
                    break l;
                }
            };
            let q = (0..n).map(|_| rng.random_range(-0.5..=0.5)).collect();
            (lambda, q)
        })
        .collect()
}

type Task = Box<dyn Fn() -> Vec<CheckReport> + Send + Sync>;

struct Plan<'a> {
    cfg: &'a SuiteConfig,
    tasks: Vec<Task>,
}

impl Plan<'_> {
    fn ranks(&self, allowed: &[usize]) -> Vec<usize> {
        match self.cfg.n {
            Some(n) => allowed.iter().copied().filter(|&m| m == n).collect(),
            None => allowed.to_vec(),
        }
    }

    fn indices(&self, range: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        match self.cfg.k {
            Some(k) => range.filter(|&j| j == k).collect(),
            None => range.collect(),
        }
    }

    fn points(&self, n: usize, default_count: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
        match (&self.cfg.lambda, &self.cfg.q) {
            (Some(l), Some(q)) if l.len() == n && q.len() == n => vec![(l.clone(), q.clone())],
            _ => default_points(n, self.cfg.points.unwrap_or(default_count), self.cfg.seed),
        }
    }

    fn tol(&self, default: f64) -> f64 {
        self.cfg.tol.unwrap_or(default)
    }

    fn push(&mut self, f: impl Fn() -> Vec<CheckReport> + Send + Sync + 'static) {
        self.tasks.push(Box::new(f));
    }

    fn quad(&self, n: usize, lambda: &[f64], q: &[f64]) -> Option<crate::mellinbarnes::QuadConfig> {
        let r = self.cfg.radius?;
        WhittakerParams::real(lambda, q, self.cfg.hbar)
            .ok()
            .filter(|p| p.n == n)
            .map(|p| quad_config(&p, Some(r)))
    }

    fn identity(&mut self) {
        let seed = self.cfg.seed;
        let count = self.cfg.points.unwrap_or(50);
        for n in self.ranks(&[2, 3, 4, 5]) {
            for k in self.indices(1..=n) {
                self.push(move || vec![appendix_identity_check(n, k, IdentityMode::Exact, count, seed)]);
            }
        }
    }

    fn algebra(&mut self) {
        let seed = self.cfg.seed;
        let trials = self.cfg.points.unwrap_or(10);
        for n in self.ranks(&[2, 3]) {
            for k in self.indices(0..=n) {
                for l in 0..=n {
                    self.push(move || vec![verify_quadratic_algebra(n, k, l, trials, seed)]);
                }
            }
        }
    }

    fn roundtrip(&mut self) {
        let seed = self.cfg.seed;
        let count = self.cfg.points.unwrap_or(100);
        let (rt, curve, ham) = (
            self.tol(tolerance::ROUNDTRIP),
            self.tol(tolerance::SPECTRAL_CURVE),
            self.tol(tolerance::HAMILTONIANS),
        );
        for n in self.ranks(&[2, 3, 4, 5]) {
            self.push(move || {
                let mut out = vec![check_roundtrip(n, count, seed, rt)];
                out.extend(check_spectral(n, count, seed, curve, ham));
                out
            });
        }
    }

    fn measure(&mut self) {
        let seed = self.cfg.seed;
        let count = self.cfg.points.unwrap_or(1000);
        let tol = self.tol(tolerance::MEASURE);
        self.push(move || check_measure(count, seed, tol).to_vec());
    }

    fn dual(&mut self) {
        let hbar = self.cfg.hbar;
        for (n, count, tol) in [(2, 5, tolerance::DUAL_N2), (3, 3, tolerance::DUAL_N3)] {
            if self.ranks(&[n]).is_empty() {
                continue;
            }
            let tol = self.tol(tol);
            for (lambda, q) in self.points(n, count) {
                for k in self.indices(1..=n) {
                    let (lambda, q) = (lambda.clone(), q.clone());
                    let quad = self.quad(n, &lambda, &q);
                    self.push(move || vec![check_dual_equation(n, k, &lambda, &q, hbar, quad.as_ref(), tol)]);
                }
            }
        }
    }

    fn open_toda(&mut self) {
        let hbar = self.cfg.hbar;
        let base = self.cfg.base.unwrap_or(PowerBase::Hbar);
        let mut calibrated = false;
        for (n, count, tol) in [(2, 3, tolerance::OPEN_TODA_N2), (3, 1, tolerance::OPEN_TODA_N3)] {
            if self.ranks(&[n]).is_empty() {
                continue;
            }
            let tol = self.tol(tol);
            for (lambda, q) in self.points(n, count) {
                let quad = self.quad(n, &lambda, &q);
                if !calibrated {
                    calibrated = true;
                    let (l, qq, qc) = (lambda.clone(), q.clone(), quad.clone());
                    self.push(move || vec![check_momentum_sign(&l, &qq, hbar, qc.as_ref())]);
                }
                for k in self.indices(1..=2) {
                    let (lambda, q, quad) = (lambda.clone(), q.clone(), quad.clone());
                    self.push(move || {
                        let h = default_grid_h(&q);
                        vec![check_open_toda(n, k, &lambda, &q, hbar, h, quad.as_ref(), base, tol)]
                    });
                }
            }
        }
    }

    fn oracle(&mut self) {
        let hbar = self.cfg.hbar;
        let radius = self.cfg.radius;
        if !self.ranks(&[2]).is_empty() {
            let tol = self.tol(tolerance::BESSEL_SPREAD);
            let pts = self.points(2, 1);
            let (lambda, _) = pts[0].clone();
            let qs: Vec<[f64; 2]> = default_points(2, 5, self.cfg.seed.wrapping_add(1))
                .into_iter()
                .map(|(_, q)| [q[0], q[1]])
                .collect();
            self.push(move || vec![check_bessel_oracle([lambda[0], lambda[1]], &qs, hbar, radius, tol)]);
        }
        for (n, count, weyl_tol) in [(2, 5, tolerance::WEYL_N2), (3, 3, tolerance::WEYL_N3)] {
            if self.ranks(&[n]).is_empty() {
                continue;
            }
            let weyl_tol = self.tol(weyl_tol);
            for (i, (lambda, q)) in self.points(n, count).into_iter().enumerate() {
                let (l, qq) = (lambda.clone(), q.clone());
                self.push(move || vec![check_contour_shift(&l, &qq, hbar, radius)]);
                if i == 0 {
                    self.push(move || vec![check_weyl_symmetry(&lambda, &q, hbar, radius, weyl_tol)]);
                }
            }
        }
    }
}

/// Runs a named suite and returns its reports, stably sorted by check name.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<CheckReport>, VerifyError> {
    let mut plan = Plan { cfg, tasks: Vec::new() };
    match name {
        "identity" => plan.identity(),
        "algebra" => plan.algebra(),
        "roundtrip" => plan.roundtrip(),
        "measure" => plan.measure(),
        "dual" => plan.dual(),
        "open-toda" => plan.open_toda(),
        "oracle" => plan.oracle(),
        "all" => {
            plan.identity();
            plan.algebra();
            plan.roundtrip();
            plan.measure();
            plan.dual();
            plan.open_toda();
            plan.oracle();
        }
        other => return Err(VerifyError::UnknownSuite(other.to_string())),
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| VerifyError::Workers(e.to_string()))?;
    let mut reports: Vec<CheckReport> = pool.install(|| plan.tasks.par_iter().flat_map_iter(|t| t()).collect());
    reports.sort_by(|a, b| a.check_name.cmp(&b.check_name));
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_points_respect_gap_and_ranges() {
        for n in 2..=3 {
            for (l, q) in default_points(n, 20, 9) {
                for i in 0..n {
                    assert!(l[i].abs() <= 1.0 && q[i].abs() <= 0.5);
                    for j in (i + 1)..n {
                        assert!((l[i] - l[j]).abs() >= MIN_GAP);
                    }
                }
            }
        }
        assert_eq!(default_points(2, 3, 4), default_points(2, 3, 4));
    }

    #[test]
    fn unknown_suite_is_an_error() {
        let e = run_suite("nope", &SuiteConfig::default()).unwrap_err();
        assert_eq!(e, VerifyError::UnknownSuite("nope".into()));
    }

    #[test]
    fn small_suites_pass_and_are_sorted() {
        let cfg = SuiteConfig {
            points: Some(5),
            workers: 2,
            ..Default::default()
        };
        for name in ["identity", "roundtrip", "measure"] {
            let reports = run_suite(name, &cfg).unwrap();
            assert!(!reports.is_empty());
            assert!(reports.iter().all(|r| r.pass), "{name}");
            assert!(reports.windows(2).all(|w| w[0].check_name <= w[1].check_name));
        }
    }
}
