//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use toda_dual_core::verify::{run_suite, SuiteConfig};
use toda_dual_core::CheckReport;

struct Outcome {
    pass: bool,
    detail: String,
}

fn suite(name: &str, cfg: &SuiteConfig) -> (Vec<CheckReport>, Duration) {
    let started = Instant::now();
    let reports = run_suite(name, cfg).expect("suite names are valid");
    (reports, started.elapsed())
}

fn worst(reports: &[&CheckReport]) -> String {
    reports
        .iter()
        .filter_map(|r| r.residual_value())
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))))
        .map_or("exact".to_string(), |v| format!("worst residual {v:.3e}"))
}

fn grade(reports: &[&CheckReport], expected: usize, time: Option<(Duration, Duration)>) -> Outcome {
    let failed: Vec<&&CheckReport> = reports.iter().filter(|r| !r.pass).collect();
    let mut pass = failed.is_empty() && reports.len() == expected;
    let mut detail = format!(
        "{}/{} checks pass, {}",
        reports.len() - failed.len(),
        expected,
        worst(reports)
    );
    if reports.len() != expected {
        detail.push_str(&format!(", expected {expected} reports, got {}", reports.len()));
    }
    if let Some((took, limit)) = time {
        detail.push_str(&format!(", {:.1}s (limit {}s)", took.as_secs_f64(), limit.as_secs()));
        pass &= took <= limit;
    }
    if let Some(f) = failed.first() {
        detail.push_str(&format!(", first failure: {}", f.to_json_line()));
    }
    Outcome { pass, detail }
}

fn named<'a>(reports: &'a [CheckReport], name: &str, n: Option<usize>) -> Vec<&'a CheckReport> {
    reports
        .iter()
        .filter(|r| r.check_name == name && (n.is_none() || r.params.n == n))
        .collect()
}

fn main() -> ExitCode {
    let seed = 1;
    let base = SuiteConfig {
        seed,
        ..Default::default()
    };
    let only = |n: usize| SuiteConfig {
        n: Some(n),
        ..base.clone()
    };
    let mut results: Vec<(&str, Outcome)> = Vec::new();

    let (r, t) = suite("identity", &base);
    results.push((
        "1 appendix identity, exact, N=2..5, all k, 50 points",
        grade(
            &named(&r, "appendix_identity", None),
            14,
            Some((t, Duration::from_secs(60))),
        ),
    ));

    let (r, t) = suite("algebra", &base);
    results.push((
        "2 quadratic algebra [X,X] [X,Y] [Y,Y], N=2,3, 10 trials",
        grade(
            &named(&r, "quadratic_algebra", None),
            9 + 16,
            Some((t, Duration::from_secs(120))),
        ),
    ));

    let (r, t) = suite("roundtrip", &base);
    results.push((
        "3 classical round trip < 1e-8, N=2..5, 100 points",
        grade(
            &named(&r, "classical_roundtrip", None),
            4,
            Some((t, Duration::from_secs(30))),
        ),
    ));
    let spectral: Vec<&CheckReport> = named(&r, "spectral_curve", None)
        .into_iter()
        .chain(named(&r, "hamiltonian_solve", None))
        .collect();
    results.push((
        "4 spectral curve < 1e-9 and Hamiltonians < 1e-8",
        grade(&spectral, 8, None),
    ));

    let (r2, t2) = suite("dual", &only(2));
    let (r3, t3) = suite("dual", &only(3));
    let n2 = grade(
        &named(&r2, "dual_equation", Some(2)),
        10,
        Some((t2, Duration::from_secs(30))),
    );
    let n3 = grade(
        &named(&r3, "dual_equation", Some(3)),
        9,
        Some((t3, Duration::from_secs(1200))),
    );
    results.push((
        "5 dual equations with signs (-1)^{k(N-1)}, N=2 < 1e-8, N=3 < 1e-5",
        Outcome {
            pass: n2.pass && n3.pass,
            detail: format!("N=2: {}; N=3: {}", n2.detail, n3.detail),
        },
    ));

    let (r, _) = suite("open-toda", &base);
    let mut ot: Vec<&CheckReport> = named(&r, "open_toda", None);
    ot.extend(named(&r, "momentum_sign", None));
    results.push((
        "6 open Toda eigen-equations, FD ratio in [3.5,4.5], N=2 < 1e-6, N=3 < 1e-4",
        grade(&ot, 3 * 2 + 2 + 1, None),
    ));

    let (r, _) = suite("oracle", &base);
    results.push((
        "7 Bessel-K oracle ratio spread < 1e-8 over 5 q points",
        grade(&named(&r, "bessel_oracle", None), 1, None),
    ));
    let shifts: Vec<&CheckReport> = named(&r, "contour_shift", None);
    let has_both = shifts.iter().any(|s| s.params.n == Some(2)) && shifts.iter().any(|s| s.params.n == Some(3));
    let mut c8 = grade(&shifts, 5 + 3, None);
    c8.pass &= has_both;
    results.push((
        "8 contour shift by +hbar/4 within combined error estimates, N=2 and N=3",
        c8,
    ));

    let (r, _) = suite("measure", &base);
    let m: Vec<&CheckReport> = r.iter().filter(|x| x.check_name.starts_with("measure")).collect();
    results.push((
        "9 measure positive, symmetric, sinh form to 1e-12 on 1000 points",
        grade(&m, 3, None),
    ));

    let mut all = true;
    for (name, o) in &results {
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        all &= o.pass;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
