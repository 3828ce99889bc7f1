//! `toda-dual`: run verification suites or evaluate a Whittaker function.

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;
use toda_dual_core::mellinbarnes::{default_contour, whittaker, PowerBase, QuadConfig, WhittakerParams};
use toda_dual_core::verify::{run_suite, SuiteConfig, VerifyError, SUITES};
use toda_dual_core::{CheckReport, MBError, Residual};

#[derive(Debug, Parser)]
#[command(
    name = "toda-dual",
    about = "Checks for the dual difference equations of the quantum Toda chain",
    after_help = "Suites: dual, open-toda, identity, algebra, roundtrip, measure, oracle, all.\n\
                  Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error, 3 numerical failure."
)]
struct Cli {
    /// A suite name, or `eval` to print w(λ, q).
    command: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated λ.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Comma-separated q.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long)]
    hbar: Option<f64>,
    /// Tolerance for numeric checks; relative quadrature tolerance for `eval`.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Truncation radius of the Mellin–Barnes integrals.
    #[arg(long)]
    radius: Option<f64>,
    /// Power base `ihbar` or `hbar`.
    #[arg(long)]
    base: Option<String>,
    /// Number of sampled points per rank.
    #[arg(long)]
    points: Option<usize>,
    /// JSON lines output (default).
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// CSV summary output.
    #[arg(long)]
    csv: bool,
    /// Flat key=value file with the same keys as the flags.
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("cannot read config '{path}': {source}")]
    ConfigFile { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(#[from] MBError),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical(_) => 3,
            CliError::Output(_) => 1,
            _ => 2,
        }
    }
}

fn config(cli: &Cli) -> Result<SuiteConfig, CliError> {
    let mut cfg = SuiteConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigFile {
            path: path.clone(),
            source,
        })?;
        cfg.apply_text(&text)?;
    }
    let flags: [(&str, Option<String>); 11] = [
        ("n", cli.n.map(|v| v.to_string())),
        ("k", cli.k.map(|v| v.to_string())),
        ("lambda", cli.lambda.clone()),
        ("q", cli.q.clone()),
        ("hbar", cli.hbar.map(|v| v.to_string())),
        ("tol", cli.tol.map(|v| v.to_string())),
        ("seed", cli.seed.map(|v| v.to_string())),
        ("radius", cli.radius.map(|v| v.to_string())),
        ("base", cli.base.clone()),
        ("points", cli.points.map(|v| v.to_string())),
        ("workers", cli.workers.map(|v| v.to_string())),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    Ok(cfg)
}

fn eval(cli: &Cli, cfg: &SuiteConfig) -> Result<(), CliError> {
    let lambda = cfg
        .lambda
        .clone()
        .ok_or_else(|| CliError::Usage("eval needs --lambda".into()))?;
    let q = cfg.q.clone().ok_or_else(|| CliError::Usage("eval needs --q".into()))?;
    if let Some(n) = cfg.n {
        if n != lambda.len() || n != q.len() {
            return Err(CliError::Usage(format!(
                "--n {n} does not match the lengths of --lambda and --q"
            )));
        }
    }
    let base = cfg.base.unwrap_or(PowerBase::IHbar);
    let params = WhittakerParams::real(&lambda, &q, cfg.hbar)
        .map_err(|e| CliError::Usage(e.to_string()))?
        .with_base(base);
    let mut quad = QuadConfig::default_for(&params);
    if let Some(r) = cfg.radius {
        quad.truncation_radius = r;
    }
    if let Some(t) = cfg.tol {
        quad.rel_tol = t;
    }
    let w = whittaker(&params, &default_contour(&params), &quad)?;
    let mut out = std::io::stdout().lock();
    let res = if cli.csv {
        writeln!(
            out,
            "re,im,est_error,evaluations\n{},{},{},{}",
            w.value.re, w.value.im, w.est_error, w.evaluations
        )
    } else {
        let record = serde_json::json!({
            "n": params.n,
            "lambda": lambda,
            "q": q,
            "hbar": cfg.hbar,
            "base": base.name(),
            "re": w.value.re,
            "im": w.value.im,
            "est_error": w.est_error,
            "evaluations": w.evaluations,
        });
        writeln!(out, "{record}")
    };
    res.map_err(|e| CliError::Output(e.to_string()))
}

fn write_csv(reports: &[CheckReport]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    let err = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record([
        "check_name",
        "n",
        "k",
        "residual",
        "tolerance",
        "pass",
        "runtime_ms",
        "params",
    ])
    .map_err(err)?;
    for r in reports {
        let residual = match r.residual {
            Residual::Value(v) => v.to_string(),
            Residual::Exact { exact_pass } => format!("exact:{exact_pass}"),
            Residual::Missing => String::new(),
        };
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let params = serde_json::to_string(&r.params).map_err(|e| CliError::Output(e.to_string()))?;
        w.write_record([
            r.check_name.as_str(),
            &opt(r.params.n),
            &opt(r.params.k),
            &residual,
            &r.tolerance.to_string(),
            &r.pass.to_string(),
            &r.runtime_ms.to_string(),
            &params,
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))
}

fn suite(cli: &Cli, cfg: &SuiteConfig) -> Result<u8, CliError> {
    if !SUITES.contains(&cli.command.as_str()) {
        return Err(VerifyError::UnknownSuite(cli.command.clone()).into());
    }
    let reports = run_suite(&cli.command, cfg)?;
    if cli.csv {
        write_csv(&reports)?;
    } else {
        let mut out = std::io::stdout().lock();
        for r in &reports {
            writeln!(out, "{}", r.to_json_line()).map_err(|e| CliError::Output(e.to_string()))?;
        }
    }
    let numerical = reports.iter().any(|r| r.params.error.is_some());
    let failed = reports.iter().any(|r| !r.pass);
    Ok(if numerical {
        3
    } else if failed {
        1
    } else {
        0
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config(&cli).and_then(|cfg| {
        if cli.command == "eval" {
            eval(&cli, &cfg).map(|_| 0)
        } else {
            suite(&cli, &cfg)
        }
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("toda-dual: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
