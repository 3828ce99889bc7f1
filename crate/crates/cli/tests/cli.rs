use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toda-dual"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_prints_value_and_error() {
    let o = run(&[
        "eval", "--n", "2", "--lambda", "0.6,-0.6", "--q", "0.2,-0.3", "--hbar", "1.0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v["re"].as_f64().unwrap().is_finite());
    assert!(v["est_error"].as_f64().unwrap() > 0.0);
    assert_eq!(v["base"], "ihbar");
}

#[test]
fn suite_emits_one_json_report_per_line() {
    let o = run(&["measure", "--seed", "3", "--points", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    for l in &lines {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        for key in ["check_name", "params", "residual", "tolerance", "pass", "runtime_ms"] {
            assert!(v.get(key).is_some(), "missing {key} in {l}");
        }
    }
}

#[test]
fn reports_are_reproducible() {
    let args = ["dual", "--n", "2", "--points", "1", "--seed", "5"];
    let strip = |s: String| -> Vec<serde_json::Value> {
        s.lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v.as_object_mut().unwrap().remove("runtime_ms");
                v
            })
            .collect()
    };
    let a = strip(stdout(&run(&args)));
    let b = strip(stdout(&run(&args)));
    assert_eq!(a.len(), 2);
    assert_eq!(a, b);
}

#[test]
fn config_file_and_flag_override() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# roundtrip settings\nseed = 4\npoints = 5\ntol = 1e-30").unwrap();
    let path = f.path().to_str().unwrap();
    // the config tolerance is impossible to meet
    let o = run(&["roundtrip", "--config", path]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["roundtrip", "--config", path, "--tol", "1e-8", "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("check_name,n,k,residual,tolerance,pass,runtime_ms,params"));
    assert_eq!(out.lines().count(), 1 + 12);
}

#[test]
fn usage_and_config_errors_exit_with_two() {
    assert_eq!(run(&["nosuch"]).status.code(), Some(2));
    assert_eq!(run(&["dual", "--hbar", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--lambda", "0.1,0.2"]).status.code(), Some(2));
    assert_eq!(
        run(&["identity", "--config", "/nonexistent/file"]).status.code(),
        Some(2)
    );
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "colour = blue").unwrap();
    assert_eq!(
        run(&["identity", "--config", f.path().to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["identity", "--json", "--csv"]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_with_three() {
    // N = 4 has no quadrature
    let o = run(&["eval", "--lambda", "0.1,0.5,0.9,-0.4", "--q", "0,0,0,0"]);
    assert_eq!(o.status.code(), Some(3));
}
