//! Structured results of verification checks.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

/// Either a numeric residual or the outcome of an exact comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Residual {
    Value(f64),
    Exact {
        exact_pass: bool,
    },
    /// The check did not produce a residual; serialized as `null`.
    Missing,
}

/// Inputs that reproduce a check. Unused fields are omitted from output.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl CheckParams {
    pub fn with_extra(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.extra.insert(key.to_string(), value.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub params: CheckParams,
    pub residual: Residual,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_ms: u64,
}

impl CheckReport {
    /// Numeric report; passes iff `residual ≤ tolerance` (NaN fails).
    pub fn numeric(name: &str, params: CheckParams, residual: f64, tolerance: f64, started: Instant) -> Self {
        CheckReport {
            check_name: name.to_string(),
            params,
            residual: Residual::Value(residual),
            tolerance,
            pass: residual <= tolerance,
            runtime_ms: started.elapsed().as_millis() as u64,
        }
    }

    /// Exact comparison; tolerance is zero.
    pub fn exact(name: &str, params: CheckParams, pass: bool, started: Instant) -> Self {
        CheckReport {
            check_name: name.to_string(),
            params,
            residual: Residual::Exact { exact_pass: pass },
            tolerance: 0.0,
            pass,
            runtime_ms: started.elapsed().as_millis() as u64,
        }
    }

    /// A failed report for a check that could not be completed.
    pub fn failed(name: &str, mut params: CheckParams, error: String, started: Instant) -> Self {
        params.error = Some(error);
        CheckReport {
            check_name: name.to_string(),
            params,
            residual: Residual::Missing,
            tolerance: 0.0,
            pass: false,
            runtime_ms: started.elapsed().as_millis() as u64,
        }
    }

    /// Numeric residual, if any.
    pub fn residual_value(&self) -> Option<f64> {
        match self.residual {
            Residual::Value(v) => Some(v),
            Residual::Exact { .. } | Residual::Missing => None,
        }
    }

    /// One JSON object; non-finite residuals become `null`.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_report_round_trips() {
        let p = CheckParams {
            n: Some(2),
            k: Some(1),
            ..Default::default()
        }
        .with_extra("ratio", 4.01);
        let r = CheckReport::numeric("x", p, 1e-9, 1e-8, Instant::now());
        assert!(r.pass);
        let line = r.to_json_line();
        assert!(line.contains("\"residual\":1e-9"));
        assert!(!line.contains("lambda"));
        let back: CheckReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn exact_report_serializes_flag() {
        let r = CheckReport::exact("e", CheckParams::default(), true, Instant::now());
        let line = r.to_json_line();
        assert!(line.contains("\"residual\":{\"exact_pass\":true}"));
        assert_eq!(r.tolerance, 0.0);
    }

    #[test]
    fn nan_residual_fails() {
        let r = CheckReport::numeric("n", CheckParams::default(), f64::NAN, 1.0, Instant::now());
        assert!(!r.pass);
        let f = CheckReport::failed("f", CheckParams::default(), "boom".into(), Instant::now());
        let line = f.to_json_line();
        assert!(line.contains("\"residual\":null"));
        let back: CheckReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back.residual, Residual::Missing);
    }
}
