//! Suite settings and the flat `key=value` configuration format.

use std::str::FromStr;

use crate::mellinbarnes::PowerBase;

use super::VerifyError;

/// Settings shared by all suites. Unset options fall back to the suite
/// defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub hbar: f64,
    pub workers: usize,
    /// Restrict sampled suites to this rank.
    pub n: Option<usize>,
    /// Restrict operator suites to this index.
    pub k: Option<usize>,
    /// Use this spectral point instead of sampled ones.
    pub lambda: Option<Vec<f64>>,
    /// Use this position instead of sampled ones.
    pub q: Option<Vec<f64>>,
    /// Override the tolerance of numeric checks.
    pub tol: Option<f64>,
    /// Override the truncation radius.
    pub radius: Option<f64>,
    /// Power base for the open-chain checks (default `ħ`).
    pub base: Option<PowerBase>,
    /// Override the number of sampled points.
    pub points: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 1,
            hbar: 1.0,
            workers: 1,
            n: None,
            k: None,
            lambda: None,
            q: None,
            tol: None,
            radius: None,
            base: None,
            points: None,
        }
    }
}

/// Keys accepted in config files and as `--key value` flags.
pub const KEYS: [&str; 11] = [
    "seed", "hbar", "workers", "n", "k", "lambda", "q", "tol", "radius", "base", "points",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, VerifyError> {
    value
        .trim()
        .parse()
        .map_err(|_| VerifyError::Config(format!("invalid value '{value}' for '{key}'")))
}

/// Comma-separated reals.
pub fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, VerifyError> {
    value.split(',').map(|s| parse::<f64>(key, s)).collect()
}

impl SuiteConfig {
    /// Sets one key. Unknown keys and malformed values are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), VerifyError> {
        match key {
            "seed" => self.seed = parse(key, value)?,
            "hbar" => {
                let h: f64 = parse(key, value)?;
                if !(h > 0.0 && h.is_finite()) {
                    return Err(VerifyError::Config(format!("hbar must be positive, got {h}")));
                }
                self.hbar = h;
            }
            "workers" => {
                let w: usize = parse(key, value)?;
                if w == 0 {
                    return Err(VerifyError::Config("workers must be at least 1".into()));
                }
                self.workers = w;
            }
            "n" => self.n = Some(parse(key, value)?),
            "k" => self.k = Some(parse(key, value)?),
            "lambda" => self.lambda = Some(parse_list(key, value)?),
            "q" => self.q = Some(parse_list(key, value)?),
            "tol" => self.tol = Some(parse(key, value)?),
            "radius" => self.radius = Some(parse(key, value)?),
            "base" => {
                self.base = Some(value.trim().parse().map_err(VerifyError::Config)?);
            }
            "points" => self.points = Some(parse(key, value)?),
            other => return Err(VerifyError::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Applies a config file body: one `key = value` per line, `#` starts a
    /// comment, blank lines are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), VerifyError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| VerifyError::Config(format!("line {}: expected key=value", i + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| VerifyError::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self, VerifyError> {
        let mut c = SuiteConfig::default();
        c.apply_text(text)?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file() {
        let c = SuiteConfig::from_text("# comment\nseed = 7\nlambda=0.6,-0.6\n\nbase = hbar # trailing\n").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.lambda, Some(vec![0.6, -0.6]));
        assert_eq!(c.base, Some(PowerBase::Hbar));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SuiteConfig::from_text("colour=red").is_err());
        assert!(SuiteConfig::from_text("seed").is_err());
        assert!(SuiteConfig::from_text("hbar=-1").is_err());
        assert!(SuiteConfig::from_text("q=0.1,x").is_err());
        assert!(SuiteConfig::from_text("workers=0").is_err());
    }
}
