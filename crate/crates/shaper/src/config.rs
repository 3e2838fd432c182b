//! Run configuration.
//!
//! Config files are flat `key = value` text; `#` starts a comment. Lists are
//! comma separated and may contain inclusive ranges `a..b` or `a..b:step`.
//! Unknown and repeated keys are rejected. Command-line flags are applied on
//! top of the file.
//!
//! | key         | meaning                                   | example           |
//! |-------------|-------------------------------------------|-------------------|
//! | `families`  | constellation families                    | `box_muller,qam`  |
//! | `n`         | family parameters                         | `2..35`           |
//! | `snr_db`    | SNR grid in dB                            | `5,10,15`         |
//! | `power`     | power budget P                            | `1`               |
//! | `method`    | `quad` or `mc`                            | `quad`            |
//! | `order`     | Gauss–Hermite nodes per axis              | `40`              |
//! | `samples`   | Monte Carlo draws                         | `1000000`         |
//! | `seed`      | Monte Carlo seed                          | `42`              |
//! | `normalize` | rescale APSK to average power exactly P   | `false`           |
//! | `per_dimension` | report bits per real dimension        | `false`           |
//! | `out`       | output path                               | `fig1.csv`        |
//! | `lemma_k`   | lemma table rows; checked for all k ≤ max | `1,2,10,1000000`  |
//! | `audit_n`   | power-audit sizes                         | `1..256`          |
//! | `cf_n`      | characteristic-function scan sizes        | `1,2,4,8,16,32,64`|
//! | `cf_axis`   | t-grid axis (grid is its square)          | `-2,-1,0,1,2`     |

use std::collections::HashSet;
use std::path::PathBuf;
use std::str::FromStr;

use apsk_core::Family;

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "APSK_SHAPER_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    MonteCarlo,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quad" | "quadrature" => Ok(Method::Quadrature),
            "mc" | "monte_carlo" => Ok(Method::MonteCarlo),
            other => Err(format!("unknown method '{other}' (expected quad or mc)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub families: Vec<Family>,
    pub n_values: Vec<usize>,
    pub snr_db: Vec<f64>,
    pub power: f64,
    pub method: Method,
    pub order: usize,
    pub samples: u64,
    pub seed: Option<u64>,
    pub normalize: bool,
    pub per_dimension: bool,
    pub out: Option<PathBuf>,
    pub lemma_k: Vec<u64>,
    pub audit_n: Vec<usize>,
    pub cf_n: Vec<usize>,
    pub cf_axis: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::sweep()
    }
}

impl RunConfig {
    /// Gap-to-capacity sweep: box_muller and QAM, n = 2..35, 5/10/15 dB.
    pub fn sweep() -> Self {
        Self {
            families: vec![Family::BoxMuller, Family::SquareQam],
            n_values: (2..=35).collect(),
            snr_db: vec![5.0, 10.0, 15.0],
            power: 1.0,
            method: Method::Quadrature,
            order: apsk_core::mi::DEFAULT_ORDER,
            samples: 1_000_000,
            seed: None,
            normalize: false,
            per_dimension: false,
            out: None,
            lemma_k: vec![1, 2, 3, 5, 10, 100, 1_000, 10_000, 100_000, 1_000_000],
            audit_n: (1..=256).collect(),
            cf_n: vec![1, 2, 4, 8, 16, 32, 64],
            cf_axis: vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0],
        }
    }

    /// Achievable-rate comparison of the two APSK designs for n = 2, 4, 8.
    pub fn compare() -> Self {
        Self {
            families: vec![Family::BoxMuller, Family::DvbVariant],
            n_values: vec![2, 4, 8],
            snr_db: (0..=10).map(|k| 2.0 * k as f64).collect(),
            ..Self::sweep()
        }
    }

    pub fn convergence() -> Self {
        Self {
            families: vec![Family::BoxMuller, Family::DvbVariant],
            ..Self::sweep()
        }
    }

    /// Seed precedence: explicit value, then the environment, then the default.
    pub fn resolved_seed(&self) -> Result<u64, CliError> {
        if let Some(seed) = self.seed {
            return Ok(seed);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV}='{v}' is not a u64 seed"))),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }

    pub fn apply_file_text(&mut self, text: &str) -> Result<(), CliError> {
        let mut seen = HashSet::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            if !seen.insert(key.to_string()) {
                return Err(CliError::Usage(format!(
                    "config line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
            self.set(key, value.trim())
                .map_err(|e| CliError::Usage(format!("config line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "families" => self.families = parse_families(value)?,
            "n" => self.n_values = parse_usize_list(value)?,
            "snr_db" => self.snr_db = parse_f64_list(value)?,
            "power" => self.power = parse_scalar(key, value)?,
            "method" => self.method = value.parse()?,
            "order" => self.order = parse_scalar(key, value)?,
            "samples" => self.samples = parse_scalar(key, value)?,
            "seed" => self.seed = Some(parse_scalar(key, value)?),
            "normalize" => self.normalize = parse_scalar(key, value)?,
            "per_dimension" => self.per_dimension = parse_scalar(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "lemma_k" => {
                self.lemma_k = parse_usize_list(value)?
                    .into_iter()
                    .map(|k| k as u64)
                    .collect()
            }
            "audit_n" => self.audit_n = parse_usize_list(value)?,
            "cf_n" => self.cf_n = parse_usize_list(value)?,
            "cf_axis" => self.cf_axis = parse_f64_list(value)?,
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.families.is_empty() {
            return usage("no families selected".into());
        }
        if self.n_values.is_empty() {
            return usage("no n values selected".into());
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|v| !v.is_finite()) {
            return usage("snr grid must be non-empty and finite".into());
        }
        if !(self.power.is_finite() && self.power > 0.0) {
            return usage(format!("power must be > 0, got {}", self.power));
        }
        if self.order < 2 {
            return usage(format!("order must be at least 2, got {}", self.order));
        }
        if self.samples == 0 {
            return usage("samples must be at least 1".into());
        }
        for &family in &self.families {
            for &n in &self.n_values {
                family.validate(n, self.power)?;
            }
        }
        Ok(())
    }

    pub fn validate_convergence(&self) -> Result<(), CliError> {
        let usage = |m: &str| Err(CliError::Usage(m.into()));
        if !(self.power.is_finite() && self.power > 0.0) {
            return usage("power must be > 0");
        }
        if self.lemma_k.is_empty() || self.lemma_k.contains(&0) {
            return usage("lemma_k must be non-empty with k >= 1");
        }
        if self.audit_n.is_empty() || self.audit_n.contains(&0) {
            return usage("audit_n must be non-empty with n >= 1");
        }
        if self.cf_n.is_empty() || self.cf_n.windows(2).any(|w| w[0] >= w[1]) || self.cf_n.contains(&0) {
            return usage("cf_n must be non-empty, ascending and >= 1");
        }
        if self.cf_axis.is_empty() || self.cf_axis.iter().any(|v| !v.is_finite()) {
            return usage("cf_axis must be non-empty and finite");
        }
        Ok(())
    }
}

fn parse_scalar<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("invalid value '{value}' for '{key}'"))
}

pub fn parse_families(value: &str) -> Result<Vec<Family>, String> {
    value
        .split(',')
        .map(|s| s.trim().parse::<Family>())
        .collect()
}

/// `2..35`, `2,4,8`, `2..16:2` or any comma-separated mix.
pub fn parse_usize_list(value: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim) {
        let bad = || format!("invalid integer list item '{item}'");
        if let Some((start, rest)) = item.split_once("..") {
            let (end, step) = match rest.split_once(':') {
                Some((end, step)) => (end, step.trim().parse::<usize>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let start: usize = start.trim().parse().map_err(|_| bad())?;
            let end: usize = end.trim().parse().map_err(|_| bad())?;
            if step == 0 || end < start {
                return Err(bad());
            }
            out.extend((start..=end).step_by(step));
        } else {
            out.push(item.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

/// Like [`parse_usize_list`] for reals; ranges default to step 1.
pub fn parse_f64_list(value: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim) {
        let bad = || format!("invalid real list item '{item}'");
        // A leading '-' must not be mistaken for a range separator.
        if let Some(idx) = item.get(1..).and_then(|s| s.find("..")).map(|i| i + 1) {
            let (start, rest) = (&item[..idx], &item[idx + 2..]);
            let (end, step) = match rest.split_once(':') {
                Some((end, step)) => (end, step.trim().parse::<f64>().map_err(|_| bad())?),
                None => (rest, 1.0),
            };
            let start: f64 = start.trim().parse().map_err(|_| bad())?;
            let end: f64 = end.trim().parse().map_err(|_| bad())?;
            if step.is_nan() || step <= 0.0 || end < start || !start.is_finite() || !end.is_finite() {
                return Err(bad());
            }
            let count = ((end - start) / step + 1e-9).floor() as usize;
            out.extend((0..=count).map(|i| start + i as f64 * step));
        } else {
            out.push(item.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sweep_grid() {
        let cfg = RunConfig::sweep();
        assert_eq!(cfg.n_values.len(), 34);
        assert_eq!(cfg.families.len() * cfg.n_values.len() * cfg.snr_db.len(), 204);
        cfg.validate().unwrap();
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_usize_list("2..5,8").unwrap(), vec![2, 3, 4, 5, 8]);
        assert_eq!(parse_usize_list("2..10:4").unwrap(), vec![2, 6, 10]);
        assert!(parse_usize_list("5..2").is_err());
        assert!(parse_usize_list("x").is_err());
        assert_eq!(parse_f64_list("-2..2").unwrap(), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(parse_f64_list("0..1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_f64_list("-0.5, 3").unwrap(), vec![-0.5, 3.0]);
        assert!(parse_f64_list("1..0").is_err());
    }

    #[test]
    fn file_text() {
        let mut cfg = RunConfig::sweep();
        cfg.apply_file_text(
            "# comment\nfamilies = box_muller, dvb_variant\nn = 2,4\nsnr_db = 10 # inline\nmethod = mc\nseed = 7\n",
        )
        .unwrap();
        assert_eq!(cfg.families, vec![Family::BoxMuller, Family::DvbVariant]);
        assert_eq!(cfg.n_values, vec![2, 4]);
        assert_eq!(cfg.snr_db, vec![10.0]);
        assert_eq!(cfg.method, Method::MonteCarlo);
        assert_eq!(cfg.resolved_seed().unwrap(), 7);

        let mut cfg = RunConfig::sweep();
        assert!(cfg.apply_file_text("colour = red").is_err());
        assert!(cfg.apply_file_text("n = 2\nn = 3").is_err());
        assert!(cfg.apply_file_text("just words").is_err());
    }

    #[test]
    fn validation_catches_bad_grids() {
        let mut cfg = RunConfig::compare();
        cfg.n_values = vec![3];
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::sweep();
        cfg.order = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::convergence();
        cfg.cf_n = vec![4, 2];
        assert!(cfg.validate_convergence().is_err());
    }
}
