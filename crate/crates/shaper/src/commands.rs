//! Command implementations. Everything here returns data; the binary decides
//! where it goes and which exit code to use.

use apsk_core::convergence::{self, CfPoint};
use apsk_core::mi::{mi_quadrature_with_rule, MiEstimate};
use apsk_core::{
    gap_metrics, gaussian_capacity, mi_monte_carlo, Constellation, Error as CoreError, Family,
    GaussHermite, SnrSpec,
};

use crate::config::{Method, RunConfig};
use crate::error::CliError;
use crate::format;
use crate::table::{csv, sig9, SweepRow};

/// JSON text for one constellation.
pub fn generate(family: Family, n: usize, power: f64, normalize: bool) -> Result<String, CliError> {
    let c = Constellation::build(family, n, power)?;
    let c = if normalize { c.normalized() } else { c };
    Ok(format::to_json(&c))
}

/// Evaluates constellations under one configuration, reusing the quadrature
/// rule across cells.
pub struct Evaluator {
    method: Method,
    rule: Option<GaussHermite>,
    samples: u64,
    seed: u64,
    per_dimension: bool,
}

impl Evaluator {
    pub fn new(cfg: &RunConfig) -> Result<Self, CliError> {
        let rule = match cfg.method {
            Method::Quadrature => Some(GaussHermite::new(cfg.order)?),
            Method::MonteCarlo => None,
        };
        Ok(Self {
            method: cfg.method,
            rule,
            samples: cfg.samples,
            seed: cfg.resolved_seed()?,
            per_dimension: cfg.per_dimension,
        })
    }

    pub fn estimate(&self, c: &Constellation, snr: SnrSpec) -> Result<MiEstimate, CliError> {
        let est = match (&self.rule, self.method) {
            (Some(rule), Method::Quadrature) => mi_quadrature_with_rule(c, snr, rule)?,
            _ => mi_monte_carlo(c, snr, self.samples, self.seed)?,
        };
        let ceiling = (c.len() as f64).log2() + 1e-9;
        if !est.value.is_finite() || est.value < 0.0 || est.value > ceiling {
            return Err(CliError::Estimator(format!(
                "{} at {} dB: mutual information {} outside [0, log2 M]",
                c.label(),
                snr.db(),
                est.value
            )));
        }
        Ok(est)
    }

    pub fn row(&self, c: &Constellation, snr_db: f64) -> Result<SweepRow, CliError> {
        let snr = SnrSpec::from_db(snr_db)?;
        let est = self.estimate(c, snr)?;
        let gap = gap_metrics(est.value, snr).map_err(|e| match e {
            CoreError::MiAboveCapacity { .. } | CoreError::InvalidMi(_) => {
                CliError::Estimator(format!("{} at {snr_db} dB: {e}", c.label()))
            }
            other => CliError::Domain(other),
        })?;
        let scale = if self.per_dimension { 0.5 } else { 1.0 };
        let capacity = gaussian_capacity(snr);
        Ok(SweepRow {
            family: c.family().as_str().to_string(),
            n: c.n(),
            m: c.len(),
            snr_db,
            mi_bits: scale * est.value,
            capacity_bits: scale * capacity,
            gap_bits: scale * gap.bits,
            gap_db: gap.db,
            avg_power: c.average_power(),
            papr: c.papr().unwrap_or(f64::NAN),
            method: est.method.as_str().to_string(),
        })
    }
}

fn build(cfg: &RunConfig, family: Family, n: usize) -> Result<Constellation, CliError> {
    let c = Constellation::build(family, n, cfg.power)?;
    Ok(if cfg.normalize { c.normalized() } else { c })
}

/// Rows for every `(family, n, snr)` cell in canonical `(family, snr_db, n)`
/// order. Any failing cell aborts the whole grid.
pub fn grid(cfg: &RunConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    let eval = Evaluator::new(cfg)?;
    let mut rows = Vec::with_capacity(cfg.families.len() * cfg.n_values.len() * cfg.snr_db.len());
    for &family in &cfg.families {
        for &n in &cfg.n_values {
            let c = build(cfg, family, n)?;
            for &snr_db in &cfg.snr_db {
                rows.push(eval.row(&c, snr_db)?);
            }
        }
    }
    rows.sort_by(SweepRow::canonical_cmp);
    Ok(rows)
}

pub fn sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>, CliError> {
    grid(cfg)
}

pub fn compare(cfg: &RunConfig) -> Result<Vec<SweepRow>, CliError> {
    if cfg.families.iter().any(|f| !f.is_apsk()) {
        return Err(CliError::Usage("compare takes APSK families only".into()));
    }
    grid(cfg)
}

pub const LEMMA_HEADER: &str = "k,lhs,rhs,margin,holds";
pub const POWER_HEADER: &str = "family,n,average_power,closed_form,power,slack,holds";
pub const CF_HEADER: &str = "family,n,t1,t2,cf_re,cf_im,gaussian_cf,error";

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceOutput {
    pub lemma_csv: String,
    pub power_csv: String,
    pub cf_csv: String,
    /// Failed contracts; empty when everything holds.
    pub violations: Vec<String>,
}

fn valid_sizes(family: Family, ns: &[usize], power: f64) -> Vec<usize> {
    ns.iter()
        .copied()
        .filter(|&n| family.validate(n, power).is_ok())
        .collect()
}

pub fn convergence(cfg: &RunConfig) -> Result<ConvergenceOutput, CliError> {
    cfg.validate_convergence()?;
    let mut violations = Vec::new();

    let k_max = *cfg.lemma_k.iter().max().expect("validated non-empty");
    let mut lemma_rows = Vec::new();
    let mut first_failure = None;
    for row in convergence::lemma_rows().take(k_max as usize) {
        if !row.holds() && first_failure.is_none() {
            first_failure = Some(row.k);
        }
        if cfg.lemma_k.contains(&row.k) {
            lemma_rows.push(vec![
                row.k.to_string(),
                sig9(row.lhs),
                sig9(row.rhs),
                sig9(row.margin()),
                row.holds().to_string(),
            ]);
        }
    }
    if let Some(k) = first_failure {
        violations.push(format!("lemma fails at k = {k}"));
    }

    let apsk: Vec<Family> = cfg.families.iter().copied().filter(Family::is_apsk).collect();
    let mut power_rows = Vec::new();
    for &family in &apsk {
        let sizes = valid_sizes(family, &cfg.audit_n, cfg.power);
        for row in convergence::power_audit(family, &sizes, cfg.power)? {
            if !row.holds() {
                violations.push(format!("{family} n = {}: slack {} is not positive", row.n, row.slack));
            }
            power_rows.push(vec![
                family.to_string(),
                row.n.to_string(),
                sig9(row.average_power),
                sig9(row.closed_form),
                sig9(row.power),
                sig9(row.slack),
                row.holds().to_string(),
            ]);
        }
    }

    let t_grid: Vec<CfPoint> = cfg
        .cf_axis
        .iter()
        .flat_map(|&t1| cfg.cf_axis.iter().map(move |&t2| CfPoint::new(t1, t2)))
        .collect();
    let mut cf_rows = Vec::new();
    for &family in &cfg.families {
        let sizes = valid_sizes(family, &cfg.cf_n, cfg.power);
        if sizes.is_empty() {
            continue;
        }
        let report = convergence::cf_convergence_scan(family, &sizes, cfg.power, &t_grid)?;
        if family.is_apsk() && !report.ordering_holds() {
            violations.push(format!(
                "{family}: characteristic-function error at n = {} is not below n = {}",
                sizes[sizes.len() - 1],
                sizes[0]
            ));
        }
        for r in &report.rows {
            cf_rows.push(vec![
                family.to_string(),
                r.n.to_string(),
                sig9(r.t.t1),
                sig9(r.t.t2),
                sig9(r.empirical.re),
                sig9(r.empirical.im),
                sig9(r.gaussian.re),
                sig9(r.error),
            ]);
        }
    }

    Ok(ConvergenceOutput {
        lemma_csv: csv(LEMMA_HEADER, lemma_rows),
        power_csv: csv(POWER_HEADER, power_rows),
        cf_csv: csv(CF_HEADER, cf_rows),
        violations,
    })
}
