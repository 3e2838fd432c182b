//! Numerical checks behind the capacity argument.
//!
//! * the logarithmic-sum inequality `k ln k − k ≤ Σ_{j<k} ln(j + 1/2)`,
//! * the resulting power bound `E‖W_n‖² ≤ P` for the APSK families,
//! * pointwise convergence of the characteristic function of the uniform law
//!   on the constellation to that of a circular Gaussian of variance `P/2` per
//!   axis.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::constellation::{Constellation, Family};
use crate::error::{Error, Result};
use crate::math::{self, KahanSum};

/// Value of a characteristic function.
pub type CfValue = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfPoint {
    pub t1: f64,
    pub t2: f64,
}

impl CfPoint {
    pub const fn new(t1: f64, t2: f64) -> Self {
        Self { t1, t2 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.t1 * self.t1 + self.t2 * self.t2
    }
}

/// `{−2, −1, −0.5, 0, 0.5, 1, 2}²`, row-major in `t1`.
pub fn default_t_grid() -> Vec<CfPoint> {
    const AXIS: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
    AXIS.iter()
        .flat_map(|&t1| AXIS.iter().map(move |&t2| CfPoint::new(t1, t2)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaRow {
    pub k: u64,
    /// `k ln k − k`
    pub lhs: f64,
    /// `Σ_{j=0}^{k−1} ln(j + 1/2)`
    pub rhs: f64,
}

impl LemmaRow {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 1e-9 * self.rhs.abs()
    }

    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

fn lemma_lhs(k: u64) -> f64 {
    let kf = k as f64;
    kf * math::ln(kf) - kf
}

pub fn lemma_gap(k: u64) -> Result<LemmaRow> {
    if k == 0 {
        return Err(Error::LemmaIndex);
    }
    let mut rhs = KahanSum::default();
    for j in 0..k {
        rhs.add(math::ln(j as f64 + 0.5));
    }
    Ok(LemmaRow {
        k,
        lhs: lemma_lhs(k),
        rhs: rhs.total(),
    })
}

/// Rows for `k = 1, 2, …` with the right-hand side accumulated incrementally;
/// row `k` equals `lemma_gap(k)`.
pub fn lemma_rows() -> impl Iterator<Item = LemmaRow> {
    let mut acc = KahanSum::default();
    (1u64..).map(move |k| {
        acc.add(math::ln((k - 1) as f64 + 0.5));
        LemmaRow {
            k,
            lhs: lemma_lhs(k),
            rhs: acc.total(),
        }
    })
}

/// `(1/M) Σ_w exp(i⟨t, w⟩)` over the points of `c`.
pub fn point_set_cf(c: &Constellation, t: CfPoint) -> CfValue {
    let (mut re, mut im) = (0.0, 0.0);
    for p in c.points() {
        let (s, co) = math::sin_cos(t.t1 * p.x + t.t2 * p.y);
        re += co;
        im += s;
    }
    let m = c.len() as f64;
    Complex64::new(re / m, im / m)
}

/// Discrete characteristic function of the uniform law on `family(n, power)`.
pub fn empirical_cf(family: Family, n: usize, power: f64, t: CfPoint) -> Result<CfValue> {
    Ok(point_set_cf(&Constellation::build(family, n, power)?, t))
}

/// The same quantity as [`empirical_cf`] for an APSK family, evaluated as the
/// midpoint double sum of `ψ(u, v) = exp(i√(−P ln u)(t1 cos 2πv + t2 sin 2πv))`
/// over the family's `(u, v)` grid, never materialising the points.
pub fn riemann_sum_cf(family: Family, n: usize, power: f64, t: CfPoint) -> Result<CfValue> {
    family.validate(n, power)?;
    if !family.is_apsk() {
        return Err(Error::Invariant {
            family,
            reason: "the grid form exists only for APSK families".into(),
        });
    }
    let us = family.radial_grid(n);
    let vs = family.angular_grid(n);
    let (mut re, mut im) = (0.0, 0.0);
    for &u in &us {
        let amp = math::sqrt(-power * math::ln(u));
        for &v in &vs {
            let (s, c) = math::sin_cos(2.0 * PI * v);
            let (ps, pc) = math::sin_cos(amp * (t.t1 * c + t.t2 * s));
            re += pc;
            im += ps;
        }
    }
    let cells = (us.len() * vs.len()) as f64;
    Ok(Complex64::new(re / cells, im / cells))
}

/// Characteristic function of a circular Gaussian with variance `P/2` per axis.
pub fn gaussian_cf(power: f64, t: CfPoint) -> Result<CfValue> {
    if !(power.is_finite() && power > 0.0) {
        return Err(Error::InvalidPower(power));
    }
    Ok(Complex64::new(math::exp(-power * t.norm_sqr() / 4.0), 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfErrorRow {
    pub n: usize,
    pub t: CfPoint,
    pub empirical: CfValue,
    pub gaussian: CfValue,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub family: Family,
    pub power: f64,
    /// One row per `(n, t)`, `n`-major in the order given.
    pub rows: Vec<CfErrorRow>,
    /// `(n, max_t error)` per `n`.
    pub max_error: Vec<(usize, f64)>,
}

impl ConvergenceReport {
    pub fn error_at(&self, n: usize, t: CfPoint) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.t == t)
            .map(|r| r.error)
    }

    pub fn max_error_at(&self, n: usize) -> Option<f64> {
        self.max_error.iter().find(|(m, _)| *m == n).map(|&(_, e)| e)
    }

    /// The largest `n` has a strictly smaller worst-case error than the
    /// smallest `n`. Trivially true for a single `n`.
    pub fn ordering_holds(&self) -> bool {
        match (self.max_error.first(), self.max_error.last()) {
            (Some(first), Some(last)) if self.max_error.len() > 1 => last.1 < first.1,
            _ => true,
        }
    }
}

pub fn cf_convergence_scan(
    family: Family,
    n_list: &[usize],
    power: f64,
    t_grid: &[CfPoint],
) -> Result<ConvergenceReport> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadSizeList);
    }
    let mut rows = Vec::with_capacity(n_list.len() * t_grid.len());
    let mut max_error = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let c = Constellation::build(family, n, power)?;
        let mut worst = 0.0f64;
        for &t in t_grid {
            let empirical = point_set_cf(&c, t);
            let gaussian = gaussian_cf(power, t)?;
            let error = (empirical - gaussian).norm();
            worst = worst.max(error);
            rows.push(CfErrorRow {
                n,
                t,
                empirical,
                gaussian,
                error,
            });
        }
        max_error.push((n, worst));
    }
    Ok(ConvergenceReport {
        family,
        power,
        rows,
        max_error,
    })
}

/// Average power of `family(n, power)` from the grid, without building points:
/// `−(P/R) Σ_k ln u_k` over the `R` radial grid values. QAM returns `P`
/// (`0` for the single-point grid).
pub fn closed_form_power(family: Family, n: usize, power: f64) -> Result<f64> {
    family.validate(n, power)?;
    if !family.is_apsk() {
        return Ok(if n == 1 { 0.0 } else { power });
    }
    let us = family.radial_grid(n);
    let mut acc = KahanSum::default();
    for &u in &us {
        acc.add(math::ln(u));
    }
    Ok(-power * acc.total() / us.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAuditRow {
    pub n: usize,
    pub average_power: f64,
    pub closed_form: f64,
    pub power: f64,
    /// `power − average_power`
    pub slack: f64,
}

impl PowerAuditRow {
    /// Strictly positive slack, as required for the APSK families.
    pub fn holds(&self) -> bool {
        self.slack > 0.0
    }
}

pub fn power_audit(family: Family, n_values: &[usize], power: f64) -> Result<Vec<PowerAuditRow>> {
    n_values
        .iter()
        .map(|&n| {
            let c = Constellation::build(family, n, power)?;
            let average_power = c.average_power();
            Ok(PowerAuditRow {
                n,
                average_power,
                closed_form: closed_form_power(family, n, power)?,
                power,
                slack: power - average_power,
            })
        })
        .collect()
}
