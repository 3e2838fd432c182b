//! CSV output. Reals are printed with 9 significant digits.

use std::cmp::Ordering;
use std::fmt::Write as _;

pub const SWEEP_HEADER: &str =
    "family,n,M,snr_db,mi_bits,capacity_bits,gap_bits,gap_db,avg_power,papr,method";

/// Formats `v` with `digits` significant digits in the shortest of fixed or
/// scientific notation (like C's `%g`), trailing zeros trimmed.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn sig9(v: f64) -> String {
    fmt_sig(v, 9)
}

/// One row of a sweep or comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub snr_db: f64,
    pub mi_bits: f64,
    pub capacity_bits: f64,
    pub gap_bits: f64,
    pub gap_db: f64,
    pub avg_power: f64,
    pub papr: f64,
    pub method: String,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        [
            self.family.clone(),
            self.n.to_string(),
            self.m.to_string(),
            sig9(self.snr_db),
            sig9(self.mi_bits),
            sig9(self.capacity_bits),
            sig9(self.gap_bits),
            sig9(self.gap_db),
            sig9(self.avg_power),
            sig9(self.papr),
            self.method.clone(),
        ]
        .join(",")
    }

    /// Canonical `(family, snr_db, n)` order.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.family
            .cmp(&other.family)
            .then(self.snr_db.total_cmp(&other.snr_db))
            .then(self.n.cmp(&other.n))
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

/// Generic CSV writer for the convergence tables.
pub fn csv<I, R>(header: &str, rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let mut first = true;
        for field in row {
            if !first {
                out.push(',');
            }
            first = false;
            let _ = write!(out, "{field}");
        }
        out.push('\n');
    }
    out
}
