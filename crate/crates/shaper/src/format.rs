//! Constellation JSON files.
//!
//! ```text
//! {"label": text, "family": text, "n": int, "power": real, "points": [[x, y], ...]}
//! ```
//!
//! Reals are written with 17 significant digits, so a written file reads back
//! bit-for-bit. The reader re-checks every constellation invariant.

use std::fmt::Write as _;
use std::path::Path;

use apsk_core::{Constellation, Family, SignalPoint};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstellation {
    label: String,
    family: String,
    n: usize,
    power: f64,
    points: Vec<[f64; 2]>,
}

/// 17 significant digits in scientific notation.
fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_json(c: &Constellation) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let label = serde_json::to_string(c.label()).expect("strings always serialize");
    let _ = writeln!(out, "  \"label\": {label},");
    let _ = writeln!(out, "  \"family\": \"{}\",", c.family());
    let _ = writeln!(out, "  \"n\": {},", c.n());
    let _ = writeln!(out, "  \"power\": {},", real(c.power()));
    out.push_str("  \"points\": [");
    for (i, p) in c.points().iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        let _ = write!(out, "    [{}, {}]", real(p.x), real(p.y));
    }
    out.push_str("\n  ]\n}\n");
    out
}

pub fn from_json(text: &str) -> Result<Constellation, String> {
    let raw: RawConstellation = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let family: Family = raw.family.parse()?;
    let points = raw
        .points
        .into_iter()
        .map(|[x, y]| SignalPoint::new(x, y))
        .collect();
    Constellation::from_points(raw.label, family, raw.n, raw.power, points).map_err(|e| e.to_string())
}

pub fn read_constellation(path: &Path) -> Result<Constellation, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::BadFile {
        path: path.to_owned(),
        reason: e.to_string(),
    })?;
    from_json(&text).map_err(|reason| CliError::BadFile {
        path: path.to_owned(),
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        for family in Family::ALL {
            for (n, power) in [(2, 1.0), (4, 1.7), (6, 0.3), (8, 10.0)] {
                let c = Constellation::build(family, n, power).unwrap();
                let back = from_json(&to_json(&c)).unwrap();
                assert_eq!(back, c);
                let bits = |c: &Constellation| {
                    c.points()
                        .iter()
                        .map(|p| (p.x.to_bits(), p.y.to_bits()))
                        .collect::<Vec<_>>()
                };
                assert_eq!(bits(&back), bits(&c));
            }
        }
    }

    #[test]
    fn writes_seventeen_digits() {
        let c = Constellation::build(Family::SquareQam, 2, 1.0).unwrap();
        let text = to_json(&c);
        assert!(text.contains("\"power\": 1.0000000000000000e0,"));
        assert!(text.contains("[-7.0710678118654757e-1, -7.0710678118654757e-1]"));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["points"].as_array().unwrap().len(), 4);
        assert_eq!(v["family"], "qam");
    }

    #[test]
    fn rejects_bad_documents() {
        let c = Constellation::build(Family::BoxMuller, 2, 1.0).unwrap();
        let good = to_json(&c);
        assert!(from_json(&good.replace("\"n\": 2", "\"n\": 3")).is_err());
        assert!(from_json(&good.replace("box_muller", "hexagonal")).is_err());
        assert!(from_json(&good.replace("\"label\"", "\"extra\": 1, \"label\"")).is_err());
        assert!(from_json("{}").is_err());
        let doc = r#"{"label":"d","family":"qam","n":2,"power":1,
            "points":[[0.7071067811865476,0.7071067811865476],[0.7071067811865476,0.7071067811865476],
                      [-0.7071067811865476,0.7071067811865476],[-0.7071067811865476,-0.7071067811865476]]}"#;
        let err = from_json(doc).unwrap_err();
        assert!(err.contains("coincide"), "{err}");
    }
}
