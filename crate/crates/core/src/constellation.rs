//! Constellation families and their geometric metrics.
//!
//! The two APSK families share one construction: a finite grid of
//! `(u, v) ∈ (0, 1)²` is mapped through
//!
//! ```text
//! φ(u, v) = √(−P ln u) · (cos 2πv, sin 2πv)
//! ```
//!
//! so every `u` value becomes a ring and every `v` value a phase on it. Points
//! are stored in lexicographic `(ring, phase)` order.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::math::{self, KahanSum};

/// Relative tolerance used by the structural invariants.
pub const INVARIANT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalPoint {
    pub x: f64,
    pub y: f64,
}

impl SignalPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn energy(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        math::sqrt(self.energy())
    }

    #[inline]
    pub fn distance(&self, other: &SignalPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        math::sqrt(dx * dx + dy * dy)
    }

    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = math::sin_cos(angle);
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// One circle of an APSK constellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSpec {
    pub index: usize,
    pub radius: f64,
    /// Phase of the first point on the ring, in radians.
    pub phase_offset: f64,
    pub points_per_ring: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    BoxMuller,
    DvbVariant,
    SquareQam,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::BoxMuller, Family::DvbVariant, Family::SquareQam];

    /// Short name used on the command line and in files.
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::BoxMuller => "box_muller",
            Family::DvbVariant => "dvb_variant",
            Family::SquareQam => "qam",
        }
    }

    pub fn is_apsk(&self) -> bool {
        !matches!(self, Family::SquareQam)
    }

    /// Checks `(n, power)` against the family's preconditions.
    pub fn validate(&self, n: usize, power: f64) -> Result<()> {
        if !(power.is_finite() && power > 0.0) {
            return Err(Error::InvalidPower(power));
        }
        match self {
            Family::DvbVariant => {
                if n < 2 {
                    return Err(Error::SizeTooSmall { n, min: 2 });
                }
                if !n.is_multiple_of(2) {
                    return Err(Error::OddSize(n));
                }
            }
            _ => {
                if n < 1 {
                    return Err(Error::SizeTooSmall { n, min: 1 });
                }
            }
        }
        Ok(())
    }

    /// Radial grid values `u_k` (one per ring). Empty for QAM.
    pub fn radial_grid(&self, n: usize) -> Vec<f64> {
        let nf = n as f64;
        match self {
            Family::BoxMuller => (0..n).map(|k| (2 * k + 1) as f64 / (2.0 * nf)).collect(),
            Family::DvbVariant => (0..n / 2).map(|k| (2 * k + 1) as f64 / nf).collect(),
            Family::SquareQam => Vec::new(),
        }
    }

    /// Angular grid values `v_l` (one per point on a ring). Empty for QAM.
    pub fn angular_grid(&self, n: usize) -> Vec<f64> {
        let nf = n as f64;
        match self {
            Family::BoxMuller => (0..n).map(|l| (2 * l + 1) as f64 / (2.0 * nf)).collect(),
            Family::DvbVariant => (0..2 * n).map(|l| (2 * l + 1) as f64 / (4.0 * nf)).collect(),
            Family::SquareQam => Vec::new(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "box_muller" | "box_muller_apsk" | "bm" => Ok(Family::BoxMuller),
            "dvb_variant" | "dvb_variant_apsk" | "dvb" => Ok(Family::DvbVariant),
            "qam" | "square_qam" => Ok(Family::SquareQam),
            other => Err(format!(
                "unknown family '{other}' (expected box_muller, dvb_variant or qam)"
            )),
        }
    }
}

/// An immutable, equiprobable signal set.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    label: String,
    family: Family,
    n: usize,
    power: f64,
    points: Vec<SignalPoint>,
    rings: Option<Vec<RingSpec>>,
}

/// `n²` points on `n` rings of `n` points, from the Box–Muller map on the grid
/// `{1/(2n) + k/n}²`.
pub fn box_muller_apsk(n: usize, power: f64) -> Result<Constellation> {
    Family::BoxMuller.validate(n, power)?;
    Ok(apsk(Family::BoxMuller, n, power))
}

/// `n²` points on `n/2` rings of `2n` points.
pub fn dvb_variant_apsk(n: usize, power: f64) -> Result<Constellation> {
    Family::DvbVariant.validate(n, power)?;
    Ok(apsk(Family::DvbVariant, n, power))
}

/// Uniformly spaced `n × n` grid scaled to average power exactly `power`.
pub fn square_qam(n: usize, power: f64) -> Result<Constellation> {
    Family::SquareQam.validate(n, power)?;
    let points = if n == 1 {
        alloc::vec![SignalPoint::new(0.0, 0.0)]
    } else {
        // Per-axis second moment of {2i - n + 1} is (n² - 1)/3.
        let d = math::sqrt(3.0 * power / (2.0 * ((n * n - 1) as f64)));
        let coord = |i: usize| (2.0 * i as f64 - n as f64 + 1.0) * d;
        let mut pts = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                pts.push(SignalPoint::new(coord(i), coord(j)));
            }
        }
        pts
    };
    Ok(Constellation {
        label: default_label(Family::SquareQam, n),
        family: Family::SquareQam,
        n,
        power,
        points,
        rings: None,
    })
}

fn apsk(family: Family, n: usize, power: f64) -> Constellation {
    let us = family.radial_grid(n);
    let vs = family.angular_grid(n);
    let phases: Vec<(f64, f64)> = vs.iter().map(|&v| math::sin_cos(2.0 * PI * v)).collect();
    let mut points = Vec::with_capacity(us.len() * vs.len());
    let mut rings = Vec::with_capacity(us.len());
    for (k, &u) in us.iter().enumerate() {
        let radius = math::sqrt(-power * math::ln(u));
        for &(s, c) in &phases {
            points.push(SignalPoint::new(radius * c, radius * s));
        }
        rings.push(RingSpec {
            index: k,
            radius,
            phase_offset: 2.0 * PI * vs[0],
            points_per_ring: vs.len(),
        });
    }
    Constellation {
        label: default_label(family, n),
        family,
        n,
        power,
        points,
        rings: Some(rings),
    }
}

fn default_label(family: Family, n: usize) -> String {
    match family {
        Family::SquareQam => format!("{}-QAM", n * n),
        _ => format!("{}-APSK ({family}, n={n})", n * n),
    }
}

impl Constellation {
    /// Builds a member of `family`.
    pub fn build(family: Family, n: usize, power: f64) -> Result<Self> {
        match family {
            Family::BoxMuller => box_muller_apsk(n, power),
            Family::DvbVariant => dvb_variant_apsk(n, power),
            Family::SquareQam => square_qam(n, power),
        }
    }

    /// Validates an externally supplied point list against every invariant of
    /// `family` and wraps it. Points may be rotated relative to the canonical
    /// construction but must sit on the family's rings (either at the natural
    /// radii or at the radii rescaled to average power exactly `power`).
    pub fn from_points(
        label: impl Into<String>,
        family: Family,
        n: usize,
        power: f64,
        points: Vec<SignalPoint>,
    ) -> Result<Self> {
        family.validate(n, power)?;
        let invariant = |reason: String| Error::Invariant { family, reason };
        if points.len() != n * n {
            return Err(invariant(format!(
                "expected n² = {} points, got {}",
                n * n,
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(invariant(format!("point {i} is not finite")));
        }
        if let Some((a, b)) = find_duplicate(&points) {
            return Err(invariant(format!("points {a} and {b} coincide")));
        }
        let avg = mean_energy(&points);
        let rings = if family.is_apsk() {
            if avg > power * (1.0 + INVARIANT_TOL) {
                return Err(invariant(format!(
                    "average power {avg} exceeds the budget {power}"
                )));
            }
            let canonical = apsk(family, n, power);
            let natural = canonical.rings.unwrap_or_default();
            let scale = math::sqrt(power / canonical_power(&canonical.points));
            let scaled: Vec<RingSpec> = natural
                .iter()
                .map(|r| RingSpec {
                    radius: r.radius * scale,
                    ..*r
                })
                .collect();
            let rings = if ring_layout_matches(&points, &natural) {
                natural
            } else if ring_layout_matches(&points, &scaled) {
                scaled
            } else {
                return Err(invariant(
                    "points do not match the family's ring radii and ring occupancy".to_string(),
                ));
            };
            Some(rings)
        } else {
            if n > 1 && (avg - power).abs() > INVARIANT_TOL * power {
                return Err(invariant(format!(
                    "average power {avg} differs from {power}"
                )));
            }
            None
        };
        Ok(Self {
            label: label.into(),
            family,
            n,
            power,
            points,
            rings,
        })
    }

    /// Rescales an APSK constellation so its average power is exactly the
    /// nominal power. QAM is already normalised and returned unchanged.
    pub fn normalized(&self) -> Self {
        if !self.family.is_apsk() {
            return self.clone();
        }
        let scale = math::sqrt(self.power / self.average_power());
        Self {
            label: self.label.clone(),
            family: self.family,
            n: self.n,
            power: self.power,
            points: self
                .points
                .iter()
                .map(|p| SignalPoint::new(p.x * scale, p.y * scale))
                .collect(),
            rings: self.rings.as_ref().map(|rs| {
                rs.iter()
                    .map(|r| RingSpec {
                        radius: r.radius * scale,
                        ..*r
                    })
                    .collect()
            }),
        }
    }

    /// Returns the same signal set rotated by `angle` radians about the origin.
    pub fn rotated(&self, angle: f64) -> Self {
        let mut out = self.clone();
        for p in &mut out.points {
            *p = p.rotated(angle);
        }
        if let Some(rings) = &mut out.rings {
            for r in rings {
                r.phase_offset += angle;
            }
        }
        out
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Nominal power budget `P`.
    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn points(&self) -> &[SignalPoint] {
        &self.points
    }

    pub fn rings(&self) -> Option<&[RingSpec]> {
        self.rings.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Mean of `‖w‖²` over the points.
    pub fn average_power(&self) -> f64 {
        mean_energy(&self.points)
    }

    /// Largest `‖w‖²`.
    pub fn peak_power(&self) -> f64 {
        self.points.iter().map(SignalPoint::energy).fold(0.0, f64::max)
    }

    pub fn papr(&self) -> Result<f64> {
        let avg = self.average_power();
        if avg <= 0.0 {
            return Err(Error::ZeroPower);
        }
        Ok(self.peak_power() / avg)
    }

    /// Minimum pairwise Euclidean distance, exact over all pairs.
    pub fn min_distance(&self) -> Result<f64> {
        if self.points.len() < 2 {
            return Err(Error::TooFewPoints("min_distance"));
        }
        let mut best = f64::INFINITY;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                best = best.min(a.distance(b));
            }
        }
        Ok(best)
    }
}

fn mean_energy(points: &[SignalPoint]) -> f64 {
    let mut acc = KahanSum::default();
    for p in points {
        acc.add(p.energy());
    }
    acc.total() / points.len() as f64
}

fn canonical_power(points: &[SignalPoint]) -> f64 {
    mean_energy(points)
}

/// First pair of bitwise-equal points, if any (indices in input order).
fn find_duplicate(points: &[SignalPoint]) -> Option<(usize, usize)> {
    let key = |p: &SignalPoint| {
        // -0.0 and 0.0 denote the same point.
        let norm = |v: f64| if v == 0.0 { 0.0f64 } else { v };
        (norm(p.x).to_bits(), norm(p.y).to_bits())
    };
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by_key(|&i| key(&points[i]));
    idx.windows(2)
        .find(|w| key(&points[w[0]]) == key(&points[w[1]]))
        .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
}

/// Every point lies on exactly one ring and every ring holds its quota.
fn ring_layout_matches(points: &[SignalPoint], rings: &[RingSpec]) -> bool {
    let mut counts = alloc::vec![0usize; rings.len()];
    for p in points {
        let r = p.norm();
        let mut hits = rings
            .iter()
            .filter(|ring| (r - ring.radius).abs() <= INVARIANT_TOL * ring.radius);
        match (hits.next(), hits.next()) {
            (Some(ring), None) => counts[ring.index] += 1,
            _ => return false,
        }
    }
    rings
        .iter()
        .zip(&counts)
        .all(|(ring, &c)| c == ring.points_per_ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn box_muller_single_point() {
        let c = box_muller_apsk(1, 1.0).unwrap();
        assert_eq!(c.len(), 1);
        let p = c.points()[0];
        assert_relative_eq!(p.x, -0.832_554_611_157_697_8, epsilon = 1e-12);
        assert!(p.y.abs() < 1e-12);
        assert_relative_eq!(c.rings().unwrap()[0].radius, math::sqrt(2f64.ln()), epsilon = 1e-15);
    }

    #[test]
    fn box_muller_n2_lies_on_imaginary_axis() {
        let c = box_muller_apsk(2, 1.0).unwrap();
        let expected = [1.177_410_022_515_474_7, -1.177_410_022_515_474_7, 0.536_360_021_302_651_6, -0.536_360_021_302_651_6];
        for (p, y) in c.points().iter().zip(expected) {
            assert!(p.x.abs() < 1e-12);
            assert_relative_eq!(p.y, y, epsilon = 1e-12);
        }
        assert_relative_eq!(c.average_power(), 0.836_988_216_785_835_8, epsilon = 1e-12);
        assert_relative_eq!(c.min_distance().unwrap(), 0.641_050_001_212_823, epsilon = 1e-12);
    }

    #[test]
    fn dvb_variant_layouts() {
        let c = dvb_variant_apsk(2, 1.0).unwrap();
        let rings = c.rings().unwrap();
        assert_eq!(rings.len(), 1);
        assert_eq!(rings[0].points_per_ring, 4);
        assert_relative_eq!(rings[0].radius, 0.832_554_611_157_697_8, epsilon = 1e-12);
        for (l, p) in c.points().iter().enumerate() {
            let phase = p.y.atan2(p.x).rem_euclid(2.0 * PI);
            assert_relative_eq!(phase, PI / 4.0 + l as f64 * PI / 2.0, epsilon = 1e-12);
        }
        assert_relative_eq!(c.papr().unwrap(), 1.0, epsilon = 1e-12);

        let c = dvb_variant_apsk(4, 1.0).unwrap();
        let radii: Vec<f64> = c.rings().unwrap().iter().map(|r| r.radius).collect();
        assert_relative_eq!(radii[0], 1.177_410_022_515_474_7, epsilon = 1e-12);
        assert_relative_eq!(radii[1], 0.536_360_021_302_651_6, epsilon = 1e-12);
        assert!(c.rings().unwrap().iter().all(|r| r.points_per_ring == 8));
        assert_relative_eq!(c.average_power(), 0.836_988_216_785_835_8, epsilon = 1e-12);
    }

    #[test]
    fn dvb_variant_rejects_odd_and_small() {
        assert_eq!(dvb_variant_apsk(3, 1.0).unwrap_err(), Error::OddSize(3));
        assert!(matches!(dvb_variant_apsk(0, 1.0), Err(Error::SizeTooSmall { .. })));
        assert!(Error::OddSize(3).to_string().contains("even"));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(box_muller_apsk(0, 1.0), Err(Error::SizeTooSmall { .. })));
        assert_eq!(box_muller_apsk(2, 0.0).unwrap_err(), Error::InvalidPower(0.0));
        assert!(square_qam(2, -1.0).is_err());
        assert!(square_qam(2, f64::NAN).is_err());
    }

    #[test]
    fn qam_grids() {
        let c = square_qam(2, 1.0).unwrap();
        for p in c.points() {
            assert_relative_eq!(p.x.abs(), 0.5f64.sqrt(), epsilon = 1e-15);
            assert_relative_eq!(p.y.abs(), 0.5f64.sqrt(), epsilon = 1e-15);
        }
        assert_relative_eq!(c.min_distance().unwrap(), 2f64.sqrt(), epsilon = 1e-12);

        let c = square_qam(4, 1.0).unwrap();
        for p in c.points() {
            for v in [p.x.abs(), p.y.abs()] {
                assert!((v - 0.1f64.sqrt()).abs() < 1e-12 || (v - 0.9f64.sqrt()).abs() < 1e-12);
            }
        }
        assert_relative_eq!(c.average_power(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(square_qam(8, 1.0).unwrap().average_power(), 1.0, epsilon = 1e-12);

        let c = square_qam(1, 1.0).unwrap();
        assert_eq!(c.points(), &[SignalPoint::new(0.0, 0.0)]);
        assert_eq!(c.papr().unwrap_err(), Error::ZeroPower);
        assert_eq!(c.min_distance().unwrap_err(), Error::TooFewPoints("min_distance"));
    }

    #[test]
    fn peak_and_papr_match_closed_forms() {
        let bm = box_muller_apsk(4, 1.0).unwrap();
        assert_relative_eq!(bm.average_power(), (4096.0f64 / 105.0).ln() / 4.0, epsilon = 1e-12);
        assert_relative_eq!(bm.peak_power(), 8f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(bm.papr().unwrap(), 2.270_253_005_527_700_5, epsilon = 1e-12);
        let dvb = dvb_variant_apsk(4, 1.0).unwrap();
        assert_relative_eq!(dvb.peak_power(), 4f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(dvb.papr().unwrap(), 1.656_288_981_514_549_2, epsilon = 1e-12);
    }

    #[test]
    fn normalized_hits_budget_exactly() {
        let c = box_muller_apsk(5, 2.0).unwrap().normalized();
        assert_relative_eq!(c.average_power(), 2.0, epsilon = 1e-12);
        let raw = box_muller_apsk(5, 2.0).unwrap();
        let scale = c.rings().unwrap()[0].radius / raw.rings().unwrap()[0].radius;
        for (p, q) in c.points().iter().zip(raw.points()) {
            assert_relative_eq!(p.x, q.x * scale, epsilon = 1e-12);
            assert_relative_eq!(p.y, q.y * scale, epsilon = 1e-12);
        }
        let back = Constellation::from_points("x", Family::BoxMuller, 5, 2.0, c.points().to_vec());
        assert!(back.is_ok());
    }

    #[test]
    fn from_points_round_trip_and_rejections() {
        for family in Family::ALL {
            let c = Constellation::build(family, 4, 1.5).unwrap();
            let back =
                Constellation::from_points(c.label(), family, 4, 1.5, c.points().to_vec()).unwrap();
            assert_eq!(back, c);
        }

        let c = box_muller_apsk(3, 1.0).unwrap();
        let mut pts = c.points().to_vec();
        pts[1] = pts[0];
        let err = Constellation::from_points("dup", Family::BoxMuller, 3, 1.0, pts).unwrap_err();
        assert!(matches!(err, Error::Invariant { .. }));

        let mut pts = c.points().to_vec();
        pts.pop();
        assert!(Constellation::from_points("short", Family::BoxMuller, 3, 1.0, pts).is_err());

        let mut pts = c.points().to_vec();
        pts[4].x *= 1.01;
        assert!(Constellation::from_points("off-ring", Family::BoxMuller, 3, 1.0, pts).is_err());

        let mut pts = square_qam(2, 1.0).unwrap().points().to_vec();
        pts[0].x *= 1.5;
        assert!(Constellation::from_points("qam", Family::SquareQam, 2, 1.0, pts).is_err());

        let mut pts = c.points().to_vec();
        pts[2].y = f64::NAN;
        assert!(Constellation::from_points("nan", Family::BoxMuller, 3, 1.0, pts).is_err());
    }

    #[test]
    fn rotated_set_passes_validation() {
        let c = dvb_variant_apsk(4, 1.0).unwrap().rotated(0.3);
        assert!(Constellation::from_points("rot", Family::DvbVariant, 4, 1.0, c.points().to_vec()).is_ok());
    }

    #[test]
    fn duplicate_point_gives_zero_distance() {
        let c = square_qam(2, 1.0).unwrap();
        let mut dup = c.clone();
        dup.points[3] = dup.points[0];
        assert_eq!(dup.min_distance().unwrap(), 0.0);
        assert!(find_duplicate(&dup.points).is_some());
        assert!(find_duplicate(c.points()).is_none());
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
        }
        assert_eq!("square_qam".parse::<Family>().unwrap(), Family::SquareQam);
        assert!("pam".parse::<Family>().is_err());
    }
}
