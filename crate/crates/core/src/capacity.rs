//! SNR bookkeeping, Gaussian capacity and gap metrics.
//!
//! All rates are in bits per complex (2D) channel use.

use crate::error::{Error, Result};
use crate::math;

/// Slack allowed when a rate estimate is compared against capacity.
pub const CAPACITY_TOL: f64 = 1e-6;

/// Linear signal-to-noise ratio `P/N0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SnrSpec(f64);

impl SnrSpec {
    pub fn linear(snr: f64) -> Result<Self> {
        if snr.is_finite() && snr > 0.0 {
            Ok(Self(snr))
        } else {
            Err(Error::InvalidSnr(snr))
        }
    }

    pub fn from_db(db: f64) -> Result<Self> {
        Self::linear(math::powf(10.0, db / 10.0))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn db(&self) -> f64 {
        10.0 * math::log10(self.0)
    }

    /// Noise model for a power budget `power`: `N0 = P / snr`.
    pub fn noise_for(&self, power: f64) -> Result<NoiseModel> {
        if !(power.is_finite() && power > 0.0) {
            return Err(Error::InvalidPower(power));
        }
        NoiseModel::new(power / self.0)
    }
}

/// Circular complex Gaussian noise with total variance `N0`, i.e. `N0/2` per
/// real dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    n0: f64,
}

impl NoiseModel {
    pub fn new(n0: f64) -> Result<Self> {
        if n0.is_finite() && n0 > 0.0 {
            Ok(Self { n0 })
        } else {
            Err(Error::InvalidNoise(n0))
        }
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn per_dimension_variance(&self) -> f64 {
        self.n0 / 2.0
    }
}

/// `log2(1 + snr)`.
pub fn gaussian_capacity(snr: SnrSpec) -> f64 {
    math::log2(1.0 + snr.value())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapMetrics {
    /// Vertical gap `C(snr) − I`.
    pub bits: f64,
    /// Horizontal gap: extra SNR in dB the Gaussian input would need to lose
    /// before its capacity falls to `I`. `+∞` when `I = 0`.
    pub db: f64,
}

pub fn gap_metrics(mi: f64, snr: SnrSpec) -> Result<GapMetrics> {
    if !(mi.is_finite() && mi >= 0.0) {
        return Err(Error::InvalidMi(mi));
    }
    let capacity = gaussian_capacity(snr);
    if mi > capacity + CAPACITY_TOL {
        return Err(Error::MiAboveCapacity { mi, capacity });
    }
    let bits = capacity - mi;
    let db = if mi == 0.0 {
        f64::INFINITY
    } else {
        // 2^mi − 1 is the SNR at which capacity equals mi.
        let needed = math::exp2(mi) - 1.0;
        10.0 * math::log10(snr.value() / needed)
    };
    Ok(GapMetrics { bits, db })
}
