//! Mutual information of equiprobable signalling over the complex AWGN channel.
//!
//! For `M` equiprobable points `x_i` and noise `N ~ CN(0, N0)`,
//!
//! ```text
//! I = log2 M − (1/M) Σ_i E_N[ log2 Σ_j exp(−(‖x_i − x_j + N‖² − ‖N‖²) / N0) ]
//! ```
//!
//! Writing `N = √N0 · Z` with `Z` having i.i.d. `N(0, 1/2)` coordinates, the
//! inner expectation is taken either with a tensor Gauss–Hermite rule
//! ([`mi_quadrature`]) or by sampling `Z` ([`mi_monte_carlo`]). Both evaluate
//! the inner sum with max subtraction.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::capacity::SnrSpec;
use crate::constellation::{Constellation, SignalPoint};
use crate::error::{Error, Result};
use crate::hermite::GaussHermite;
use crate::math;

pub const DEFAULT_ORDER: usize = 40;

/// Exponents more than this far below the maximum are dropped from the inner
/// sum: `M · e^(−50)` stays below half an ulp of a sum that is at least 1.
const LSE_CUTOFF: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiMethod {
    Quadrature,
    MonteCarlo,
}

impl MiMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            MiMethod::Quadrature => "quadrature",
            MiMethod::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    /// Bits per complex channel use.
    pub value: f64,
    pub method: MiMethod,
    /// Zero for quadrature.
    pub std_error: f64,
    /// Quadrature order per axis, or number of noise draws.
    pub samples_or_order: u64,
}

/// Per-transmitted-point view of the integrand with the `N0` scaling folded
/// in: the exponent for candidate `j` is `−c_j − gx_j z1 − gy_j z2`.
struct Integrand {
    c: Vec<f64>,
    gx: Vec<f64>,
    gy: Vec<f64>,
    scratch: Vec<f64>,
}

impl Integrand {
    fn new(m: usize) -> Self {
        Self {
            c: alloc::vec![0.0; m],
            gx: alloc::vec![0.0; m],
            gy: alloc::vec![0.0; m],
            scratch: alloc::vec![0.0; m],
        }
    }

    fn condition_on(&mut self, points: &[SignalPoint], i: usize, n0: f64) {
        let xi = points[i];
        let g = 2.0 / math::sqrt(n0);
        for (j, xj) in points.iter().enumerate() {
            let dx = xi.x - xj.x;
            let dy = xi.y - xj.y;
            self.c[j] = (dx * dx + dy * dy) / n0;
            self.gx[j] = g * dx;
            self.gy[j] = g * dy;
        }
    }

    /// `log2 Σ_j exp(a_j)` at noise `√N0 · (z1, z2)`.
    fn log2_sum(&mut self, z1: f64, z2: f64) -> f64 {
        let mut max = f64::NEG_INFINITY;
        for (((a, &c), &gx), &gy) in self.scratch.iter_mut().zip(&self.c).zip(&self.gx).zip(&self.gy) {
            *a = -c - gx * z1 - gy * z2;
            max = max.max(*a);
        }
        let floor = max - LSE_CUTOFF;
        let mut sum = 0.0;
        for &a in &self.scratch {
            if a >= floor {
                sum += math::exp(a - max);
            }
        }
        (max + math::ln(sum)) / LN_2
    }
}

fn check_points(c: &Constellation) -> Result<()> {
    if c.is_empty() {
        return Err(Error::TooFewPoints("mutual information"));
    }
    Ok(())
}

/// Deterministic estimate with a tensor Gauss–Hermite rule of `order` nodes
/// per axis. `N0` is derived from the nominal power: `N0 = P / snr`.
pub fn mi_quadrature(c: &Constellation, snr: SnrSpec, order: usize) -> Result<MiEstimate> {
    let rule = GaussHermite::new(order)?;
    mi_quadrature_with_rule(c, snr, &rule)
}

pub fn mi_quadrature_with_rule(
    c: &Constellation,
    snr: SnrSpec,
    rule: &GaussHermite,
) -> Result<MiEstimate> {
    check_points(c)?;
    let n0 = snr.noise_for(c.power())?.n0();
    let points = c.points();
    let m = points.len();
    let nodes = rule.tensor_2d();
    let mut integrand = Integrand::new(m);
    let mut total = 0.0;
    for i in 0..m {
        integrand.condition_on(points, i, n0);
        let mut term = 0.0;
        for &(z1, z2, w) in &nodes {
            term += w * integrand.log2_sum(z1, z2);
        }
        total += term;
    }
    // Roundoff can push a saturated estimate a hair below zero.
    let value = (math::log2(m as f64) - total / m as f64).max(0.0);
    Ok(MiEstimate {
        value,
        method: MiMethod::Quadrature,
        std_error: 0.0,
        samples_or_order: rule.order() as u64,
    })
}

/// Noise coordinates of draw `k`, i.i.d. `N(0, 1/2)`.
///
/// Draw `k` reads words `4k..4k+4` of the ChaCha8 stream keyed by `seed`, so
/// its value does not depend on which other draws are generated.
pub fn noise_draw(rng: &mut ChaCha8Rng, k: u64) -> (f64, f64) {
    rng.set_word_pos(4 * k as u128);
    let a = rng.next_u64();
    let b = rng.next_u64();
    // u ∈ (0, 1] keeps the logarithm finite.
    let u = ((a >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
    let v = (b >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    let r = math::sqrt(-math::ln(u));
    let (s, c) = math::sin_cos(2.0 * PI * v);
    (r * c, r * s)
}

/// Stratified Monte Carlo estimate: draw `k` conditions on point `k mod M`.
/// `std_error` is the sample standard deviation of the per-draw values over
/// `√samples`. The mean is clamped to `[0, log2 M]`; with few draws at low
/// SNR it can otherwise fall below zero.
pub fn mi_monte_carlo(c: &Constellation, snr: SnrSpec, samples: u64, seed: u64) -> Result<MiEstimate> {
    check_points(c)?;
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let n0 = snr.noise_for(c.power())?.n0();
    let points = c.points();
    let m = points.len();
    let log2_m = math::log2(m as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut integrand = Integrand::new(m);

    // Welford accumulation of the per-draw values.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let mut count = 0u64;
    for i in 0..m {
        integrand.condition_on(points, i, n0);
        let mut k = i as u64;
        while k < samples {
            let (z1, z2) = noise_draw(&mut rng, k);
            let h = log2_m - integrand.log2_sum(z1, z2);
            count += 1;
            let delta = h - mean;
            mean += delta / count as f64;
            m2 += delta * (h - mean);
            k += m as u64;
        }
    }
    let std_error = if count > 1 {
        math::sqrt(m2 / (count - 1) as f64) / math::sqrt(count as f64)
    } else {
        0.0
    };
    Ok(MiEstimate {
        value: mean.clamp(0.0, log2_m),
        method: MiMethod::MonteCarlo,
        std_error,
        samples_or_order: samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::{box_muller_apsk, square_qam};

    #[test]
    fn single_point_carries_nothing() {
        let c = box_muller_apsk(1, 1.0).unwrap();
        let snr = SnrSpec::from_db(10.0).unwrap();
        assert_eq!(mi_quadrature(&c, snr, 10).unwrap().value, 0.0);
        let mc = mi_monte_carlo(&c, snr, 1000, 7).unwrap();
        assert_eq!(mc.value, 0.0);
        assert_eq!(mc.std_error, 0.0);
    }

    #[test]
    fn saturates_at_high_snr() {
        let c = square_qam(2, 1.0).unwrap();
        let snr = SnrSpec::from_db(100.0).unwrap();
        let q = mi_quadrature(&c, snr, DEFAULT_ORDER).unwrap();
        assert!((q.value - 2.0).abs() < 1e-6);
        assert_eq!(q.method, MiMethod::Quadrature);
        assert_eq!(q.samples_or_order, 40);
    }

    #[test]
    fn argument_checks() {
        let c = square_qam(2, 1.0).unwrap();
        let snr = SnrSpec::linear(1.0).unwrap();
        assert_eq!(mi_quadrature(&c, snr, 1).unwrap_err(), Error::InvalidOrder(1));
        assert_eq!(mi_monte_carlo(&c, snr, 0, 1).unwrap_err(), Error::NoSamples);
    }

    #[test]
    fn noise_draws_are_counter_based() {
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        let forward: Vec<_> = (0..20).map(|k| noise_draw(&mut a, k)).collect();
        for k in (0..20).rev() {
            assert_eq!(noise_draw(&mut b, k), forward[k as usize]);
        }
    }

    #[test]
    fn noise_draws_have_half_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 200_000;
        let (mut s1, mut s2, mut s12) = (0.0, 0.0, 0.0);
        for k in 0..n {
            let (z1, z2) = noise_draw(&mut rng, k);
            s1 += z1 * z1;
            s2 += z2 * z2;
            s12 += z1 * z2;
        }
        let n = n as f64;
        assert!((s1 / n - 0.5).abs() < 0.01);
        assert!((s2 / n - 0.5).abs() < 0.01);
        assert!((s12 / n).abs() < 0.01);
    }
}
