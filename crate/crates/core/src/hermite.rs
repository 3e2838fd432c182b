//! Gauss–Hermite quadrature.
//!
//! A rule of order `m` integrates `∫ e^(−z²) f(z) dz` exactly for polynomials
//! `f` of degree up to `2m − 1`. Nodes are the roots of the Hermite
//! polynomial `H_m`, found by Newton iteration on the orthonormal three-term
//! recurrence from asymptotic starting guesses.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;

/// π^(−1/4), the value of the orthonormal Hermite function of degree 0.
const PI_M4: f64 = 0.751_125_544_464_942_5;
const NEWTON_TOL: f64 = 3e-15;
const MAX_NEWTON: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidOrder(order));
        }
        let m = order;
        let mut nodes = alloc::vec![0.0; m];
        let mut weights = alloc::vec![0.0; m];
        let half = m.div_ceil(2);
        let mut z = 0.0;
        for i in 0..half {
            // Initial guesses for the largest roots first.
            z = match i {
                0 => {
                    let s = (2 * m + 1) as f64;
                    math::sqrt(s) - 1.85575 * math::powf(s, -0.16667)
                }
                1 => z - 1.14 * math::powf(m as f64, 0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut deriv = 0.0;
            for _ in 0..MAX_NEWTON {
                let (p, dp) = orthonormal_hermite(m, z);
                deriv = dp;
                let step = p / dp;
                z -= step;
                if step.abs() <= NEWTON_TOL * z.abs().max(1.0) {
                    break;
                }
            }
            let (_, dp) = orthonormal_hermite(m, z);
            if dp.is_finite() && dp != 0.0 {
                deriv = dp;
            }
            nodes[i] = z;
            nodes[m - 1 - i] = -z;
            weights[i] = 2.0 / (deriv * deriv);
            weights[m - 1 - i] = weights[i];
        }
        if m % 2 == 1 {
            nodes[m / 2] = 0.0;
        }
        nodes.reverse();
        weights.reverse();
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes in ascending order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights for the `e^(−z²)` kernel; they sum to √π.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫ e^(−z²) f(z) dz`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * f(z))
            .sum()
    }

    /// Tensor-product rule on ℝ² as `(z1, z2, weight)` triples whose weights
    /// are normalised by `1/π`, so that `Σ w f(z1, z2)` approximates
    /// `E[f(Z1, Z2)]` for `Z1, Z2` i.i.d. `N(0, 1/2)`.
    pub fn tensor_2d(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.order() * self.order());
        for (&z1, &w1) in self.nodes.iter().zip(&self.weights) {
            for (&z2, &w2) in self.nodes.iter().zip(&self.weights) {
                out.push((z1, z2, w1 * w2 / PI));
            }
        }
        out
    }
}

/// Orthonormal Hermite function `h_m(z)` (without the Gaussian factor) and
/// its derivative, via `h_j = z√(2/j) h_{j−1} − √((j−1)/j) h_{j−2}`.
fn orthonormal_hermite(m: usize, z: f64) -> (f64, f64) {
    let mut p1 = PI_M4;
    let mut p2 = 0.0;
    for j in 1..=m {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * math::sqrt(2.0 / jf) * p2 - math::sqrt((jf - 1.0) / jf) * p3;
    }
    (p1, math::sqrt(2.0 * m as f64) * p2)
}
