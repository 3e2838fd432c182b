//! Capacity-approaching APSK constellations for the Gaussian channel.
//!
//! The crate builds three constellation families as immutable point sets:
//!
//! * [`Family::BoxMuller`]: `n` rings of `n` points obtained by pushing a
//!   regular grid on `(0, 1)²` through the Box–Muller map,
//! * [`Family::DvbVariant`]: the same map applied to a grid with `n/2` rings of
//!   `2n` points, the ring layout used by large DVB APSK modes,
//! * [`Family::SquareQam`]: the uniformly spaced `n × n` baseline.
//!
//! On top of these it evaluates the mutual information of equiprobable
//! signalling over the complex AWGN channel ([`mi`]) and the numerical checks
//! behind the capacity argument ([`convergence`]).
//!
//! The crate is `no_std` (with `alloc`). The `std` feature, on by default,
//! only swaps the elementary functions from `libm` for the platform ones.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod capacity;
pub mod constellation;
pub mod convergence;
mod error;
pub mod hermite;
mod math;
pub mod mi;

pub use capacity::{gap_metrics, gaussian_capacity, GapMetrics, NoiseModel, SnrSpec};
pub use constellation::{Constellation, Family, RingSpec, SignalPoint};
pub use error::{Error, Result};
pub use hermite::GaussHermite;
pub use mi::{mi_monte_carlo, mi_quadrature, MiEstimate, MiMethod};
