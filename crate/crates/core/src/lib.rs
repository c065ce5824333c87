//! Gaussian wave packets bouncing off an infinite wall at x = 0.
//!
//! * [`free`] — standard free Gaussian packets, moments and autocorrelation.
//! * [`mirror`] — the normalized mirror solution on x < 0 and its exact even
//!   moments, energy shift, near-collision expansions and autocorrelation.
//! * [`special`] — odd-prefactor Gaussian packets and the packet that
//!   vanishes at the wall for x₀ = p₀ = 0.
//! * [`oracle`] — quadrature, finite-difference momenta and a hard-wall
//!   propagator used to check every closed form numerically.
//! * [`validation`] — the acceptance checks, also exposed by the CLI.

pub mod cli;
pub mod error;
pub mod free;
pub mod mirror;
pub mod oracle;
pub mod params;
pub mod special;
pub mod validation;

pub use error::{Error, Result};
pub use mirror::BouncerParams;
pub use params::{ComplexAmplitude, Moments, PacketParams, Units};
pub use special::SpecialParams;
