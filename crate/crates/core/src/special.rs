//! Non-standard free Gaussian packets with an odd prefactor (p − p₀), and the
//! wall-compatible packet obtained from them at x₀ = p₀ = 0.
//!
//! The position-space prefactor is fixed by full-line normalization,
//! i·sqrt(2/(√π β³)) (1 + it/t₀)^(−3/2).

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::params::{ComplexAmplitude, Moments, PacketParams};

/// Scales of the odd-prefactor family. The ψ₀ operations use only β, t₀, ħ
/// and m; x₀ and p₀ are read by the general packet alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialParams {
    packet: PacketParams,
}

impl SpecialParams {
    pub fn new(x0: f64, p0: f64, alpha: f64, hbar: f64, mass: f64) -> Result<Self> {
        Ok(SpecialParams { packet: PacketParams::new(x0, p0, alpha, hbar, mass)? })
    }

    /// x₀ = p₀ = 0, the configuration that vanishes at the wall.
    pub fn at_origin(alpha: f64, hbar: f64, mass: f64) -> Result<Self> {
        Self::new(0.0, 0.0, alpha, hbar, mass)
    }

    pub fn packet(&self) -> &PacketParams {
        &self.packet
    }

    pub fn beta(&self) -> f64 {
        self.packet.beta()
    }

    pub fn t0(&self) -> f64 {
        self.packet.t0()
    }

    pub fn hbar(&self) -> f64 {
        self.packet.hbar()
    }

    pub fn mass(&self) -> f64 {
        self.packet.mass()
    }
}

impl From<PacketParams> for SpecialParams {
    fn from(packet: PacketParams) -> Self {
        SpecialParams { packet }
    }
}

// (1 + iτ)^(-3/2) on the principal branch; arg stays inside (-3π/4, 3π/4).
fn spread_power(tau: f64) -> C64 {
    let z = C64::new(1.0, tau);
    z.sqrt().inv() / z
}

pub fn phi_gprime(sp: &SpecialParams, p: f64, t: f64) -> ComplexAmplitude {
    let pk = &sp.packet;
    let alpha = pk.alpha();
    let dp = p - pk.p0();
    let amplitude = (2.0 * alpha.powi(3) / PI.sqrt()).sqrt() * dp * (-0.5 * alpha * alpha * dp * dp).exp();
    let phase = -p * pk.x0() / pk.hbar() - p * p * t / (2.0 * pk.mass() * pk.hbar());
    amplitude * C64::new(0.0, phase).exp()
}

pub fn psi_gprime(sp: &SpecialParams, x: f64, t: f64) -> ComplexAmplitude {
    let pk = &sp.packet;
    let beta = pk.beta();
    let tau = t / pk.t0();
    let shift = x - pk.center(t);
    let prefactor = C64::i() * (2.0 / (PI.sqrt() * beta.powi(3))).sqrt() * spread_power(tau);
    let phase = pk.p0() * (x - pk.x0()) / pk.hbar() - pk.p0() * pk.p0() * t / (2.0 * pk.mass() * pk.hbar());
    let exponent = C64::new(0.0, phase) - shift * shift / (2.0 * beta * beta * C64::new(1.0, tau));
    prefactor * shift * exponent.exp()
}

pub fn gprime_moments(sp: &SpecialParams, t: f64) -> Moments {
    let pk = &sp.packet;
    let center = pk.center(t);
    let beta_t = pk.beta_t(t);
    let alpha = pk.alpha();
    let p0 = pk.p0();
    Moments::from_raw(
        t,
        center,
        center * center + 1.5 * beta_t * beta_t,
        p0,
        p0 * p0 + 1.5 / (alpha * alpha),
    )
}

/// Δx·Δp = (3ħ/2)·sqrt(1 + (t/t₀)²).
pub fn gprime_uncertainty_product(sp: &SpecialParams, t: f64) -> f64 {
    1.5 * sp.hbar() * (t / sp.t0()).hypot(1.0)
}

/// Half-line packet √2·ψ₀(x,t) on x < 0, zero on x ≥ 0.
pub fn psi0_bouncer(sp: &SpecialParams, x: f64, t: f64) -> ComplexAmplitude {
    if x >= 0.0 {
        return C64::new(0.0, 0.0);
    }
    let beta = sp.beta();
    let tau = t / sp.t0();
    let prefactor = C64::i() * SQRT_2 * (2.0 / (PI.sqrt() * beta.powi(3))).sqrt() * spread_power(tau);
    prefactor * x * (-x * x / (2.0 * beta * beta * C64::new(1.0, tau))).exp()
}

pub fn psi0_moments(sp: &SpecialParams, t: f64) -> Moments {
    let beta = sp.beta();
    let beta_t = sp.packet.beta_t(t);
    let tau = t / sp.t0();
    let k = sp.hbar() / beta;
    let ratio = tau * tau / (1.0 + tau * tau);
    Moments {
        time: t,
        x_mean: -2.0 * beta_t / PI.sqrt(),
        x2_mean: 1.5 * beta_t * beta_t,
        x_sd: beta_t / SQRT_2 * ((3.0 * PI - 8.0) / PI).sqrt(),
        p_mean: -2.0 * k / PI.sqrt() * tau / tau.hypot(1.0),
        p2_mean: 1.5 * k * k,
        p_sd: k * (1.5 - 4.0 / PI * ratio).sqrt(),
    }
}

/// d⟨p⟩/dt = −(2/(α√π t₀))·(1 + (t/t₀)²)^(−3/2).
pub fn psi0_force(sp: &SpecialParams, t: f64) -> f64 {
    let tau = t / sp.t0();
    -2.0 / (sp.packet.alpha() * PI.sqrt() * sp.t0()) * (1.0 + tau * tau).powf(-1.5)
}

/// Δx·Δp = (ħ/2)·sqrt(3(3π−8)/π)·sqrt(1 + (1 − 8/3π)(t/t₀)²).
pub fn psi0_uncertainty_product(sp: &SpecialParams, t: f64) -> f64 {
    let tau = t / sp.t0();
    sp.hbar() * psi0_initial_product_coefficient() * (1.0 + psi0_spreading_coefficient() * tau * tau).sqrt()
}

/// (1/2)·sqrt(3(3π−8)/π) ≈ 0.5832, the t = 0 product in units of ħ.
pub fn psi0_initial_product_coefficient() -> f64 {
    0.5 * (3.0 * (3.0 * PI - 8.0) / PI).sqrt()
}

/// 1 − 8/(3π) ≈ 0.1512.
pub fn psi0_spreading_coefficient() -> f64 {
    1.0 - 8.0 / (3.0 * PI)
}

/// (3π − 8)/π ≈ 0.4535, the long-time product relative to a standard Gaussian.
pub fn psi0_long_time_ratio() -> f64 {
    (3.0 * PI - 8.0) / PI
}
