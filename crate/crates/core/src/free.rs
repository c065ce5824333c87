//! Standard free-particle Gaussian packets in position and momentum space.
//!
//! All complex powers of `1 + i t/t0` use the principal branch. The real part
//! of that base is 1, so the branch cut is never approached and the
//! amplitudes are continuous in `t`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::params::{ComplexAmplitude, Moments, PacketParams};

/// ψ_G(x,t) for a free packet started at `x0` with momentum `p0`.
pub fn psi_free(params: &PacketParams, x: f64, t: f64) -> ComplexAmplitude {
    let beta = params.beta();
    let hbar = params.hbar();
    let spread = C64::new(1.0, t / params.t0());
    let prefactor = (PI.sqrt() * beta * spread).sqrt().inv();
    let shift = x - params.center(t);
    let phase = params.p0() * (x - params.x0()) / hbar
        - params.p0() * params.p0() * t / (2.0 * params.mass() * hbar);
    let exponent = C64::new(0.0, phase) - shift * shift / (2.0 * beta * beta * spread);
    prefactor * exponent.exp()
}

/// φ_G(p,t). Its modulus does not depend on `t`.
pub fn phi_free(params: &PacketParams, p: f64, t: f64) -> ComplexAmplitude {
    let alpha = params.alpha();
    let hbar = params.hbar();
    let dp = p - params.p0();
    let amplitude = (alpha / PI.sqrt()).sqrt() * (-0.5 * alpha * alpha * dp * dp).exp();
    let phase = -p * params.x0() / hbar - p * p * t / (2.0 * params.mass() * hbar);
    C64::from_polar(amplitude, phase)
}

pub fn free_moments(params: &PacketParams, t: f64) -> Moments {
    let center = params.center(t);
    let beta_t = params.beta_t(t);
    let alpha = params.alpha();
    let p0 = params.p0();
    Moments::from_raw(
        t,
        center,
        center * center + 0.5 * beta_t * beta_t,
        p0,
        p0 * p0 + 0.5 / (alpha * alpha),
    )
}

/// Closed-form Δx·Δp = (ħ/2)·sqrt(1 + (t/t₀)²).
pub fn free_uncertainty_product(params: &PacketParams, t: f64) -> f64 {
    0.5 * params.hbar() * (t / params.t0()).hypot(1.0)
}

/// A(t) = ∫ψ*(x,0) ψ(x,t) dx for the free packet.
///
/// With s = t/2t₀ this is (1 + is)^(-1/2)·exp[-iα²p₀² s/(1 + is)].
pub fn autocorrelation_free(params: &PacketParams, t: f64) -> ComplexAmplitude {
    let s = t / (2.0 * params.t0());
    let w = C64::new(1.0, s);
    let ap = params.alpha() * params.p0();
    let exponent = C64::new(0.0, -ap * ap * s) / w;
    w.sqrt().inv() * exponent.exp()
}
