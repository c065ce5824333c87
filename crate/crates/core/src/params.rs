//! Physical configuration of a Gaussian packet and the moment bundle shared by
//! every packet family.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Value type for ψ(x,t), φ(p,t) and autocorrelation amplitudes.
pub type ComplexAmplitude = Complex64;

/// Reduced Planck constant and mass: the two constants the oracle needs to
/// turn a sampled wavefunction into momenta or evolve it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
}

impl Units {
    pub const NATURAL: Units = Units { hbar: 1.0, mass: 1.0 };

    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParams(format!("hbar must be finite and > 0, got {hbar}")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParams(format!("mass must be finite and > 0, got {mass}")));
        }
        Ok(Units { hbar, mass })
    }
}

/// Initial center `x0`, momentum `p0` and momentum-space width `alpha` of a
/// free Gaussian packet, together with ħ and m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacketParams {
    x0: f64,
    p0: f64,
    alpha: f64,
    hbar: f64,
    mass: f64,
}

impl PacketParams {
    pub fn new(x0: f64, p0: f64, alpha: f64, hbar: f64, mass: f64) -> Result<Self> {
        if !x0.is_finite() || !p0.is_finite() {
            return Err(Error::InvalidParams(format!(
                "x0 and p0 must be finite, got x0 = {x0}, p0 = {p0}"
            )));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParams(format!("alpha must be finite and > 0, got {alpha}")));
        }
        Units::new(hbar, mass)?;
        Ok(PacketParams { x0, p0, alpha, hbar, mass })
    }

    /// ħ = m = 1.
    pub fn natural(x0: f64, p0: f64, alpha: f64) -> Result<Self> {
        Self::new(x0, p0, alpha, 1.0, 1.0)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn units(&self) -> Units {
        Units { hbar: self.hbar, mass: self.mass }
    }

    /// Position-space width scale β = αħ.
    pub fn beta(&self) -> f64 {
        self.alpha * self.hbar
    }

    /// Spreading time t₀ = mħα².
    pub fn t0(&self) -> f64 {
        self.mass * self.hbar * self.alpha * self.alpha
    }

    /// β_t = β·sqrt(1 + (t/t₀)²).
    pub fn beta_t(&self, t: f64) -> f64 {
        self.beta() * (t / self.t0()).hypot(1.0)
    }

    /// Classical center X(t) = x0 + p0·t/m.
    pub fn center(&self, t: f64) -> f64 {
        self.x0 + self.p0 * t / self.mass
    }

    pub fn with_center(&self, x0: f64, p0: f64) -> Result<Self> {
        Self::new(x0, p0, self.alpha, self.hbar, self.mass)
    }
}

/// ⟨x⟩, ⟨x²⟩, Δx, ⟨p⟩, ⟨p²⟩, Δp at time `time`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub time: f64,
    pub x_mean: f64,
    pub x2_mean: f64,
    pub x_sd: f64,
    pub p_mean: f64,
    pub p2_mean: f64,
    pub p_sd: f64,
}

impl Moments {
    /// Builds the bundle from first and second moments. Variances that round
    /// to slightly negative values are clamped to zero.
    pub fn from_raw(time: f64, x_mean: f64, x2_mean: f64, p_mean: f64, p2_mean: f64) -> Self {
        Moments {
            time,
            x_mean,
            x2_mean,
            x_sd: (x2_mean - x_mean * x_mean).max(0.0).sqrt(),
            p_mean,
            p2_mean,
            p_sd: (p2_mean - p_mean * p_mean).max(0.0).sqrt(),
        }
    }

    pub fn uncertainty_product(&self) -> f64 {
        self.x_sd * self.p_sd
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_scales() {
        assert!(PacketParams::new(0.0, 0.0, 0.0, 1.0, 1.0).is_err());
        assert!(PacketParams::new(0.0, 0.0, 1.0, -1.0, 1.0).is_err());
        assert!(PacketParams::new(0.0, 0.0, 1.0, 1.0, 0.0).is_err());
        assert!(PacketParams::new(f64::NAN, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(PacketParams::new(0.0, f64::INFINITY, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn derived_scales() {
        let p = PacketParams::new(-5.0, 2.0, 0.5, 2.0, 3.0).unwrap();
        assert_eq!(p.beta(), 1.0);
        assert_eq!(p.t0(), 3.0 * 2.0 * 0.25);
        assert_eq!(p.beta_t(0.0), p.beta());
        assert!(p.beta_t(0.1) > p.beta());
        assert!((p.beta_t(p.t0()) - p.beta() * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(p.center(1.5), -5.0 + 2.0 * 1.5 / 3.0);
    }

    #[test]
    fn moments_clamp_negative_variance() {
        let m = Moments::from_raw(0.0, 1.0, 1.0 - 1e-17, 0.0, 1.0);
        assert_eq!(m.x_sd, 0.0);
        assert_eq!(m.p_sd, 1.0);
    }
}
