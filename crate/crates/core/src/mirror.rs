//! Mirror (difference) solution N·[ψ_G(x,t) − ψ_G(−x,t)] for a packet on the
//! half-line x < 0 bounded by an infinite wall at x = 0.
//!
//! The packet starts at `x0 <= 0`; `p0 > 0` moves it toward the wall. The
//! squared difference is even in x, so every half-line integral of an even
//! observable is half the full-line integral, which is what makes the
//! normalization and even moments closed-form.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::free::{autocorrelation_free, psi_free};
use crate::params::{ComplexAmplitude, PacketParams};

/// z₀ = (x₀/β)² + (p₀β/ħ)², the squared phase-space distance between the
/// packet and its mirror image in units of the packet widths.
pub fn z0(params: &PacketParams) -> f64 {
    let beta = params.beta();
    let a = params.x0() / beta;
    let b = params.p0() * beta / params.hbar();
    a * a + b * b
}

/// z₀ written as ½[(x₀/Δx₀)² + (p₀/Δp₀)²] with Δx₀ = β/√2, Δp₀ = 1/(α√2).
pub fn z0_from_widths(params: &PacketParams) -> f64 {
    let dx0 = params.beta() / 2f64.sqrt();
    let dp0 = 1.0 / (params.alpha() * 2f64.sqrt());
    0.5 * ((params.x0() / dx0).powi(2) + (params.p0() / dp0).powi(2))
}

/// N = (1 − e^(−z₀))^(−1/2).
pub fn normalization(params: &PacketParams) -> Result<f64> {
    norm_from_z0(z0(params))
}

fn norm_from_z0(z: f64) -> Result<f64> {
    if z <= 0.0 {
        return Err(Error::Degenerate);
    }
    Ok((-(-z).exp_m1()).sqrt().recip())
}

/// F(z) = z·e^(−z)/(1 − e^(−z)), with F(0) = 1.
pub fn f_factor(z: f64) -> f64 {
    if z < 1e-8 {
        1.0 - z / 2.0 + z * z / 12.0
    } else {
        z * (-z).exp() / -(-z).exp_m1()
    }
}

/// ⟨x²⟩_t = X(t)² + β_t²/2 + β_t²·F(z₀). Continuous down to z₀ = 0, where it
/// coincides with the special solution's 3β_t²/2.
pub fn x2_closed_form(params: &PacketParams, t: f64) -> f64 {
    let center = params.center(t);
    let bt2 = params.beta_t(t).powi(2);
    center * center + 0.5 * bt2 + bt2 * f_factor(z0(params))
}

/// ⟨p²⟩ = p₀² + ħ²/2β² + (ħ²/β²)·F(z₀); conserved in time.
pub fn p2_closed_form(params: &PacketParams) -> f64 {
    let scale = (params.hbar() / params.beta()).powi(2);
    params.p0() * params.p0() + 0.5 * scale + scale * f_factor(z0(params))
}

/// ΔE/E = 2F(z₀)/(1 + 2(p₀β/ħ)²).
pub fn energy_shift_closed_form(params: &PacketParams) -> f64 {
    let k = params.p0() * params.beta() / params.hbar();
    2.0 * f_factor(z0(params)) / (1.0 + 2.0 * k * k)
}

/// Two-term near-collision value of ⟨x⟩ and whether |X(t)| ≤ β_t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NearCollision {
    pub value: f64,
    pub in_window: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveForce {
    /// m·d²⟨x⟩/dt² at the collision time.
    pub force: f64,
    /// Impulse-over-duration estimate −2p₀²/(m·β_t) at the collision time.
    pub dimensional_estimate: f64,
}

/// A validated bouncing configuration with its derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BouncerParams {
    base: PacketParams,
    z0: f64,
    norm_n: f64,
    collision_time: Option<f64>,
}

impl BouncerParams {
    pub fn new(base: PacketParams) -> Result<Self> {
        if base.x0() > 0.0 {
            return Err(Error::WrongSide(base.x0()));
        }
        let z = z0(&base);
        let norm_n = norm_from_z0(z)?;
        let collision_time = (base.x0() < 0.0 && base.p0() > 0.0).then(|| -base.mass() * base.x0() / base.p0());
        Ok(BouncerParams { base, z0: z, norm_n, collision_time })
    }

    pub fn base(&self) -> &PacketParams {
        &self.base
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn norm_n(&self) -> f64 {
        self.norm_n
    }

    /// t_c = −m·x₀/p₀, present when x₀ < 0 and p₀ > 0.
    pub fn collision_time(&self) -> Option<f64> {
        self.collision_time
    }

    fn require_collision(&self) -> Result<f64> {
        self.collision_time.ok_or(Error::NoCollision)
    }

    /// ψ̃(x,t); identically zero on x ≥ 0.
    pub fn psi(&self, x: f64, t: f64) -> ComplexAmplitude {
        if x >= 0.0 {
            return C64::new(0.0, 0.0);
        }
        self.norm_n * (psi_free(&self.base, x, t) - psi_free(&self.base, -x, t))
    }

    pub fn x2_expect(&self, t: f64) -> f64 {
        x2_closed_form(&self.base, t)
    }

    pub fn p2_expect(&self) -> f64 {
        p2_closed_form(&self.base)
    }

    pub fn energy_shift(&self) -> f64 {
        energy_shift_closed_form(&self.base)
    }

    /// ⟨x⟩ ≈ −β_t/√π − X(t)²/(β_t√π), the expansion about the classical
    /// collision in powers of X(t). `in_window` is false once |X(t)| > β_t.
    pub fn x_mean_near_collision(&self, t: f64) -> NearCollision {
        let beta_t = self.base.beta_t(t);
        let center = self.base.center(t);
        let root_pi = PI.sqrt();
        NearCollision {
            value: -beta_t / root_pi - center * center / (beta_t * root_pi),
            in_window: center.abs() <= beta_t,
        }
    }

    /// Classical trajectory −|X(t)|.
    pub fn x_classical(&self, t: f64) -> f64 {
        -self.base.center(t).abs()
    }

    /// ⟨p⟩ at t_c: −(ħ/β√π)·(t_c/t₀)/sqrt(1 + (t_c/t₀)²).
    pub fn p_mean_at_collision(&self) -> Result<f64> {
        let tc = self.require_collision()?;
        let s = tc / self.base.t0();
        Ok(-self.base.hbar() / (self.base.beta() * PI.sqrt()) * s / s.hypot(1.0))
    }

    /// Large-t_c limit of [`Self::p_mean_at_collision`], −1/(√π·α).
    pub fn p_mean_collision_asymptote(&self) -> f64 {
        -1.0 / (PI.sqrt() * self.base.alpha())
    }

    pub fn effective_force(&self) -> Result<EffectiveForce> {
        let tc = self.require_collision()?;
        let p0 = self.base.p0();
        let scale = p0 * p0 / (self.base.mass() * self.base.beta_t(tc));
        Ok(EffectiveForce {
            force: -2.0 / PI.sqrt() * scale,
            dimensional_estimate: -2.0 * scale,
        })
    }

    /// Ã(t) = A_G(t)·(1 − exp[−z₀/(1 + it/2t₀)])/(1 − e^(−z₀)).
    pub fn autocorrelation(&self, t: f64) -> ComplexAmplitude {
        let w = C64::new(1.0, t / (2.0 * self.base.t0()));
        let numerator = -expm1_complex(-self.z0 / w);
        let denominator = -(-self.z0).exp_m1();
        autocorrelation_free(&self.base, t) * numerator / denominator
    }
}

/// e^w − 1 without cancellation for small |w|.
fn expm1_complex(w: C64) -> C64 {
    if w.norm() < 1e-2 {
        // Horner form of w + w²/2 + … + w⁷/7!; remainder < 1e-18 relative.
        let mut acc = C64::new(0.0, 0.0);
        for k in (1..=7).rev() {
            acc = (acc + 1.0) * w / k as f64;
        }
        acc
    } else {
        w.exp() - 1.0
    }
}

pub fn psi_bouncer(bp: &BouncerParams, x: f64, t: f64) -> ComplexAmplitude {
    bp.psi(x, t)
}

pub fn autocorrelation_bouncer(bp: &BouncerParams, t: f64) -> ComplexAmplitude {
    bp.autocorrelation(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::free_moments;

    fn params(x0: f64, p0: f64) -> PacketParams {
        PacketParams::natural(x0, p0, 1.0).unwrap()
    }

    fn half_line_trapezoid<F: Fn(f64) -> f64>(f: F, x_min: f64, n: usize) -> f64 {
        let h = -x_min / n as f64;
        let mut sum = 0.5 * (f(x_min) + f(0.0));
        for i in 1..n {
            sum += f(x_min + i as f64 * h);
        }
        sum * h
    }

    #[test]
    fn z0_examples() {
        let p = PacketParams::new(-3.0 * 0.5, 4.0 / 0.5, 0.5, 1.0, 1.0).unwrap();
        assert!((z0(&p) - 25.0).abs() < 1e-12);
        assert_eq!(z0(&params(0.0, 0.0)), 0.0);
    }

    #[test]
    fn z0_forms_agree() {
        let p = PacketParams::new(-1.7, 0.3, 2.1, 0.6, 4.0).unwrap();
        assert!((z0(&p) - z0_from_widths(&p)).abs() < 1e-14 * z0(&p));
    }

    #[test]
    fn normalization_examples() {
        let ln2 = 2f64.ln();
        let p = params(-ln2.sqrt(), 0.0);
        assert!((normalization(&p).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        let p = params(-29f64.sqrt(), 0.0);
        let excess = normalization(&p).unwrap() - 1.0;
        assert!((excess - 0.5 * (-29f64).exp()).abs() < 1e-3 * excess);
        assert!((excess - 1.27e-13).abs() < 1e-15);
        assert_eq!(normalization(&params(0.0, 0.0)), Err(Error::Degenerate));
    }

    #[test]
    fn normalization_tiny_z0_is_stable() {
        let p = params(-1e-7, 0.0);
        let n = normalization(&p).unwrap();
        assert!((n - 1e7).abs() < 1e-3, "{n}");
    }

    #[test]
    fn f_factor_examples() {
        assert_eq!(f_factor(0.0), 1.0);
        assert!((f_factor(1e-12) - 1.0).abs() < 1e-12);
        assert!((f_factor(2f64.ln()) - 2f64.ln()).abs() < 1e-15);
        assert!(f_factor(50.0) < 1e-19);
        // both sides of the series switch follow 1 - z/2
        for z in [0.99e-8, 1.01e-8] {
            assert!((f_factor(z) - (1.0 - z / 2.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn constructor_guards() {
        assert_eq!(BouncerParams::new(params(1.0, 1.0)), Err(Error::WrongSide(1.0)));
        assert_eq!(BouncerParams::new(params(0.0, 0.0)), Err(Error::Degenerate));
        let bp = BouncerParams::new(params(0.0, 1.0)).unwrap();
        assert_eq!(bp.collision_time(), None);
        let bp = BouncerParams::new(params(-2.0, -1.0)).unwrap();
        assert_eq!(bp.collision_time(), None);
        assert_eq!(bp.p_mean_at_collision(), Err(Error::NoCollision));
        assert_eq!(bp.effective_force(), Err(Error::NoCollision));
        let bp = BouncerParams::new(PacketParams::new(-3.0, 2.0, 0.5, 1.0, 1.5).unwrap()).unwrap();
        assert_eq!(bp.collision_time(), Some(2.25));
        assert!(bp.norm_n() > 1.0);
    }

    #[test]
    fn wall_and_right_side_vanish() {
        let bp = BouncerParams::new(params(-3.0, 1.0)).unwrap();
        for &t in &[0.0, 1.0, 3.0, 10.0] {
            assert_eq!(bp.psi(0.0, t), C64::new(0.0, 0.0));
            assert_eq!(bp.psi(0.5, t), C64::new(0.0, 0.0));
            assert_ne!(bp.psi(-0.5, t), C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn half_line_norm_by_quadrature() {
        let bp = BouncerParams::new(params(-2.0, 1.0)).unwrap();
        let tc = bp.collision_time().unwrap();
        for &t in &[0.0, 2.0 * tc] {
            let x_min = -(bp.base().center(t).abs() + 12.0 * bp.base().beta_t(t));
            let norm = half_line_trapezoid(|x| bp.psi(x, t).norm_sqr(), x_min, 40_000);
            assert!((norm - 1.0).abs() < 1e-9, "t={t} norm={norm}");
        }
    }

    #[test]
    fn unnormalized_difference_times_n2_is_one() {
        let p = params(-0.8, 0.4);
        let n = normalization(&p).unwrap();
        let diff = |x: f64| (psi_free(&p, x, 0.0) - psi_free(&p, -x, 0.0)).norm_sqr();
        let integral = half_line_trapezoid(diff, -14.0, 40_000);
        assert!((n * n * integral - 1.0).abs() < 1e-10);
    }

    #[test]
    fn x2_limits_and_quadrature() {
        // z0 -> 0 at t = 0 gives the special solution's 3β²/2.
        let tiny = params(-1e-9, 0.0);
        assert!((x2_closed_form(&tiny, 0.0) - 1.5).abs() < 1e-12);
        let far = BouncerParams::new(params(-29f64.sqrt(), 0.0)).unwrap();
        for &t in &[0.0, 1.0] {
            let free = free_moments(far.base(), t).x2_mean;
            assert!(((far.x2_expect(t) - free) / free).abs() < 1e-10);
        }
        let bp = BouncerParams::new(params(-1.5, 0.8)).unwrap();
        let tc = bp.collision_time().unwrap();
        for k in 0..=4 {
            let t = 0.5 * k as f64 * tc;
            let x_min = -(bp.base().center(t).abs() + 12.0 * bp.base().beta_t(t));
            let q = half_line_trapezoid(|x| x * x * bp.psi(x, t).norm_sqr(), x_min, 40_000);
            assert!(((q - bp.x2_expect(t)) / q).abs() < 1e-7, "t={t}");
        }
    }

    #[test]
    fn p2_limits_and_gradient_quadrature() {
        assert!((p2_closed_form(&params(0.0, 0.0)) - 1.5).abs() < 1e-15);
        let free_value = p2_closed_form(&params(-40.0, 0.0));
        assert!((free_value - 0.5).abs() < 1e-15);

        // ħ²∫|∂ψ|² with a central difference of the closed-form wavefunction.
        let bp = BouncerParams::new(params(-1.0, 0.7)).unwrap();
        let tc = bp.collision_time().unwrap();
        let d = 1e-4;
        for &t in &[0.0, tc] {
            let x_min = -(bp.base().center(t).abs() + 12.0 * bp.base().beta_t(t));
            let grad = |x: f64| {
                let lo = bp.psi(x - d, t);
                let hi = if x + d >= 0.0 { -bp.psi(-(x + d), t) } else { bp.psi(x + d, t) };
                ((hi - lo) / (2.0 * d)).norm_sqr()
            };
            let q = half_line_trapezoid(grad, x_min, 40_000);
            assert!(((q - bp.p2_expect()) / q).abs() < 1e-6, "t={t}: {q} vs {}", bp.p2_expect());
        }
    }

    #[test]
    fn energy_shift_examples() {
        assert_eq!(energy_shift_closed_form(&params(0.0, 0.0)), 2.0);
        let p = params(-5.0, 2.0);
        assert_eq!(z0(&p), 29.0);
        let expected = 2.0 * f_factor(29.0) / 9.0;
        assert!((energy_shift_closed_form(&p) - expected).abs() < 1e-25);
        assert!(expected > 1.6e-12 && expected < 1.7e-12);
    }

    #[test]
    fn energy_shift_matches_exact_ratio() {
        for &(x0, p0) in &[(-0.3, 0.2), (-1.0, 1.0), (-2.0, 0.1), (-0.1, 3.0)] {
            let p = PacketParams::new(x0, p0, 1.3, 0.8, 2.0).unwrap();
            let free = free_moments(&p, 0.0).p2_mean;
            let exact = (p2_closed_form(&p) - free) / free;
            let approx = energy_shift_closed_form(&p);
            assert!((approx - exact).abs() < 1e-14, "{approx} vs {exact}");
        }
    }

    #[test]
    fn near_collision_expansion() {
        let bp = BouncerParams::new(params(-6.0, 2.0)).unwrap();
        let tc = bp.collision_time().unwrap();
        let at = bp.x_mean_near_collision(tc);
        assert!((at.value + bp.base().beta_t(tc) / PI.sqrt()).abs() < 1e-15);
        assert!(at.in_window);
        // symmetric in X(t); β_t differs slightly so compare through β_t
        let delta = 0.2;
        let before = bp.x_mean_near_collision(tc - delta);
        let after = bp.x_mean_near_collision(tc + delta);
        let undo = |nc: NearCollision, t: f64| {
            let bt = bp.base().beta_t(t);
            (-nc.value * PI.sqrt() * bt - bt * bt).sqrt()
        };
        assert!((undo(before, tc - delta) - undo(after, tc + delta)).abs() < 1e-12);
        assert!(!bp.x_mean_near_collision(0.0).in_window);
    }

    #[test]
    fn collision_momentum_examples() {
        let p = PacketParams::new(-10.0, 10.0, 1.0, 1.0, 1.0).unwrap();
        let bp = BouncerParams::new(p).unwrap();
        assert_eq!(bp.collision_time(), Some(bp.base().t0()));
        let expected = -bp.base().hbar() / (bp.base().beta() * (2.0 * PI).sqrt());
        assert!((bp.p_mean_at_collision().unwrap() - expected).abs() < 1e-15);

        let long = BouncerParams::new(PacketParams::new(-1e6, 1.0, 0.5, 1.0, 1.0).unwrap()).unwrap();
        let asym = long.p_mean_collision_asymptote();
        assert!((asym + 0.5642 / 0.5).abs() < 1e-3);
        assert!((long.p_mean_at_collision().unwrap() - asym).abs() < 1e-9);
    }

    #[test]
    fn effective_force_scaling() {
        let bp = BouncerParams::new(params(-6.0, 2.0)).unwrap();
        let f = bp.effective_force().unwrap();
        assert!((f.force / f.dimensional_estimate - 1.0 / PI.sqrt()).abs() < 1e-15);
        // doubling |x0| alongside p0 keeps t_c and β_t fixed
        let doubled = BouncerParams::new(params(-12.0, 4.0)).unwrap();
        assert_eq!(doubled.collision_time(), bp.collision_time());
        let g = doubled.effective_force().unwrap();
        assert!((g.force / f.force - 4.0).abs() < 1e-14);
    }

    #[test]
    fn autocorrelation_examples() {
        let bp = BouncerParams::new(params(-3.0, 1.0)).unwrap();
        assert!((bp.autocorrelation(0.0) - C64::new(1.0, 0.0)).norm() < 1e-15);
        let far = BouncerParams::new(params(-30.0, 2.0)).unwrap();
        for &t in &[0.0, 1.0, 5.0] {
            assert!((far.autocorrelation(t) - autocorrelation_free(far.base(), t)).norm() < 1e-14);
        }
    }

    #[test]
    fn autocorrelation_matches_overlap_quadrature() {
        let bp = BouncerParams::new(params(-1.2, 0.9)).unwrap();
        let tc = bp.collision_time().unwrap();
        for k in 0..=6 {
            let t = 0.5 * k as f64 * tc;
            let x_min = -(bp.base().x0().abs().max(bp.base().center(t).abs()) + 12.0 * bp.base().beta_t(t));
            let re = half_line_trapezoid(|x| (bp.psi(x, 0.0).conj() * bp.psi(x, t)).re, x_min, 40_000);
            let im = half_line_trapezoid(|x| (bp.psi(x, 0.0).conj() * bp.psi(x, t)).im, x_min, 40_000);
            assert!((C64::new(re, im) - bp.autocorrelation(t)).norm() < 1e-7, "t={t}");
        }
    }

    #[test]
    fn complex_expm1_small_argument() {
        let w = C64::new(3e-7, -2e-7);
        let series = expm1_complex(w);
        let reference = w + w * w / 2.0 + w * w * w / 6.0;
        assert!((series - reference).norm() < 1e-22);
        let big = C64::new(0.3, 1.0);
        assert!((expm1_complex(big) - (big.exp() - 1.0)).norm() < 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn f_factor_in_unit_interval_and_decreasing(z in 0.0f64..200.0, dz in 1e-6f64..10.0) {
            let (a, b) = (f_factor(z), f_factor(z + dz));
            proptest::prop_assert!(a > 0.0 && a <= 1.0);
            proptest::prop_assert!(b < a);
        }

        #[test]
        fn normalization_above_one(x0 in -8.0f64..-0.01, p0 in -3.0f64..3.0) {
            let n = normalization(&params(x0, p0)).unwrap();
            proptest::prop_assert!(n > 1.0 || z0(&params(x0, p0)) > 37.0);
        }
    }
}
