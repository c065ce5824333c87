//! Numerical machinery independent of the closed forms: grid quadrature for
//! moments and overlaps, finite-difference momentum operators, and a
//! norm-preserving hard-wall propagator.

mod grid;
mod propagate;
pub mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

pub use grid::{bouncer_x_min, sample, GridSpec, GridState, POINTS_PER_BETA, TAIL_WIDTHS};
pub use propagate::{propagate, Propagator};
pub use quadrature::Integrator;

use crate::error::{Error, Result};

/// Edge amplitude allowed relative to the peak before a grid is rejected.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// Default relative discretization tolerance for [`moment_p`].
pub const MOMENTUM_TOLERANCE: f64 = 1e-6;

/// Rejects states whose amplitude at an open grid edge is not negligible.
/// The wall end of a half-line grid is exempt.
pub fn check_tails(state: &GridState) -> Result<()> {
    let peak = state.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(());
    }
    let limit = TAIL_TOLERANCE * peak;
    let grid = &state.grid;
    let span = grid.x_max() - grid.x_min();
    let left = state.values[0].norm();
    if left >= limit {
        return Err(Error::TailNotCaptured {
            at: grid.x_min(),
            edge: left,
            limit,
            suggested: grid.x_max() - 2.0 * span,
        });
    }
    let right = state.values[grid.n_points() - 1].norm();
    if !grid.is_half_line() && right >= limit {
        return Err(Error::TailNotCaptured {
            at: grid.x_max(),
            edge: right,
            limit,
            suggested: grid.x_min() + 2.0 * span,
        });
    }
    Ok(())
}

/// ∫ xⁿ |ψ|² dx by composite Simpson. Order 0 is the norm.
pub fn moment_x(state: &GridState, order: u32) -> Result<f64> {
    moment_x_with(state, order, Integrator::Simpson)
}

pub fn moment_x_with(state: &GridState, order: u32, rule: Integrator) -> Result<f64> {
    check_tails(state)?;
    let integrand: Vec<f64> = state
        .grid
        .points()
        .zip(&state.values)
        .map(|(x, v)| x.powi(order as i32) * v.norm_sqr())
        .collect();
    Ok(quadrature::integrate(&integrand, state.grid.spacing(), rule))
}

/// ∂ψ/∂x with fourth-order central stencils.
///
/// On a half-line grid the state is continued past the wall as an odd
/// function, ψ(h) = −ψ(−h), which holds for any solution pinned to zero
/// there; this keeps the wall stencil fourth order. The open end falls back
/// to second-order central and one-sided stencils.
pub fn derivative(state: &GridState) -> Vec<C64> {
    let v = &state.values;
    let n = v.len() as isize;
    let h = state.grid.spacing();
    let odd_wall = state.grid.is_half_line();
    let at = |j: isize| -> Option<C64> {
        if j < 0 {
            None
        } else if j < n {
            Some(v[j as usize])
        } else if odd_wall && j <= 2 * (n - 1) {
            Some(-v[(2 * (n - 1) - j) as usize])
        } else {
            None
        }
    };
    (0..n)
        .map(|i| {
            if let (Some(m2), Some(m1), Some(p1), Some(p2)) = (at(i - 2), at(i - 1), at(i + 1), at(i + 2)) {
                (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h)
            } else if let (Some(m1), Some(p1)) = (at(i - 1), at(i + 1)) {
                (p1 - m1) / (2.0 * h)
            } else if i == 0 {
                (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
            } else {
                let k = i as usize;
                (3.0 * v[k] - 4.0 * v[k - 1] + v[k - 2]) / (2.0 * h)
            }
        })
        .collect()
}

fn momentum_moment(state: &GridState, order: u32) -> f64 {
    let hbar = state.units.hbar;
    let d = derivative(state);
    let h = state.grid.spacing();
    match order {
        1 => {
            let integrand: Vec<f64> = state.values.iter().zip(&d).map(|(v, dv)| (v.conj() * dv).im).collect();
            hbar * quadrature::integrate(&integrand, h, Integrator::Simpson)
        }
        _ => {
            let integrand: Vec<f64> = d.iter().map(|dv| dv.norm_sqr()).collect();
            hbar * hbar * quadrature::integrate(&integrand, h, Integrator::Simpson)
        }
    }
}

/// ⟨p⟩ = Re∫ψ*(ħ/i)∂ₓψ dx (order 1) or ⟨p²⟩ = ħ²∫|∂ₓψ|² dx (order 2), with
/// the default tolerance [`MOMENTUM_TOLERANCE`].
pub fn moment_p(state: &GridState, order: u32) -> Result<f64> {
    moment_p_with(state, order, MOMENTUM_TOLERANCE)
}

/// As [`moment_p`], failing when the discretization error estimated from
/// the every-other-point grid exceeds `tolerance` relative to the
/// momentum scale sqrt(⟨p²⟩).
pub fn moment_p_with(state: &GridState, order: u32, tolerance: f64) -> Result<f64> {
    if order != 1 && order != 2 {
        return Err(Error::InvalidParams(format!("momentum moment order must be 1 or 2, got {order}")));
    }
    check_tails(state)?;
    let coarse = state
        .coarsened()
        .filter(|c| c.grid.n_points() >= 5)
        .ok_or_else(|| Error::InvalidGrid("too few points for a momentum convergence check".into()))?;
    let fine = momentum_moment(state, order);
    let rough = momentum_moment(&coarse, order);
    let p2 = if order == 2 { fine } else { momentum_moment(state, 2) };
    let scale = if order == 2 { p2 } else { p2.sqrt() };
    // fourth order: coarse error is 16x the fine error
    let estimate = (fine - rough).abs() / 15.0;
    if !fine.is_finite() {
        return Err(Error::NonFinite("momentum moment".into()));
    }
    if estimate > tolerance * scale {
        return Err(Error::NotConverged { estimate, tolerance: tolerance * scale });
    }
    Ok(fine)
}

/// ∫ a* b dx.
pub fn overlap(a: &GridState, b: &GridState) -> Result<C64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let integrand: Vec<C64> = a.values.iter().zip(&b.values).map(|(x, y)| x.conj() * y).collect();
    Ok(quadrature::integrate_complex(&integrand, a.grid.spacing(), Integrator::Simpson))
}

/// Discrete L2 distance sqrt(∫|a − b|² dx).
pub fn l2_distance(a: &GridState, b: &GridState) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let integrand: Vec<f64> = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm_sqr()).collect();
    Ok(quadrature::integrate(&integrand, a.grid.spacing(), Integrator::Simpson).sqrt())
}

/// φ(p) = (2πħ)^(−1/2) ∫ψ(x) e^(−ipx/ħ) dx by direct quadrature.
pub fn momentum_amplitude(state: &GridState, p: f64) -> C64 {
    let hbar = state.units.hbar;
    let integrand: Vec<C64> = state
        .grid
        .points()
        .zip(&state.values)
        .map(|(x, v)| v * C64::new(0.0, -p * x / hbar).exp())
        .collect();
    quadrature::integrate_complex(&integrand, state.grid.spacing(), Integrator::Simpson) / (2.0 * PI * hbar).sqrt()
}

/// Share of the momentum distribution on p > 0, integrating |φ|² over
/// [−p_max, p_max] with `n_p` (odd) samples.
pub fn positive_momentum_fraction(state: &GridState, p_max: f64, n_p: usize) -> Result<f64> {
    let grid = GridSpec::interval(-p_max, p_max, n_p)?;
    let density: Vec<f64> = grid.points().map(|p| momentum_amplitude(state, p).norm_sqr()).collect();
    let h = grid.spacing();
    let total = quadrature::integrate(&density, h, Integrator::Simpson);
    let mid = n_p / 2;
    let positive = quadrature::integrate(&density[mid..], h, Integrator::Simpson);
    Ok(positive / total)
}
