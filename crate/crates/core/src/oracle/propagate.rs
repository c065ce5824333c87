//! Cayley (Crank–Nicolson) stepping of the free Hamiltonian with Dirichlet
//! ends. The kinetic operator is the compact fourth-order (Numerov) form
//! −(ħ²/2m)·M⁻¹δ²/h² with M = 1 + δ²/12, so both sides of the step stay
//! tridiagonal. M and δ² commute, the discrete Hamiltonian is Hermitian, and
//! each step is unitary in the discrete l² norm.

use num_complex::Complex64 as C64;

use super::grid::{GridSpec, GridState};
use crate::error::{Error, Result};
use crate::params::Units;

/// Pre-factorized step operator for one grid, unit system and time step.
#[derive(Debug, Clone)]
pub struct Propagator {
    grid: GridSpec,
    units: Units,
    dt: f64,
    off_lhs: C64,
    diag_rhs: C64,
    off_rhs: C64,
    // Thomas factors of the constant left-hand matrix
    upper: Vec<C64>,
    inv_pivot: Vec<C64>,
}

impl Propagator {
    pub fn new(grid: GridSpec, units: Units, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::InvalidParams(format!("time step must be finite and nonzero, got {dt}")));
        }
        let h = grid.spacing();
        let c = C64::new(0.0, dt * units.hbar / (4.0 * units.mass * h * h));
        let (m_diag, m_off) = (10.0 / 12.0, 1.0 / 12.0);
        let diag_lhs = m_diag + 2.0 * c;
        let off_lhs = m_off - c;
        let interior = grid.n_points() - 2;
        let mut upper = Vec::with_capacity(interior);
        let mut inv_pivot = Vec::with_capacity(interior);
        let mut prev_upper = C64::new(0.0, 0.0);
        for _ in 0..interior {
            let pivot = diag_lhs - off_lhs * prev_upper;
            if pivot.norm() < 1e-300 {
                return Err(Error::NonFinite("singular Cayley matrix".into()));
            }
            let inv = pivot.inv();
            prev_upper = off_lhs * inv;
            upper.push(prev_upper);
            inv_pivot.push(inv);
        }
        Ok(Propagator {
            grid,
            units,
            dt,
            off_lhs,
            diag_rhs: m_diag - 2.0 * c,
            off_rhs: m_off + c,
            upper,
            inv_pivot,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// One step in place on the full grid; both end values are pinned to 0.
    fn step(&self, psi: &mut [C64], work: &mut [C64]) {
        let n = psi.len();
        psi[0] = C64::new(0.0, 0.0);
        psi[n - 1] = C64::new(0.0, 0.0);
        let interior = n - 2;
        // forward sweep on the right-hand side
        let mut prev = C64::new(0.0, 0.0);
        for (k, slot) in work.iter_mut().enumerate().take(interior) {
            let i = k + 1;
            let rhs = self.diag_rhs * psi[i] + self.off_rhs * (psi[i - 1] + psi[i + 1]);
            prev = (rhs - self.off_lhs * prev) * self.inv_pivot[k];
            *slot = prev;
        }
        // back substitution
        let mut next = C64::new(0.0, 0.0);
        for k in (0..interior).rev() {
            next = work[k] - self.upper[k] * next;
            psi[k + 1] = next;
        }
    }

    pub fn advance(&self, state: &GridState, steps: usize) -> Result<GridState> {
        if state.grid != self.grid {
            return Err(Error::GridMismatch);
        }
        if state.units != self.units {
            return Err(Error::InvalidParams("state and propagator use different units".into()));
        }
        let mut psi = state.values.clone();
        let mut work = vec![C64::new(0.0, 0.0); psi.len().saturating_sub(2)];
        for _ in 0..steps {
            self.step(&mut psi, &mut work);
        }
        if psi.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("propagated state".into()));
        }
        Ok(GridState { grid: self.grid, values: psi, time: state.time + steps as f64 * self.dt, units: self.units })
    }
}

/// Evolves `initial` by `steps` steps of size `dt` (negative `dt` runs
/// backward).
pub fn propagate(initial: &GridState, dt: f64, steps: usize) -> Result<GridState> {
    Propagator::new(initial.grid, initial.units, dt)?.advance(initial, steps)
}
