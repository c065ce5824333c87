use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::{PacketParams, Units};

/// Grid extent in units of the widest β_t, either side of the packet.
pub const TAIL_WIDTHS: f64 = 12.0;

/// Default grid resolution in units of β.
pub const POINTS_PER_BETA: f64 = 100.0;

/// Uniform grid on [x_min, x_max] with an odd number of points. Half-line
/// grids end exactly at the wall, x_max = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl GridSpec {
    pub fn half_line(x_min: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_min < 0.0) {
            return Err(Error::InvalidGrid(format!("x_min must be finite and < 0, got {x_min}")));
        }
        Self::interval(x_min, 0.0, n_points)
    }

    pub fn interval(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidGrid(format!("need finite x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if n_points < 3 || n_points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("n_points must be odd and >= 3, got {n_points}")));
        }
        Ok(GridSpec { x_min, x_max, n_points })
    }

    /// Smallest odd point count on [x_min, x_max] with spacing ≤ `max_spacing`.
    pub fn interval_with_spacing(x_min: f64, x_max: f64, max_spacing: f64) -> Result<Self> {
        if !(max_spacing.is_finite() && max_spacing > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be > 0, got {max_spacing}")));
        }
        let mut intervals = ((x_max - x_min) / max_spacing).ceil().max(2.0) as usize;
        intervals += intervals % 2;
        Self::interval(x_min, x_max, intervals + 1)
    }

    pub fn half_line_with_spacing(x_min: f64, max_spacing: f64) -> Result<Self> {
        if !(x_min.is_finite() && x_min < 0.0) {
            return Err(Error::InvalidGrid(format!("x_min must be finite and < 0, got {x_min}")));
        }
        Self::interval_with_spacing(x_min, 0.0, max_spacing)
    }

    /// Half-line grid wide enough for a bouncing packet on [0, t_max]: the
    /// farthest center plus [`TAIL_WIDTHS`]·β_t, at spacing β/[`POINTS_PER_BETA`].
    pub fn for_bouncer(params: &PacketParams, t_max: f64) -> Result<Self> {
        Self::half_line_with_spacing(bouncer_x_min(params, t_max), params.beta() / POINTS_PER_BETA)
    }

    /// Full-line grid covering a free packet for t in [t_min, t_max].
    pub fn for_free(params: &PacketParams, t_min: f64, t_max: f64) -> Result<Self> {
        let width = TAIL_WIDTHS * params.beta_t(t_min).max(params.beta_t(t_max));
        let (a, b) = (params.center(t_min), params.center(t_max));
        Self::interval_with_spacing(a.min(b) - width, a.max(b) + width, params.beta() / POINTS_PER_BETA)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn is_half_line(&self) -> bool {
        self.x_max == 0.0
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.point(i))
    }

    /// Same interval at half the spacing.
    pub fn refined(&self) -> Self {
        GridSpec { n_points: 2 * self.n_points - 1, ..*self }
    }

    /// Same interval keeping every other point.
    pub fn coarsened(&self) -> Option<Self> {
        let n = self.n_points.div_ceil(2);
        (n >= 3).then_some(GridSpec { n_points: n, ..*self })
    }
}

/// x_min = −(max |X(t)| + 12·β_{t_max}) for t in [0, t_max].
pub fn bouncer_x_min(params: &PacketParams, t_max: f64) -> f64 {
    let reach = params.x0().abs().max(params.center(t_max).abs());
    -(reach + TAIL_WIDTHS * params.beta_t(t_max))
}

/// Wavefunction samples on a grid at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub grid: GridSpec,
    pub values: Vec<C64>,
    pub time: f64,
    pub units: Units,
}

impl GridState {
    pub fn new(grid: GridSpec, values: Vec<C64>, time: f64, units: Units) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.n_points()
            )));
        }
        Ok(GridState { grid, values, time, units })
    }

    pub fn zeros(grid: GridSpec, time: f64, units: Units) -> Self {
        GridState { grid, values: vec![C64::new(0.0, 0.0); grid.n_points()], time, units }
    }

    pub fn densities(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(|v| v.norm_sqr())
    }

    /// Every other sample, on [`GridSpec::coarsened`].
    pub fn coarsened(&self) -> Option<Self> {
        let grid = self.grid.coarsened()?;
        Some(GridState {
            grid,
            values: self.values.iter().step_by(2).copied().collect(),
            time: self.time,
            units: self.units,
        })
    }
}

/// Evaluates `wavefn(x, t)` at every grid point.
pub fn sample<F>(wavefn: F, grid: GridSpec, t: f64, units: Units) -> GridState
where
    F: Fn(f64, f64) -> C64,
{
    GridState { grid, values: grid.points().map(|x| wavefn(x, t)).collect(), time: t, units }
}
