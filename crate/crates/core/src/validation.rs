//! Acceptance checks: every closed form against the numerical oracle at a
//! pinned tolerance. Each check reports pass/fail with the measured numbers.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::free::{free_moments, free_uncertainty_product, psi_free};
use crate::mirror::{energy_shift_closed_form, p2_closed_form, BouncerParams};
use crate::oracle::{self, bouncer_x_min, sample, GridSpec, GridState, Propagator};
use crate::params::{Moments, PacketParams};
use crate::special::{psi0_bouncer, psi0_moments, psi0_uncertainty_product, SpecialParams};

/// Seed for the random parameter sets of the normalization check.
pub const SEED: u64 = 2004;

/// Demo configuration x₀ = −10β, p₀ = 5ħ/β with ħ = m = α = 1.
pub fn demo_params() -> PacketParams {
    PacketParams::natural(-10.0, 5.0, 1.0).expect("demo parameters are valid")
}

/// Parameters for the checks that use the demo packet, with optional grid
/// overrides.
#[derive(Debug, Clone, Copy)]
pub struct ValidationConfig {
    pub demo: PacketParams,
    pub x_min: Option<f64>,
    pub n_points: Option<usize>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig { demo: demo_params(), x_min: None, n_points: None }
    }
}

impl ValidationConfig {
    fn demo_bouncer(&self) -> Result<BouncerParams> {
        let bp = BouncerParams::new(self.demo)?;
        bp.collision_time().ok_or(crate::Error::NoCollision)?;
        Ok(bp)
    }

    fn demo_grid(&self, t_max: f64) -> Result<GridSpec> {
        let x_min = self.x_min.unwrap_or_else(|| bouncer_x_min(&self.demo, t_max));
        match self.n_points {
            Some(n) => GridSpec::half_line(x_min, n),
            None => GridSpec::half_line_with_spacing(x_min, self.demo.beta() / oracle::POINTS_PER_BETA),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {} {}: {}", self.id, self.title, self.detail)
    }
}

struct Check {
    passed: bool,
    detail: String,
}

type CheckFn = fn(&ValidationConfig) -> Result<Check>;

const CRITERIA: &[(&str, &str, CheckFn)] = &[
    ("C1", "normalization exactness", normalization_exactness),
    ("C2", "even-moment closed forms", even_moments),
    ("C3", "energy-shift limit", energy_shift_limit),
    ("C4", "collision softening", collision_softening),
    ("C5", "collision momentum", collision_momentum),
    ("C6", "effective force", effective_force),
    ("C7", "autocorrelation", autocorrelation),
    ("C8", "special-solution moments", special_moments),
    ("C9", "uncertainty coefficients", uncertainty_coefficients),
    ("C10", "limit reduction", limit_reduction),
    ("C11", "PDE oracle equivalence", pde_equivalence),
];

pub fn criterion_ids() -> impl Iterator<Item = &'static str> {
    CRITERIA.iter().map(|(id, _, _)| *id)
}

pub fn run(id: &str, cfg: &ValidationConfig) -> Option<CriterionOutcome> {
    CRITERIA.iter().find(|(cid, _, _)| *cid == id).map(|&(id, title, check)| {
        let (passed, detail) = match check(cfg) {
            Ok(c) => (c.passed, c.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        CriterionOutcome { id, title, passed, detail }
    })
}

pub fn run_all(cfg: &ValidationConfig) -> Vec<CriterionOutcome> {
    criterion_ids().filter_map(|id| run(id, cfg)).collect()
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn bouncer_state(bp: &BouncerParams, grid: GridSpec, t: f64) -> GridState {
    sample(|x, t| bp.psi(x, t), grid, t, bp.base().units())
}

/// ⟨x⟩, ⟨x²⟩, ⟨p⟩, ⟨p²⟩ of a sampled state.
fn oracle_moments(state: &GridState) -> Result<Moments> {
    Ok(Moments::from_raw(
        state.time,
        oracle::moment_x(state, 1)?,
        oracle::moment_x(state, 2)?,
        oracle::moment_p(state, 1)?,
        oracle::moment_p(state, 2)?,
    ))
}

fn normalization_exactness(_: &ValidationConfig) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut worst_start, mut worst_later) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let z0: f64 = rng.gen_range(0.1..50.0);
        let angle: f64 = rng.gen_range(0.3..1.3);
        let alpha: f64 = rng.gen_range(0.5..2.0);
        let hbar: f64 = rng.gen_range(0.5..2.0);
        let mass: f64 = rng.gen_range(0.5..2.0);
        let beta = alpha * hbar;
        let x0 = -beta * z0.sqrt() * angle.cos();
        let p0 = hbar / beta * z0.sqrt() * angle.sin();
        let params = PacketParams::new(x0, p0, alpha, hbar, mass)?;
        let bp = BouncerParams::new(params)?;
        let tc = bp.collision_time().ok_or(crate::Error::NoCollision)?;
        let grid = GridSpec::for_bouncer(&params, 2.0 * tc)?;
        let n2 = bp.norm_n().powi(2);
        let difference = |x: f64, t: f64| {
            if x >= 0.0 {
                C64::new(0.0, 0.0)
            } else {
                psi_free(&params, x, t) - psi_free(&params, -x, t)
            }
        };
        let start = n2 * oracle::moment_x(&sample(difference, grid, 0.0, params.units()), 0)?;
        let later = n2 * oracle::moment_x(&sample(difference, grid, 2.0 * tc, params.units()), 0)?;
        worst_start = worst_start.max((start - 1.0).abs());
        worst_later = worst_later.max((later - 1.0).abs());
    }
    Ok(Check {
        passed: worst_start < 1e-9 && worst_later < 1e-8,
        detail: format!(
            "20 random sets, max |N²·norm − 1| = {worst_start:.2e} at t=0 (tol 1e-9), {worst_later:.2e} at t=2t_c (tol 1e-8)"
        ),
    })
}

fn even_moments(cfg: &ValidationConfig) -> Result<Check> {
    let bp = cfg.demo_bouncer()?;
    let tc = bp.collision_time().unwrap_or_default();
    let grid = cfg.demo_grid(3.0 * tc)?;
    let (mut worst_x2, mut worst_p2) = (0.0f64, 0.0f64);
    let mut p2_values = Vec::new();
    for k in 0..=12 {
        let t = 3.0 * tc * k as f64 / 12.0;
        let state = bouncer_state(&bp, grid, t);
        let x2 = oracle::moment_x(&state, 2)?;
        let p2 = oracle::moment_p(&state, 2)?;
        worst_x2 = worst_x2.max(relative(x2, bp.x2_expect(t)));
        worst_p2 = worst_p2.max(relative(p2, bp.p2_expect()));
        p2_values.push(p2);
    }
    let hi = p2_values.iter().copied().fold(f64::MIN, f64::max);
    let lo = p2_values.iter().copied().fold(f64::MAX, f64::min);
    let spread = (hi - lo) / lo;
    Ok(Check {
        passed: worst_x2 < 1e-6 && worst_p2 < 1e-6 && spread < 1e-6,
        detail: format!(
            "13 times in [0, 3t_c]: max rel err <x²> {worst_x2:.2e}, <p²> {worst_p2:.2e}; <p²> oracle spread {spread:.2e} (tol 1e-6)"
        ),
    })
}

fn energy_shift_limit(_: &ValidationConfig) -> Result<Check> {
    let ratio = |params: &PacketParams| {
        let free = free_moments(params, 0.0).p2_mean;
        (p2_closed_form(params) - free) / free
    };
    let at_origin = PacketParams::natural(0.0, 0.0, 1.0)?;
    let exact = ratio(&at_origin);
    let approx = energy_shift_closed_form(&at_origin);
    let near = PacketParams::natural(-1e-7, 1e-7, 1.0)?;
    let near_err = (ratio(&near) - 2.0).abs();
    let err = (exact - 2.0).abs().max((approx - 2.0).abs());
    Ok(Check {
        passed: err < 1e-12 && near_err < 1e-12,
        detail: format!(
            "x0=p0=0: exact ratio {exact}, ΔE/E {approx} (|err| {err:.1e}, tol 1e-12); x0,p0=±1e-7: |ratio−2| {near_err:.1e}"
        ),
    })
}

/// x₀ = −15β, p₀ = 5ħ/β: z₀ = 250, t_c = 3t₀.
fn collision_params() -> Result<BouncerParams> {
    BouncerParams::new(PacketParams::natural(-15.0, 5.0, 1.0)?)
}

fn collision_softening(_: &ValidationConfig) -> Result<Check> {
    let bp = collision_params()?;
    let base = *bp.base();
    let tc = bp.collision_time().unwrap_or_default();
    let beta_tc = base.beta_t(tc);
    let grid = GridSpec::for_bouncer(&base, tc + 2.0 * beta_tc * base.mass() / base.p0())?;
    let at_tc = oracle::moment_x(&bouncer_state(&bp, grid, tc), 1)?;
    let leading = -beta_tc / PI.sqrt();
    let lead_err = relative(at_tc, leading);
    let mut tighter = true;
    let mut pairs = Vec::new();
    for f in [-0.8, -0.4, 0.2, 0.4, 0.8] {
        let t = tc + f * beta_tc * base.mass() / base.p0();
        let x = oracle::moment_x(&bouncer_state(&bp, grid, t), 1)?;
        let one = (x - (-base.beta_t(t) / PI.sqrt())).abs();
        let two = (x - bp.x_mean_near_collision(t).value).abs();
        tighter &= two < one;
        pairs.push(format!("{one:.1e}→{two:.1e}"));
    }
    Ok(Check {
        passed: lead_err < 0.05 && tighter,
        detail: format!(
            "z0=250, t_c=3t0: <x>(t_c) = {at_tc:.6} vs −β_t/√π = {leading:.6} (rel {lead_err:.2e}, tol 5%); one→two-term errors {}",
            pairs.join(", ")
        ),
    })
}

fn collision_momentum(_: &ValidationConfig) -> Result<Check> {
    let mut worst = 0.0f64;
    let mut distances = Vec::new();
    let mut closed_distances = Vec::new();
    for ratio in [3.0, 10.0, 30.0] {
        let bp = BouncerParams::new(PacketParams::natural(-5.0 * ratio, 5.0, 1.0)?)?;
        let tc = bp.collision_time().unwrap_or_default();
        let grid = GridSpec::for_bouncer(bp.base(), tc)?;
        let numeric = oracle::moment_p(&bouncer_state(&bp, grid, tc), 1)?;
        let closed = bp.p_mean_at_collision()?;
        worst = worst.max(relative(numeric, closed));
        distances.push((numeric - bp.p_mean_collision_asymptote()).abs());
        closed_distances.push((closed - bp.p_mean_collision_asymptote()).abs());
    }
    let monotone = distances.windows(2).all(|w| w[1] < w[0]) && closed_distances.windows(2).all(|w| w[1] < w[0]);
    Ok(Check {
        passed: worst < 0.1 && monotone,
        detail: format!(
            "t_c/t0 ∈ {{3,10,30}}: max rel err {worst:.2e} (tol 10%); |<p> − asymptote| = {:.2e}, {:.2e}, {:.2e}",
            distances[0], distances[1], distances[2]
        ),
    })
}

fn effective_force(_: &ValidationConfig) -> Result<Check> {
    let bp = collision_params()?;
    let base = *bp.base();
    let tc = bp.collision_time().unwrap_or_default();
    let dt = 0.02 * base.t0();
    let grid = GridSpec::for_bouncer(&base, tc + dt)?;
    let x = |t: f64| oracle::moment_x(&bouncer_state(&bp, grid, t), 1);
    let numeric = base.mass() * (x(tc + dt)? - 2.0 * x(tc)? + x(tc - dt)?) / (dt * dt);
    let closed = bp.effective_force()?;
    let err = relative(numeric, closed.force);
    let ratio = numeric / closed.dimensional_estimate;
    let ratio_err = relative(ratio, 1.0 / PI.sqrt());
    Ok(Check {
        passed: err < 0.15 && ratio_err < 0.15,
        detail: format!(
            "m·Δ²<x>/Δt² = {numeric:.6} vs {:.6} (rel {err:.2e}, tol 15%); ratio to dimensional estimate {ratio:.6} vs 1/√π (rel {ratio_err:.2e})",
            closed.force
        ),
    })
}

fn autocorrelation(cfg: &ValidationConfig) -> Result<Check> {
    let bp = cfg.demo_bouncer()?;
    let tc = bp.collision_time().unwrap_or_default();
    let grid = cfg.demo_grid(3.0 * tc)?;
    let initial = bouncer_state(&bp, grid, 0.0);
    oracle::check_tails(&initial)?;
    let mut worst = 0.0f64;
    let mut moduli = Vec::new();
    for k in 0..=30 {
        let t = 3.0 * tc * k as f64 / 30.0;
        let later = bouncer_state(&bp, grid, t);
        oracle::check_tails(&later)?;
        let numeric = oracle::overlap(&initial, &later)?;
        let closed = bp.autocorrelation(t);
        worst = worst.max((numeric - closed).norm());
        moduli.push(closed.norm());
    }
    let monotone = moduli.windows(2).all(|w| w[1] < w[0]);
    Ok(Check {
        passed: worst < 1e-6 && monotone,
        detail: format!(
            "31 times in [0, 3t_c]: max |Ã − overlap| = {worst:.2e} (tol 1e-6); |Ã| strictly decreasing: {monotone}"
        ),
    })
}

fn special_state(sp: &SpecialParams, t: f64) -> Result<GridState> {
    let x_min = -oracle::TAIL_WIDTHS * sp.packet().beta_t(t).max(sp.beta());
    let grid = GridSpec::half_line_with_spacing(x_min, sp.beta() / oracle::POINTS_PER_BETA)?;
    Ok(sample(|x, t| psi0_bouncer(sp, x, t), grid, t, sp.packet().units()))
}

fn special_moments(_: &ValidationConfig) -> Result<Check> {
    let sp = SpecialParams::at_origin(1.0, 1.0, 1.0)?;
    let mut worst = 0.0f64;
    for t in [0.0, 1.0, 3.0].map(|k| k * sp.t0()) {
        let numeric = oracle_moments(&special_state(&sp, t)?)?;
        let closed = psi0_moments(&sp, t);
        for (a, b) in [
            (numeric.x_mean, closed.x_mean),
            (numeric.x2_mean, closed.x2_mean),
            (numeric.x_sd, closed.x_sd),
            (numeric.p_mean, closed.p_mean),
            (numeric.p2_mean, closed.p2_mean),
            (numeric.p_sd, closed.p_sd),
        ] {
            worst = worst.max((a - b).abs());
        }
    }
    let k = sp.hbar() / sp.beta();
    let spreads: Vec<f64> = (0..=500).map(|i| psi0_moments(&sp, 0.1 * i as f64 * sp.t0()).p_sd).collect();
    let decreasing = spreads.windows(2).all(|w| w[1] < w[0]);
    let start_err = (psi0_moments(&sp, 0.0).p_sd - 1.5f64.sqrt() * k).abs();
    let end_err = (psi0_moments(&sp, 1e8 * sp.t0()).p_sd - (1.5 - 4.0 / PI).sqrt() * k).abs();
    Ok(Check {
        passed: worst < 1e-7 && decreasing && start_err < 1e-9 && end_err < 1e-9,
        detail: format!(
            "t ∈ {{0, t0, 3t0}}: max |oracle − closed| over <x>,<x²>,Δx,<p>,<p²>,Δp = {worst:.2e} (tol 1e-7); Δp decreasing: {decreasing}; endpoint errors {start_err:.1e}, {end_err:.1e} (tol 1e-9)"
        ),
    })
}

fn uncertainty_coefficients(_: &ValidationConfig) -> Result<Check> {
    let sp = SpecialParams::at_origin(1.0, 1.0, 1.0)?;
    let initial = psi0_uncertainty_product(&sp, 0.0) / sp.hbar();
    let numeric = oracle_moments(&special_state(&sp, 0.0)?)?.uncertainty_product() / sp.hbar();
    let late = 1e6 * sp.t0();
    let ratio = psi0_uncertainty_product(&sp, late) / free_uncertainty_product(sp.packet(), late);
    let (a, b, c) = (format!("{initial:.2}"), format!("{numeric:.2}"), format!("{ratio:.2}"));
    Ok(Check {
        passed: a == "0.58" && b == "0.58" && c == "0.45",
        detail: format!(
            "t=0 product {initial:.4}ħ (oracle {numeric:.4}ħ) → {a}; long-time ratio {ratio:.4} → {c}"
        ),
    })
}

fn limit_reduction(_: &ValidationConfig) -> Result<Check> {
    let z0: f64 = 1e-6;
    let half = (z0 / 2.0).sqrt();
    let params = PacketParams::natural(-half, half, 1.0)?;
    let bp = BouncerParams::new(params)?;
    let sp = SpecialParams::at_origin(params.alpha(), params.hbar(), params.mass())?;
    let mut worst = 0.0f64;
    for t in [0.0, 0.5, 1.0, 3.0].map(|k| k * params.t0()) {
        let reach = 8.0 * params.beta_t(t);
        for i in 0..=120 {
            let x = -reach + reach * i as f64 / 120.0;
            worst = worst.max((bp.psi(x, t).norm() - psi0_bouncer(&sp, x, t).norm()).abs());
        }
    }
    Ok(Check {
        passed: worst < 1e-3,
        detail: format!("z0 = {:.1e}: max ||ψ̃_G| − |ψ̃₀|| = {worst:.2e} over 484 (x,t) samples (tol 1e-3)", bp.z0()),
    })
}

/// Discrete L2 error of the propagated demo packet at t = 2t_c.
fn propagation_error(bp: &BouncerParams, grid: GridSpec, dt: f64, steps: usize) -> Result<f64> {
    let initial = bouncer_state(bp, grid, 0.0);
    let propagated = Propagator::new(grid, bp.base().units(), dt)?.advance(&initial, steps)?;
    let exact = bouncer_state(bp, grid, propagated.time);
    oracle::l2_distance(&propagated, &exact)
}

/// Grid of the propagation check: spacing β/200, time step t₀/4000.
pub const PDE_POINTS_PER_BETA: f64 = 200.0;
pub const PDE_STEPS_PER_T0: f64 = 4000.0;

fn pde_equivalence(cfg: &ValidationConfig) -> Result<Check> {
    let bp = cfg.demo_bouncer()?;
    let base = *bp.base();
    let horizon = 2.0 * bp.collision_time().unwrap_or_default();
    let x_min = cfg.x_min.unwrap_or_else(|| bouncer_x_min(&base, horizon));
    let grid = GridSpec::half_line_with_spacing(x_min, base.beta() / PDE_POINTS_PER_BETA)?;
    oracle::check_tails(&bouncer_state(&bp, grid, horizon))?;
    let dt = base.t0() / PDE_STEPS_PER_T0;
    let steps = (horizon / dt).round() as usize;
    let dt = horizon / steps as f64;
    let (coarse, fine) = rayon::join(
        || propagation_error(&bp, grid, dt, steps),
        || propagation_error(&bp, grid.refined(), 0.5 * dt, 2 * steps),
    );
    let (coarse, fine) = (coarse?, fine?);
    let ratio = coarse / fine;
    // Time stepping is second order and dominates the fourth-order spatial
    // error, so halving (h, dt) should divide the error by 4.
    let order_err = (ratio / 4.0 - 1.0).abs();
    Ok(Check {
        passed: coarse < 1e-4 && order_err <= 0.2,
        detail: format!(
            "h=β/{PDE_POINTS_PER_BETA}, dt=t0/{PDE_STEPS_PER_T0}, {} points × {steps} steps: L2 error {coarse:.2e} (tol 1e-4); halved: {fine:.2e}, ratio {ratio:.3} vs 4 (±20%)",
            grid.n_points()
        ),
    })
}
