//! Closed forms against quadrature, finite differences and time stepping.

use std::f64::consts::PI;

use bouncer::free::psi_free;
use bouncer::oracle::{self, sample, GridSpec, GridState, Propagator};
use bouncer::special::{psi0_bouncer, psi0_moments};
use bouncer::{BouncerParams, PacketParams, SpecialParams};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn demo() -> BouncerParams {
    BouncerParams::new(PacketParams::natural(-10.0, 5.0, 1.0).unwrap()).unwrap()
}

fn state(bp: &BouncerParams, grid: GridSpec, t: f64) -> GridState {
    sample(|x, t| bp.psi(x, t), grid, t, bp.base().units())
}

#[test]
fn ehrenfest_velocity() {
    let bp = demo();
    let grid = GridSpec::for_bouncer(bp.base(), 4.5).unwrap();
    let dt = 1e-3;
    for t in [0.5, 1.5, 2.0, 2.5, 3.5] {
        let x = |t| oracle::moment_x(&state(&bp, grid, t), 1).unwrap();
        let velocity = (x(t + dt) - x(t - dt)) / (2.0 * dt);
        let p = oracle::moment_p(&state(&bp, grid, t), 1).unwrap();
        assert!((velocity - p / bp.base().mass()).abs() < 1e-4, "t={t}: {velocity} vs {p}");
    }
}

#[test]
fn far_from_wall_follows_classical_path() {
    let bp = demo();
    let grid = GridSpec::for_bouncer(bp.base(), 4.0).unwrap();
    for t in [0.0, 0.25, 0.5, 3.75, 4.0] {
        let x = oracle::moment_x(&state(&bp, grid, t), 1).unwrap();
        let tol = 1e-3 * bp.base().beta_t(t);
        assert!((x - bp.x_classical(t)).abs() < tol, "t={t}: {x}");
    }
}

#[test]
fn half_line_holds_half_of_the_odd_extension() {
    let p = PacketParams::natural(-1.2, 0.7, 1.0).unwrap();
    let odd = |x: f64, t: f64| psi_free(&p, x, t) - psi_free(&p, -x, t);
    for t in [0.0, 2.0] {
        let reach = 12.0 * p.beta_t(t) + p.center(t).abs();
        let full = GridSpec::interval_with_spacing(-reach, reach, 0.01).unwrap();
        let half = GridSpec::half_line_with_spacing(-reach, 0.01).unwrap();
        let whole = oracle::moment_x(&sample(odd, full, t, p.units()), 0).unwrap();
        let left = oracle::moment_x(&sample(odd, half, t, p.units()), 0).unwrap();
        assert!((whole - 2.0 * left).abs() < 1e-12, "{whole} vs {left}");
    }
}

#[test]
fn bouncer_vanishes_at_the_wall() {
    let bp = demo();
    for t in [0.0, 1.9, 2.0, 2.1, 6.0] {
        assert_eq!(bp.psi(0.0, t), C64::new(0.0, 0.0));
    }
}

#[test]
fn interference_fringes_at_collision() {
    let bp = demo();
    let grid = GridSpec::half_line_with_spacing(-6.0, 0.01).unwrap();
    let rho: Vec<f64> = state(&bp, grid, 2.0).densities().collect();
    let maxima = rho.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2] && w[1] > 1e-3).count();
    assert!(maxima >= 3, "{maxima} local maxima");
}

#[test]
fn psi0_loses_positive_momentum() {
    let sp = SpecialParams::at_origin(1.0, 1.0, 1.0).unwrap();
    let grid = GridSpec::half_line_with_spacing(-45.0, 0.01).unwrap();
    let fractions: Vec<f64> = [0.0, 0.5, 1.0, 3.0]
        .iter()
        .map(|&t| {
            let s = sample(|x, t| psi0_bouncer(&sp, x, t), grid, t, sp.packet().units());
            oracle::positive_momentum_fraction(&s, 12.0, 1201).unwrap()
        })
        .collect();
    assert!((fractions[0] - 0.5).abs() < 1e-9, "{fractions:?}");
    assert!(fractions.windows(2).all(|w| w[1] < w[0]), "{fractions:?}");
}

#[test]
fn propagated_psi0_matches_closed_form() {
    let sp = SpecialParams::at_origin(1.0, 1.0, 1.0).unwrap();
    let grid = GridSpec::half_line_with_spacing(-40.0, 0.005).unwrap();
    let initial = sample(|x, t| psi0_bouncer(&sp, x, t), grid, 0.0, sp.packet().units());
    let end = Propagator::new(grid, sp.packet().units(), 2.5e-4).unwrap().advance(&initial, 4000).unwrap();
    let exact = sample(|x, t| psi0_bouncer(&sp, x, t), grid, end.time, sp.packet().units());
    assert!(oracle::l2_distance(&end, &exact).unwrap() < 1e-5);
    let m = psi0_moments(&sp, end.time);
    assert!((oracle::moment_x(&end, 1).unwrap() - m.x_mean).abs() < 1e-5);
}

#[test]
fn collision_momentum_sign_flip() {
    let bp = demo();
    let grid = GridSpec::for_bouncer(bp.base(), 4.0).unwrap();
    let before = oracle::moment_p(&state(&bp, grid, 0.0), 1).unwrap();
    let after = oracle::moment_p(&state(&bp, grid, 4.0), 1).unwrap();
    assert!((before + after).abs() < 0.01 && before > 4.99, "{before} {after}");
    let at = oracle::moment_p(&state(&bp, grid, 2.0), 1).unwrap();
    assert!((at - bp.p_mean_at_collision().unwrap()).abs() < 0.05 * PI.sqrt().recip());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn normalized_and_even_moments_exact(
        x0 in -6.0f64..-0.5,
        p0 in 0.5f64..4.0,
        alpha in 0.6f64..1.6,
        frac in 0.0f64..2.0,
    ) {
        let p = PacketParams::natural(x0, p0, alpha).unwrap();
        let bp = BouncerParams::new(p).unwrap();
        let t = frac * bp.collision_time().unwrap();
        let grid = GridSpec::for_bouncer(&p, t).unwrap();
        let s = state(&bp, grid, t);
        let norm = oracle::moment_x(&s, 0).unwrap();
        prop_assert!((norm - 1.0).abs() < 1e-10, "norm {}", norm);
        let x2 = oracle::moment_x(&s, 2).unwrap();
        prop_assert!((x2 / bp.x2_expect(t) - 1.0).abs() < 1e-8);
        let p2 = oracle::moment_p(&s, 2).unwrap();
        prop_assert!((p2 / bp.p2_expect() - 1.0).abs() < 1e-5);
    }
}

#[test]
fn momentum_stencil_is_fourth_order() {
    let bp = demo();
    let exact = bp.p2_expect();
    let err = |h: f64| {
        let grid = GridSpec::half_line_with_spacing(-45.0, h).unwrap();
        (oracle::moment_p_with(&state(&bp, grid, 2.0), 2, 1e-3).unwrap() - exact).abs()
    };
    let ratio = err(0.02) / err(0.01);
    assert!((ratio / 16.0 - 1.0).abs() < 0.2, "ratio {ratio}");
}
