mod common;

use metamorph_core::dynamics::DynamicsError;
use metamorph_core::frames::{mirror_attitude, mirror_vector};
use metamorph_core::scenario::{
    builtin, HoverProfile, Recorder, RunError, SimError, BUILTIN_SCENARIOS, DERIVED_HOVER_BALANCE_THRUST,
};
use metamorph_core::trim::{hover_balance_thrust, steady_spin, trim, trim_glide, TrimGuess, TOLERANCE};
use metamorph_core::{RunOptions, Scenario};

fn quick() -> RunOptions {
    RunOptions {
        output_every: 50,
        segment_telemetry: false,
        ..RunOptions::default()
    }
}

fn record(sim: &metamorph_core::Simulator, sc: &Scenario, opts: &RunOptions) -> Recorder {
    let mut rec = Recorder::default();
    sim.run(sc, opts, &mut rec).unwrap();
    rec
}

#[test]
fn glide_trim_is_symmetric_equilibrium() {
    let sim = common::simulator();
    let t = trim_glide(&sim, &TrimGuess::default()).unwrap();
    assert!(t.residual.force.amax() < TOLERANCE && t.residual.moment.amax() < TOLERANCE);
    assert!(t.residual.force.y.abs() < 1e-10);
    assert!(t.residual.moment.x.abs() < 1e-10 && t.residual.moment.z.abs() < 1e-10);
    assert!(t.gamma < 0.0);
    // unpowered: aerodynamic force cancels weight, so D/L = tan(-gamma)
    let glide = 1.0 / (-t.gamma).tan();
    assert!((t.lift_to_drag - glide).abs() / glide < 0.01, "{} vs {}", t.lift_to_drag, glide);
}

#[test]
fn glide_trim_is_statically_stable_in_pitch() {
    let sim = common::simulator();
    let t = trim_glide(&sim, &TrimGuess::default()).unwrap();
    for d in [-1.0f64, 1.0] {
        let mut s = t.state;
        let a = t.alpha + d.to_radians();
        s.velocity = metamorph_core::Vec3::new(t.airspeed * a.cos(), 0.0, t.airspeed * a.sin());
        let m = sim.loads(&s, &t.actuation, false, None).unwrap().total.moment.y;
        assert!(m * d < 0.0, "dalpha {d} deg gives M_y {m}");
    }
}

#[test]
fn powered_trim_climbs() {
    let sim = common::simulator();
    let glide = trim_glide(&sim, &TrimGuess::default()).unwrap();
    let powered = trim(&sim, &TrimGuess::default(), 0.3).unwrap();
    assert!(powered.gamma > 0.0);
    assert!(powered.gamma > glide.gamma);
}

#[test]
fn hover_balance_reproduces_shipped_default() {
    let sim = common::simulator();
    let b = hover_balance_thrust(&sim).unwrap();
    assert!((b.thrust - DERIVED_HOVER_BALANCE_THRUST).abs() / DERIVED_HOVER_BALANCE_THRUST < 0.01, "{}", b.thrust);
    assert!(b.vertical_residual.abs() < 1e-6);
    assert!(b.spin_rate.abs() > 1.0);
}

#[test]
fn steady_spin_grows_with_thrust() {
    let sim = common::simulator();
    let spins: Vec<f64> = [0.1, 0.16, 0.24, 0.3]
        .iter()
        .map(|&t| steady_spin(&sim, t).unwrap().abs())
        .collect();
    assert!(spins.windows(2).all(|w| w[1] > w[0]), "{spins:?}");
}

#[test]
fn builtins_run_to_completion() {
    let sim = common::simulator();
    let profile = HoverProfile::default();
    for name in BUILTIN_SCENARIOS {
        let sc = builtin(name, &sim, &profile).unwrap();
        let mut rec = Recorder::default();
        let summary = sim.run(&sc, &quick(), &mut rec).unwrap();
        assert_eq!(summary.steps, (sc.duration / 1e-3).round() as usize);
        assert!(rec.vehicle.iter().all(|s| s.state.is_finite() && s.loads.total.is_finite()), "{name}");
        assert_eq!(rec.vehicle.last().unwrap().state.time, sc.duration);
        assert_eq!(summary.clamped_steps, 0, "{name}");
    }
    assert!(builtin("loop", &sim, &profile).is_err());
}

#[test]
fn mirrored_roll_step_mirrors_trajectory() {
    let sim = common::simulator();
    let mut sc = builtin("cruise_roll", &sim, &HoverProfile::default()).unwrap();
    sc.duration = 3.0;
    let a = record(&sim, &sc, &quick());
    let b = record(&sim, &sc.mirrored(), &quick());
    for (x, y) in a.vehicle.iter().zip(&b.vehicle) {
        let (px, py) = (x.state.position, y.state.position);
        assert!((mirror_vector(&px) - py).amax() < 1e-9);
        let (p1, t1, s1) = x.state.euler();
        let (p2, t2, s2) = y.state.euler();
        assert!((p1 + p2).abs() < 1e-9 && (t1 - t2).abs() < 1e-9 && (s1 + s2).abs() < 1e-9);
        assert!(mirror_attitude(&x.state.attitude).angle_to(&y.state.attitude) < 1e-9);
    }
}

#[test]
fn repeated_runs_are_identical() {
    let sim = common::simulator();
    let mut sc = builtin("hover_spinup", &sim, &HoverProfile::default()).unwrap();
    sc.duration = 2.0;
    let opts = RunOptions::default();
    let a = record(&sim, &sc, &opts);
    let b = record(&sim, &sc, &opts);
    assert_eq!(a.vehicle, b.vehicle);
    assert_eq!(a.segments, b.segments);
}

#[test]
fn spinup_stays_on_ground_before_lift_off() {
    let sim = common::simulator();
    let sc = builtin("hover_spinup", &sim, &HoverProfile::default()).unwrap();
    let rec = record(&sim, &sc, &quick());
    let z0 = sc.initial_state.position.z;
    let lift = rec
        .vehicle
        .iter()
        .position(|s| (s.loads.aero.force.x) > sim.weight())
        .expect("aerodynamic lift never exceeds weight");
    assert!(rec.vehicle[..lift].iter().all(|s| (s.state.position.z - z0).abs() < 0.01));
    assert!(rec.vehicle.last().unwrap().state.position.z > z0 + 1.0);
}

#[test]
fn oversized_step_is_rejected() {
    let sim = common::simulator();
    let sc = builtin("hover_spinup", &sim, &HoverProfile::default()).unwrap();
    let opts = RunOptions { dt: 0.02, ..quick() };
    let err = sim.run(&sc, &opts, &mut Recorder::default()).unwrap_err();
    assert!(matches!(err, RunError::Sim(SimError::Dynamics(DynamicsError::InvalidTimeStep(_)))));
}
