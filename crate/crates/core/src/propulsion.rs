//! Idealized thrusters: a force along the rotated chord line, no lag, no
//! reaction torque.

use alloc::string::String;

use crate::aero::{hinge_rotation, ActuationInput, LoadSet};
use crate::airframe::Side;
use crate::Vec3;

#[derive(Debug, Clone, PartialEq)]
pub struct ThrusterSpec {
    pub id: String,
    pub side: Side,
    /// Strip index (1-based) the thruster is mounted on.
    pub segment: usize,
    /// Mount point relative to the centre of mass at zero wing rotation.
    pub r_thrust: Vec3,
    /// Point on the hinge line the mount rotates about.
    pub hinge: Vec3,
    pub max_thrust: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThrustOutput {
    pub load: LoadSet,
    /// Thrust actually applied after clamping.
    pub applied: f64,
    /// The command was outside `[0, max_thrust]` (or not finite).
    pub clamped: bool,
}

/// Body-frame thrust direction for a wing rotated by `epsilon` about its
/// outward hinge axis: `(cos e, 0, sin e)` on the port side and
/// `(cos e, 0, -sin e)` on the starboard side.
pub fn thrust_direction(side: Side, epsilon: f64) -> Vec3 {
    hinge_rotation(side, epsilon) * Vec3::x()
}

/// Force and moment about the centre of mass for a commanded thrust.
pub fn thrust_load(spec: &ThrusterSpec, thrust: f64, act: &ActuationInput) -> ThrustOutput {
    let applied = if thrust.is_finite() { thrust.clamp(0.0, spec.max_thrust) } else { 0.0 };
    let clamped = applied != thrust;
    let eps = act.epsilon(spec.side);
    let rot = hinge_rotation(spec.side, eps);
    let force = rot * Vec3::x() * applied;
    let r = spec.hinge + rot * (spec.r_thrust - spec.hinge);
    ThrustOutput {
        load: LoadSet::new(force, r.cross(&force)),
        applied,
        clamped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::FRAC_PI_2;

    fn spec(side: Side, y: f64) -> ThrusterSpec {
        ThrusterSpec {
            id: side.as_str().into(),
            side,
            segment: 8,
            r_thrust: Vec3::new(0.0, y, 0.0),
            hinge: Vec3::new(0.0, y, 0.0),
            max_thrust: 1.0,
        }
    }

    #[test]
    fn level_port_thruster() {
        let out = thrust_load(&spec(Side::Port, -0.328), 0.3, &ActuationInput::default());
        assert_relative_eq!(out.load.force, Vec3::new(0.3, 0.0, 0.0), epsilon = 1e-15);
        // (0, -0.328, 0) x (0.3, 0, 0)
        assert_relative_eq!(out.load.moment, Vec3::new(0.0, 0.0, 0.0984), epsilon = 1e-15);
        assert!(!out.clamped);
    }

    #[test]
    fn zero_thrust_is_zero_load() {
        let out = thrust_load(&spec(Side::Starboard, 0.3), 0.0, &ActuationInput::default());
        assert_eq!(out.load, LoadSet::zero());
    }

    #[test]
    fn right_angle_rotation() {
        let act = ActuationInput::new(FRAC_PI_2, FRAC_PI_2, 1.0, 1.0);
        let port = thrust_load(&spec(Side::Port, -0.3), 1.0, &act);
        assert_relative_eq!(port.load.force, Vec3::new(0.0, 0.0, 1.0), epsilon = 1e-15);
        let stbd = thrust_load(&spec(Side::Starboard, 0.3), 1.0, &act);
        assert_relative_eq!(stbd.load.force, Vec3::new(0.0, 0.0, -1.0), epsilon = 1e-15);
    }

    #[test]
    fn out_of_range_commands_clamp() {
        let s = spec(Side::Port, -0.3);
        let hi = thrust_load(&s, 2.0, &ActuationInput::default());
        assert!(hi.clamped);
        assert_eq!(hi.applied, 1.0);
        let lo = thrust_load(&s, -1.0, &ActuationInput::default());
        assert!(lo.clamped);
        assert_eq!(lo.applied, 0.0);
        assert!(thrust_load(&s, f64::NAN, &ActuationInput::default()).clamped);
    }

    #[test]
    fn force_magnitude_equals_thrust() {
        for i in 0..50 {
            let e = -1.5 + 0.06 * i as f64;
            let act = ActuationInput::new(e, e, 0.0, 0.0);
            for s in [spec(Side::Port, -0.3), spec(Side::Starboard, 0.3)] {
                let out = thrust_load(&s, 0.7, &act);
                assert_relative_eq!(out.load.force.norm(), 0.7, max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn symmetric_pair_and_differential_linearity() {
        let (p, s) = (spec(Side::Port, -0.328), spec(Side::Starboard, 0.328));
        for e in [0.0, 0.3, 1.3] {
            let act = ActuationInput::new(e, e, 0.0, 0.0);
            let total = thrust_load(&p, 0.4, &act).load + thrust_load(&s, 0.4, &act).load;
            assert!(total.moment.z.abs() < 1e-15);
            assert_eq!(total.force.y, 0.0);
        }
        let act = ActuationInput::default();
        let yaw = |dt: f64| (thrust_load(&p, 0.4 + dt, &act).load + thrust_load(&s, 0.4 - dt, &act).load).moment.z;
        let slope = yaw(0.01) / 0.01;
        for k in 1..=10 {
            let dt = 0.02 * k as f64;
            assert_relative_eq!(yaw(dt), slope * dt, epsilon = 1e-12);
        }
    }
}
