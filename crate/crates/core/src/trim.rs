//! Steady-state searches: symmetric glide trim and the hover thrust that
//! balances weight at steady spin.

use nalgebra::{Matrix3, Vector3};

use crate::aero::{AeroError, LoadSet};
use crate::dynamics::RigidBodyState;
use crate::frames::{attitude_from_euler, hover_attitude, wind_to_body};
use crate::math::{cos, sin, DEG};
use crate::scenario::{Simulator, HOVER_JOINT};
use crate::{ActuationInput, Vec3};

pub const MAX_ITERATIONS: usize = 200;
/// Force (N) and moment (N m) tolerance for a converged trim.
pub const TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrimError {
    #[error("trim did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("trim Jacobian is singular")]
    Singular,
    #[error("no thrust up to {max_thrust} N balances the weight in hover")]
    NoHoverBalance { max_thrust: f64 },
    #[error(transparent)]
    Aero(#[from] AeroError),
}

/// Starting point for the trim iteration. Angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimGuess {
    pub airspeed: f64,
    pub alpha: f64,
    pub theta: f64,
}

impl Default for TrimGuess {
    fn default() -> Self {
        Self {
            airspeed: 10.0,
            alpha: 4.0 * DEG,
            theta: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trim {
    pub state: RigidBodyState,
    pub actuation: ActuationInput,
    pub airspeed: f64,
    pub alpha: f64,
    pub theta: f64,
    /// Flight-path angle, positive climbing.
    pub gamma: f64,
    pub iterations: usize,
    /// Total load left at the solution.
    pub residual: LoadSet,
    /// Aerodynamic lift over drag of the whole vehicle.
    pub lift_to_drag: f64,
}

fn trim_state(x: &Vector3<f64>) -> RigidBodyState {
    let (v, alpha, theta) = (x[0], x[1], x[2]);
    let mut s = RigidBodyState::at_rest(Vec3::zeros(), attitude_from_euler(0.0, theta, 0.0));
    s.velocity = Vec3::new(v * cos(alpha), 0.0, v * sin(alpha));
    s
}

fn residual(sim: &Simulator, x: &Vector3<f64>, act: &ActuationInput) -> Result<Vector3<f64>, AeroError> {
    let l = sim.loads(&trim_state(x), act, false, None)?.total;
    Ok(Vector3::new(l.force.x, l.force.z, l.moment.y))
}

fn size(r: &Vector3<f64>) -> f64 {
    r.amax()
}

/// Symmetric steady flight with both joints at zero and `thrust` on each
/// side: solves for airspeed, angle of attack and pitch so that the
/// longitudinal force and pitching moment vanish. With zero thrust this is
/// the steady glide.
///
/// Damped Newton with a central-difference Jacobian.
pub fn trim(sim: &Simulator, guess: &TrimGuess, thrust: f64) -> Result<Trim, TrimError> {
    let act = ActuationInput::new(0.0, 0.0, thrust, thrust);
    let mut x = Vector3::new(guess.airspeed, guess.alpha, guess.theta);
    let mut r = residual(sim, &x, &act)?;
    let mut it = 0;
    while size(&r) >= TOLERANCE {
        if it == MAX_ITERATIONS {
            return Err(TrimError::NotConverged {
                iterations: it,
                residual: size(&r),
            });
        }
        it += 1;
        let h = [1e-6 * x[0].abs().max(1.0), 1e-7, 1e-7];
        let mut jac = Matrix3::zeros();
        for k in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[k] += h[k];
            xm[k] -= h[k];
            let col = (residual(sim, &xp, &act)? - residual(sim, &xm, &act)?) / (2.0 * h[k]);
            jac.set_column(k, &col);
        }
        let dx = jac.lu().solve(&-r).ok_or(TrimError::Singular)?;
        let mut lambda = 1.0;
        loop {
            let mut xn = x + dx * lambda;
            xn[0] = xn[0].max(0.5 * x[0]);
            let rn = residual(sim, &xn, &act)?;
            if rn.norm() < r.norm() || lambda < 1e-4 {
                x = xn;
                r = rn;
                break;
            }
            lambda *= 0.5;
        }
    }
    let state = trim_state(&x);
    let loads = sim.loads(&state, &act, false, None)?;
    let wind = wind_to_body(x[1]).transpose() * loads.aero.force;
    Ok(Trim {
        state,
        actuation: act,
        airspeed: x[0],
        alpha: x[1],
        theta: x[2],
        gamma: x[2] - x[1],
        iterations: it,
        residual: loads.total,
        lift_to_drag: -wind.z / -wind.x,
    })
}

/// [`trim`] with zero thrust.
pub fn trim_glide(sim: &Simulator, guess: &TrimGuess) -> Result<Trim, TrimError> {
    trim(sim, guess, 0.0)
}

/// Steady hover spin found by [`hover_balance_thrust`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoverBalance {
    /// Per-side thrust, N.
    pub thrust: f64,
    /// Spin rate about body x, rad/s.
    pub spin_rate: f64,
    /// Net vertical force at that spin (should be ~0), N.
    pub vertical_residual: f64,
}

fn hover_loads(sim: &Simulator, thrust: f64, spin: f64) -> Result<LoadSet, AeroError> {
    let mut s = RigidBodyState::at_rest(Vec3::zeros(), hover_attitude());
    s.angular_velocity = Vec3::new(spin, 0.0, 0.0);
    let act = ActuationInput::new(HOVER_JOINT, HOVER_JOINT, thrust, thrust);
    Ok(sim.loads(&s, &act, false, None)?.total)
}

fn bisect<F>(mut lo: f64, mut hi: f64, iterations: usize, mut f: F) -> Result<f64, AeroError>
where
    F: FnMut(f64) -> Result<f64, AeroError>,
{
    let f_lo = f(lo)?;
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if (f(mid)? > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Spin rate about body x at which the thrust couple and aerodynamic torque
/// cancel, with the vehicle in hover attitude and no translation.
pub fn steady_spin(sim: &Simulator, thrust: f64) -> Result<f64, AeroError> {
    let drive = hover_loads(sim, thrust, 0.0)?.moment.x;
    if drive == 0.0 {
        return Ok(0.0);
    }
    let limit = drive.signum() * 1000.0;
    bisect(0.0, limit, 80, |w| Ok(hover_loads(sim, thrust, w)?.moment.x))
}

/// Coarse search for the per-side thrust whose steady spin carries the
/// weight, joints at the hover angle.
pub fn hover_balance_thrust(sim: &Simulator) -> Result<HoverBalance, TrimError> {
    let max_thrust = sim
        .airframe
        .thrusters
        .iter()
        .map(|t| t.max_thrust)
        .fold(f64::INFINITY, f64::min);
    let up = |t: f64| -> Result<f64, AeroError> {
        let w = steady_spin(sim, t)?;
        // body x is world up in hover attitude
        Ok(hover_loads(sim, t, w)?.force.x)
    };
    if up(max_thrust)? <= 0.0 {
        return Err(TrimError::NoHoverBalance { max_thrust });
    }
    let thrust = bisect(0.0, max_thrust, 40, up)?;
    let spin_rate = steady_spin(sim, thrust)?;
    Ok(HoverBalance {
        thrust,
        spin_rate,
        vertical_residual: hover_loads(sim, thrust, spin_rate)?.force.x,
    })
}

