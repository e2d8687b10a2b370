//! Rigid-body equations of motion in the body frame, fixed-step RK4, gravity
//! and ground contact.

use alloc::boxed::Box;

use nalgebra::{Matrix3, Quaternion, UnitQuaternion};

use crate::aero::LoadSet;
use crate::airframe::MassProperties;
use crate::environment::ContactModel;
use crate::frames::{euler_angles, mirror_attitude, mirror_pseudovector, mirror_vector};
use crate::Vec3;

/// Largest accepted integration step, s.
pub const MAX_DT: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("inertia tensor is singular")]
    SingularInertia,
    #[error("time step {0} s outside (0, {MAX_DT}]")]
    InvalidTimeStep(f64),
    #[error("state became non-finite at t = {time} s")]
    NonFiniteState {
        time: f64,
        /// Last finite state before the failing step.
        last_good: Box<RigidBodyState>,
        loads: LoadSet,
    },
}

/// Position (world), attitude (body to world), body-frame linear and angular
/// velocity, and time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidBodyState {
    pub position: Vec3,
    pub attitude: UnitQuaternion<f64>,
    pub velocity: Vec3,
    pub angular_velocity: Vec3,
    pub time: f64,
}

impl RigidBodyState {
    pub fn at_rest(position: Vec3, attitude: UnitQuaternion<f64>) -> Self {
        Self {
            position,
            attitude,
            velocity: Vec3::zeros(),
            angular_velocity: Vec3::zeros(),
            time: 0.0,
        }
    }

    /// `(phi, theta, psi)`, ZYX, relative to local north-east-down.
    pub fn euler(&self) -> (f64, f64, f64) {
        euler_angles(&self.attitude)
    }

    pub fn world_velocity(&self) -> Vec3 {
        self.attitude * self.velocity
    }

    pub fn is_finite(&self) -> bool {
        let q = self.attitude.quaternion();
        self.position.iter().all(|v| v.is_finite())
            && q.coords.iter().all(|v| v.is_finite())
            && self.velocity.iter().all(|v| v.is_finite())
            && self.angular_velocity.iter().all(|v| v.is_finite())
            && self.time.is_finite()
    }

    /// Mirror image through the world and body x-z planes.
    pub fn mirrored(&self) -> Self {
        Self {
            position: mirror_vector(&self.position),
            attitude: mirror_attitude(&self.attitude),
            velocity: mirror_vector(&self.velocity),
            angular_velocity: mirror_pseudovector(&self.angular_velocity),
            time: self.time,
        }
    }
}

/// Mass and inertia with the inverse tensor precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidBody {
    pub mass: f64,
    pub inertia: Matrix3<f64>,
    inertia_inv: Matrix3<f64>,
}

impl RigidBody {
    pub fn new(mass: f64, inertia: Matrix3<f64>) -> Result<Self, DynamicsError> {
        let inertia_inv = inertia.try_inverse().ok_or(DynamicsError::SingularInertia)?;
        if !(mass > 0.0) || !inertia_inv.iter().all(|v| v.is_finite()) {
            return Err(DynamicsError::SingularInertia);
        }
        Ok(Self {
            mass,
            inertia,
            inertia_inv,
        })
    }

    pub fn from_mass_properties(m: &MassProperties) -> Result<Self, DynamicsError> {
        Self::new(m.mass, m.inertia)
    }

    pub fn inertia_inv(&self) -> &Matrix3<f64> {
        &self.inertia_inv
    }
}

/// Weight expressed in the body frame. Acts at the centre of mass, so it
/// carries no moment.
pub fn gravity_body(state: &RigidBodyState, mass: f64, g: f64) -> LoadSet {
    LoadSet::force_only(state.attitude.inverse_transform_vector(&Vec3::new(0.0, 0.0, -mass * g)))
}

/// Total load: gravity plus every aerodynamic and thrust contribution.
pub fn sum_loads(aero: LoadSet, thrust: &[LoadSet], gravity: LoadSet) -> LoadSet {
    let mut total = gravity + aero;
    for t in thrust {
        total += *t;
    }
    total
}

/// Penalty contact with a flat ground at world z = 0, acting at the centre
/// of mass.
///
/// Below `contact.height` the normal force is
/// `max(0, k (h - z) - c dz/dt)` along world +z, plus horizontal velocity
/// damping. There is no friction torque, so spin about the vertical is not
/// resisted.
pub fn ground_contact(state: &RigidBodyState, contact: &ContactModel) -> LoadSet {
    let z = state.position.z;
    if z >= contact.height {
        return LoadSet::zero();
    }
    let vw = state.world_velocity();
    let normal = (contact.stiffness * (contact.height - z) - contact.damping * vw.z).max(0.0);
    let world = Vec3::new(-contact.horizontal_damping * vw.x, -contact.horizontal_damping * vw.y, normal);
    LoadSet::force_only(state.attitude.inverse_transform_vector(&world))
}

/// Time derivative of the state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub position: Vec3,
    pub attitude: Quaternion<f64>,
    pub velocity: Vec3,
    pub angular_velocity: Vec3,
}

fn quat_rate(q: &Quaternion<f64>, w: &Vec3) -> Quaternion<f64> {
    q * Quaternion::new(0.0, w.x, w.y, w.z) * 0.5
}

/// Newton-Euler in the body frame:
/// `dv = F/m - w x v`, `dw = I^-1 (M - w x I w)`, `dp = R v`,
/// `dq = q (0, w) / 2`.
pub fn derivatives(body: &RigidBody, state: &RigidBodyState, loads: &LoadSet) -> StateDerivative {
    let w = state.angular_velocity;
    let v = state.velocity;
    StateDerivative {
        position: state.attitude * v,
        attitude: quat_rate(state.attitude.quaternion(), &w),
        velocity: loads.force / body.mass - w.cross(&v),
        angular_velocity: body.inertia_inv * (loads.moment - w.cross(&(body.inertia * w))),
    }
}

#[derive(Clone, Copy)]
struct Raw {
    p: Vec3,
    q: Quaternion<f64>,
    v: Vec3,
    w: Vec3,
}

impl Raw {
    fn of(s: &RigidBodyState) -> Self {
        Self {
            p: s.position,
            q: *s.attitude.quaternion(),
            v: s.velocity,
            w: s.angular_velocity,
        }
    }

    fn plus(&self, k: &Raw, h: f64) -> Raw {
        Raw {
            p: self.p + k.p * h,
            q: self.q + k.q * h,
            v: self.v + k.v * h,
            w: self.w + k.w * h,
        }
    }

    fn state(&self, time: f64) -> RigidBodyState {
        RigidBodyState {
            position: self.p,
            attitude: UnitQuaternion::new_normalize(self.q),
            velocity: self.v,
            angular_velocity: self.w,
            time,
        }
    }
}

fn stage<E, F>(body: &RigidBody, raw: &Raw, time: f64, loads: &mut F) -> Result<(Raw, LoadSet), E>
where
    F: FnMut(&RigidBodyState) -> Result<LoadSet, E>,
{
    let s = raw.state(time);
    let l = loads(&s)?;
    let d = derivatives(body, &s, &l);
    // the raw quaternion drives its own rate so the stage update stays linear
    let k = Raw {
        p: d.position,
        q: quat_rate(&raw.q, &raw.w),
        v: d.velocity,
        w: d.angular_velocity,
    };
    Ok((k, l))
}

/// One classical RK4 step of length `dt`, re-evaluating `loads` at every
/// stage. The quaternion is renormalized at the end of the step.
pub fn step<E, F>(body: &RigidBody, state: &RigidBodyState, dt: f64, mut loads: F) -> Result<RigidBodyState, E>
where
    F: FnMut(&RigidBodyState) -> Result<LoadSet, E>,
    E: From<DynamicsError>,
{
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(DynamicsError::InvalidTimeStep(dt).into());
    }
    let t = state.time;
    let y0 = Raw::of(state);
    let (k1, l1) = stage(body, &y0, t, &mut loads)?;
    let (k2, _) = stage(body, &y0.plus(&k1, 0.5 * dt), t + 0.5 * dt, &mut loads)?;
    let (k3, _) = stage(body, &y0.plus(&k2, 0.5 * dt), t + 0.5 * dt, &mut loads)?;
    let (k4, _) = stage(body, &y0.plus(&k3, dt), t + dt, &mut loads)?;
    let h6 = dt / 6.0;
    let next = Raw {
        p: y0.p + (k1.p + (k2.p + k3.p) * 2.0 + k4.p) * h6,
        q: y0.q + (k1.q + (k2.q + k3.q) * 2.0 + k4.q) * h6,
        v: y0.v + (k1.v + (k2.v + k3.v) * 2.0 + k4.v) * h6,
        w: y0.w + (k1.w + (k2.w + k3.w) * 2.0 + k4.w) * h6,
    }
    .state(t + dt);
    if !next.is_finite() {
        return Err(DynamicsError::NonFiniteState {
            time: t + dt,
            last_good: Box::new(*state),
            loads: l1,
        }
        .into());
    }
    Ok(next)
}
