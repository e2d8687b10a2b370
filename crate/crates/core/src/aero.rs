//! Per-strip aerodynamics: local air-relative velocity, kinematic and
//! effective angle of attack, coefficient lookup, and the resulting body
//! loads about the centre of mass.
//!
//! Wing rotation convention: each half wing rotates by its joint angle
//! `epsilon` about its own *outward* hinge axis (body -y for port, +y for
//! starboard). Equal joint angles on both sides are therefore a mirror-
//! opposite pitch of the two panels, which is what makes
//! `alpha_eff = alpha_kin - eps_p` on the port side and
//! `alpha_eff = alpha_kin + eps_s` on the starboard side.

use alloc::vec::Vec;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Neg, Sub};

use nalgebra::Matrix3;

use crate::airframe::{Airframe, SegmentGeometry, Side};
use crate::dynamics::RigidBodyState;
use crate::environment::Environment;
use crate::frames::{rot_y, wind_to_body};
use crate::math::{atan2, sqrt, wrap_pi, DEG};
use crate::polar::{Coefficients, PolarSurface};
use crate::Vec3;

/// In-plane airspeed below which a strip is treated as stagnant
/// (`alpha_kin = 0`), m/s.
pub const STAGNATION_SPEED: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AeroError {
    #[error("non-finite aerodynamic coefficient on {} segment {index}", side.as_str())]
    NonFiniteCoefficient { side: Side, index: usize },
    #[error("joint angle {0} rad outside the mechanical range")]
    JointOutOfRange(f64),
    #[error("thrust command {0} N is negative or not finite")]
    InvalidThrust(f64),
}

/// Force and moment (about the centre of mass), both in the body frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadSet {
    pub force: Vec3,
    pub moment: Vec3,
}

impl LoadSet {
    pub fn new(force: Vec3, moment: Vec3) -> Self {
        Self { force, moment }
    }

    pub fn zero() -> Self {
        Self::new(Vec3::zeros(), Vec3::zeros())
    }

    /// A pure force through the centre of mass.
    pub fn force_only(force: Vec3) -> Self {
        Self::new(force, Vec3::zeros())
    }

    pub fn is_finite(&self) -> bool {
        self.force.iter().chain(self.moment.iter()).all(|v| v.is_finite())
    }
}

impl Default for LoadSet {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for LoadSet {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.force + rhs.force, self.moment + rhs.moment)
    }
}

impl AddAssign for LoadSet {
    fn add_assign(&mut self, rhs: Self) {
        self.force += rhs.force;
        self.moment += rhs.moment;
    }
}

impl Sub for LoadSet {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.force - rhs.force, self.moment - rhs.moment)
    }
}

impl Neg for LoadSet {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.force, -self.moment)
    }
}

impl Sum for LoadSet {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

/// Joint angles (radians) and per-side thrust commands (N) at one instant.
///
/// Every thruster on a side receives that side's command.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ActuationInput {
    pub epsilon_port: f64,
    pub epsilon_starboard: f64,
    pub thrust_port: f64,
    pub thrust_starboard: f64,
}

impl ActuationInput {
    pub fn new(epsilon_port: f64, epsilon_starboard: f64, thrust_port: f64, thrust_starboard: f64) -> Self {
        Self {
            epsilon_port,
            epsilon_starboard,
            thrust_port,
            thrust_starboard,
        }
    }

    pub fn epsilon(&self, side: Side) -> f64 {
        match side {
            Side::Port => self.epsilon_port,
            Side::Starboard => self.epsilon_starboard,
        }
    }

    pub fn thrust(&self, side: Side) -> f64 {
        match side {
            Side::Port => self.thrust_port,
            Side::Starboard => self.thrust_starboard,
        }
    }

    /// Mirror image through the body x-z plane. A port rotation about the
    /// port hinge axis maps to the opposite-signed starboard rotation, so the
    /// joint angles swap sides *and* change sign.
    pub fn mirrored(&self) -> Self {
        Self {
            epsilon_port: -self.epsilon_starboard,
            epsilon_starboard: -self.epsilon_port,
            thrust_port: self.thrust_starboard,
            thrust_starboard: self.thrust_port,
        }
    }

    pub fn validate(&self, max_joint: f64) -> Result<(), AeroError> {
        for e in [self.epsilon_port, self.epsilon_starboard] {
            if !(e.abs() <= max_joint) {
                return Err(AeroError::JointOutOfRange(e));
            }
        }
        for t in [self.thrust_port, self.thrust_starboard] {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(AeroError::InvalidThrust(t));
            }
        }
        Ok(())
    }
}

/// Default mechanical joint range, |epsilon| <= 90 deg.
pub const MAX_JOINT_ANGLE: f64 = 90.0 * DEG;

/// Rotation of a half wing's geometry by its joint angle, as a body-frame
/// rotation about y: `-epsilon` on the port side, `+epsilon` on starboard.
pub fn hinge_rotation(side: Side, epsilon: f64) -> Matrix3<f64> {
    rot_y(side.sign() * epsilon)
}

/// Which polar family a strip reads from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AirfoilMode {
    Cruise,
    Hover,
}

/// The cruise and hover airfoils plus the joint-angle schedule that morphs
/// between them: pure cruise below `cruise_limit`, pure hover above
/// `hover_limit`, linear blend in |epsilon| between.
#[derive(Debug, Clone)]
pub struct Airfoils {
    pub cruise: PolarSurface,
    pub hover: PolarSurface,
    pub cruise_limit: f64,
    pub hover_limit: f64,
}

impl Airfoils {
    pub fn new(cruise: PolarSurface, hover: PolarSurface) -> Self {
        Self {
            cruise,
            hover,
            cruise_limit: 25.0 * DEG,
            hover_limit: 50.0 * DEG,
        }
    }

    /// Weight of the hover airfoil for joint angle `epsilon`.
    pub fn hover_weight(&self, epsilon: f64) -> f64 {
        let e = epsilon.abs();
        if e <= self.cruise_limit {
            0.0
        } else if e >= self.hover_limit {
            1.0
        } else {
            (e - self.cruise_limit) / (self.hover_limit - self.cruise_limit)
        }
    }

    pub fn coefficients(&self, epsilon: f64, reynolds: f64, alpha: f64, mode: Option<AirfoilMode>) -> Coefficients {
        let w = match mode {
            Some(AirfoilMode::Cruise) => 0.0,
            Some(AirfoilMode::Hover) => 1.0,
            None => self.hover_weight(epsilon),
        };
        if w == 0.0 {
            self.cruise.lookup(reynolds, alpha)
        } else if w == 1.0 {
            self.hover.lookup(reynolds, alpha)
        } else {
            let c = self.cruise.lookup(reynolds, alpha);
            c.lerp(&self.hover.lookup(reynolds, alpha), w)
        }
    }
}

/// Air-relative velocity of a body point `r` (body frame), including wind.
pub fn segment_velocity(state: &RigidBodyState, r: &Vec3, wind_world: &Vec3) -> Vec3 {
    state.velocity + state.angular_velocity.cross(r) - state.attitude.inverse_transform_vector(wind_world)
}

/// Angle of the relative wind in the strip's x-z plane; zero when the
/// in-plane speed is below [`STAGNATION_SPEED`].
pub fn kinematic_alpha(v_local: &Vec3) -> f64 {
    if sqrt(v_local.x * v_local.x + v_local.z * v_local.z) <= STAGNATION_SPEED {
        0.0
    } else {
        atan2(v_local.z, v_local.x)
    }
}

/// `alpha_kin - eps_p` (port) or `alpha_kin + eps_s` (starboard), wrapped to
/// `[-pi, pi]`.
pub fn effective_alpha(alpha_kin: f64, side: Side, act: &ActuationInput) -> f64 {
    wrap_pi(alpha_kin + side.sign() * act.epsilon(side))
}

/// Flow quantities of one strip at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentAeroState {
    /// Strip-plane (x-z) part of the air-relative velocity, body frame.
    pub v_local: Vec3,
    pub airspeed: f64,
    pub alpha_kin: f64,
    pub alpha_eff: f64,
    pub reynolds: f64,
    pub q_dyn: f64,
    pub coeffs: Coefficients,
}

impl SegmentAeroState {
    /// Builds the flow state from the full local velocity. Spanwise flow is
    /// dropped before computing airspeed, Reynolds number and pressure.
    pub fn from_velocity(
        v_full: &Vec3,
        seg: &SegmentGeometry,
        act: &ActuationInput,
        env: &Environment,
        airfoils: &Airfoils,
        mode: Option<AirfoilMode>,
    ) -> Self {
        let v_local = Vec3::new(v_full.x, 0.0, v_full.z);
        let airspeed = v_local.norm();
        let alpha_kin = kinematic_alpha(&v_local);
        let alpha_eff = wrap_pi(effective_alpha(alpha_kin, seg.side, act) + seg.incidence);
        let reynolds = env.rho * airspeed * seg.chord / env.mu;
        let q_dyn = 0.5 * env.rho * airspeed * airspeed;
        let coeffs = airfoils.coefficients(act.epsilon(seg.side), reynolds, alpha_eff, mode);
        Self {
            v_local,
            airspeed,
            alpha_kin,
            alpha_eff,
            reynolds,
            q_dyn,
            coeffs,
        }
    }
}

/// Aerodynamic centre of a strip after the hinge rotation.
pub fn rotated_ac(seg: &SegmentGeometry, act: &ActuationInput) -> Vec3 {
    let rot = hinge_rotation(seg.side, act.epsilon(seg.side));
    seg.hinge + rot * (seg.r_ac - seg.hinge)
}

/// Body loads of one strip: lift and drag rotated from the wind frame by
/// `alpha_kin`, their moment arm about the centre of mass, and the section
/// pitching moment.
pub fn segment_loads(seg: &SegmentGeometry, aero: &SegmentAeroState, act: &ActuationInput) -> Result<LoadSet, AeroError> {
    if !aero.coeffs.is_finite() {
        return Err(AeroError::NonFiniteCoefficient {
            side: seg.side,
            index: seg.index,
        });
    }
    let qa = aero.q_dyn * seg.area;
    let lift = aero.coeffs.cl * qa;
    let drag = aero.coeffs.cd * qa;
    let f_wind = Vec3::new(-drag, 0.0, -lift);
    let force = wind_to_body(aero.alpha_kin) * f_wind;

    let rot = hinge_rotation(seg.side, act.epsilon(seg.side));
    let r = seg.hinge + rot * (seg.r_ac - seg.hinge);
    let m_arm = r.cross(&force);
    let m_cm = rot * Vec3::new(0.0, aero.coeffs.cm * qa * seg.chord, 0.0);
    Ok(LoadSet::new(force, m_arm + m_cm))
}

/// One strip's flow state and loads, as reported in segment telemetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentSample {
    pub side: Side,
    pub index: usize,
    pub aero: SegmentAeroState,
    pub load: LoadSet,
}

/// Strip-theory load model over a whole airframe.
#[derive(Debug, Clone, Copy)]
pub struct AeroModel<'a> {
    pub airframe: &'a Airframe,
    pub airfoils: &'a Airfoils,
    pub env: &'a Environment,
    pub mode: Option<AirfoilMode>,
}

impl<'a> AeroModel<'a> {
    pub fn new(airframe: &'a Airframe, airfoils: &'a Airfoils, env: &'a Environment) -> Self {
        Self {
            airframe,
            airfoils,
            env,
            mode: None,
        }
    }

    pub fn with_mode(mut self, mode: Option<AirfoilMode>) -> Self {
        self.mode = mode;
        self
    }

    pub fn segment(&self, seg: &SegmentGeometry, state: &RigidBodyState, act: &ActuationInput) -> Result<SegmentSample, AeroError> {
        let r = rotated_ac(seg, act);
        let v = segment_velocity(state, &r, &self.env.wind);
        let aero = SegmentAeroState::from_velocity(&v, seg, act, self.env, self.airfoils, self.mode);
        let load = segment_loads(seg, &aero, act)?;
        Ok(SegmentSample {
            side: seg.side,
            index: seg.index,
            aero,
            load,
        })
    }

    /// Sum of all strip loads. Each port strip is first added to its
    /// starboard twin, then the pairs are accumulated root to tip, so a
    /// mirrored flight state produces bitwise mirrored totals.
    pub fn total_loads(&self, state: &RigidBodyState, act: &ActuationInput) -> Result<LoadSet, AeroError> {
        let segs = &self.airframe.segments;
        let n = segs.len() / 2;
        let mut total = LoadSet::zero();
        for i in 0..n {
            let port = self.segment(&segs[i], state, act)?.load;
            let starboard = self.segment(&segs[n + i], state, act)?.load;
            total += port + starboard;
        }
        Ok(total)
    }

    /// Like [`total_loads`](Self::total_loads) but also records every strip,
    /// port root-to-tip then starboard root-to-tip.
    pub fn breakdown(&self, state: &RigidBodyState, act: &ActuationInput, out: &mut Vec<SegmentSample>) -> Result<LoadSet, AeroError> {
        out.clear();
        for seg in &self.airframe.segments {
            out.push(self.segment(seg, state, act)?);
        }
        let n = out.len() / 2;
        Ok((0..n).fold(LoadSet::zero(), |acc, i| acc + (out[i].load + out[n + i].load)))
    }
}
