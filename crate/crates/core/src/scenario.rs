//! Open-loop actuation schedules, scenarios, the simulation loop and the
//! built-in experiments.

use alloc::string::String;
use alloc::vec::Vec;

use crate::aero::{AeroError, AeroModel, AirfoilMode, Airfoils, LoadSet, SegmentSample};
use crate::airframe::{Airframe, AirframeError};
use crate::dynamics::{self, DynamicsError, RigidBody, RigidBodyState};
use crate::environment::Environment;
use crate::frames::{attitude_from_euler, hover_attitude};
use crate::math::DEG;
use crate::propulsion::thrust_load;
use crate::trim::{self, TrimError, TrimGuess};
use crate::{ActuationInput, Vec3};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("schedule is empty")]
    EmptySchedule,
    #[error("schedule must start at t = 0")]
    ScheduleStart,
    #[error("schedule times must be strictly increasing (entry {0})")]
    ScheduleOrder(usize),
    #[error("duration must be positive")]
    Duration,
    #[error("initial attitude quaternion is not normalized")]
    Attitude,
    #[error("initial state is not finite")]
    InitialState,
    #[error("unknown built-in scenario `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Actuation(#[from] AeroError),
    #[error(transparent)]
    Trim(#[from] TrimError),
}

/// Piecewise-constant actuation, held after the last entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    entries: Vec<(f64, ActuationInput)>,
}

impl Schedule {
    pub fn new(entries: Vec<(f64, ActuationInput)>) -> Result<Self, ScenarioError> {
        let first = entries.first().ok_or(ScenarioError::EmptySchedule)?;
        if first.0 != 0.0 {
            return Err(ScenarioError::ScheduleStart);
        }
        for (i, w) in entries.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) || !w[1].0.is_finite() {
                return Err(ScenarioError::ScheduleOrder(i + 1));
            }
        }
        Ok(Self { entries })
    }

    pub fn constant(act: ActuationInput) -> Self {
        Self {
            entries: alloc::vec![(0.0, act)],
        }
    }

    pub fn entries(&self) -> &[(f64, ActuationInput)] {
        &self.entries
    }

    /// Input in force at `t`. An entry takes effect at exactly its start
    /// time.
    pub fn at(&self, t: f64) -> ActuationInput {
        let i = self.entries.partition_point(|e| e.0 <= t);
        self.entries[i.saturating_sub(1)].1
    }

    pub fn mirrored(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|(t, a)| (*t, a.mirrored())).collect(),
        }
    }

    pub fn validate(&self, max_joint: f64) -> Result<(), ScenarioError> {
        for (_, a) in &self.entries {
            a.validate(max_joint)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub initial_state: RigidBodyState,
    pub schedule: Schedule,
    pub duration: f64,
    pub ground_contact: bool,
    pub airfoil_override: Option<AirfoilMode>,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(ScenarioError::Duration);
        }
        if !self.initial_state.is_finite() {
            return Err(ScenarioError::InitialState);
        }
        if (self.initial_state.attitude.quaternion().norm() - 1.0).abs() > 1e-9 {
            return Err(ScenarioError::Attitude);
        }
        self.schedule.validate(crate::aero::MAX_JOINT_ANGLE)
    }

    /// Port and starboard swapped, initial state reflected.
    pub fn mirrored(&self) -> Self {
        Self {
            name: self.name.clone(),
            initial_state: self.initial_state.mirrored(),
            schedule: self.schedule.mirrored(),
            duration: self.duration,
            ground_contact: self.ground_contact,
            airfoil_override: self.airfoil_override,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub dt: f64,
    /// Telemetry every this many steps; the final step is always emitted.
    pub output_every: usize,
    pub segment_telemetry: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            output_every: 10,
            segment_telemetry: true,
        }
    }
}

/// Loads on the vehicle at one instant, by source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleLoads {
    pub aero: LoadSet,
    pub thrust: LoadSet,
    pub gravity: LoadSet,
    pub contact: LoadSet,
    pub total: LoadSet,
    /// Thrusters whose command was clamped to their range.
    pub clamped: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleSample {
    pub step: usize,
    pub state: RigidBodyState,
    pub actuation: ActuationInput,
    pub loads: VehicleLoads,
}

/// Receives decimated telemetry. `segments` is empty when segment telemetry
/// is switched off.
pub trait TelemetrySink {
    type Error;

    fn record(&mut self, vehicle: &VehicleSample, segments: &[SegmentSample]) -> Result<(), Self::Error>;
}

/// Keeps everything in memory.
#[derive(Debug, Clone, Default)]
pub struct Recorder {
    pub vehicle: Vec<VehicleSample>,
    pub segments: Vec<(f64, Vec<SegmentSample>)>,
}

impl TelemetrySink for Recorder {
    type Error = core::convert::Infallible;

    fn record(&mut self, vehicle: &VehicleSample, segments: &[SegmentSample]) -> Result<(), Self::Error> {
        self.vehicle.push(*vehicle);
        if !segments.is_empty() {
            self.segments.push((vehicle.state.time, segments.to_vec()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Aero(#[from] AeroError),
    #[error(transparent)]
    Airframe(#[from] AirframeError),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError<E> {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("telemetry sink failed")]
    Sink(E),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub steps: usize,
    pub samples: usize,
    pub final_state: RigidBodyState,
    /// Steps in which at least one thrust command was clamped.
    pub clamped_steps: usize,
}

/// Airframe, airfoils and environment bundled for running scenarios.
#[derive(Debug, Clone)]
pub struct Simulator {
    pub airframe: Airframe,
    pub airfoils: Airfoils,
    pub env: Environment,
}

impl Simulator {
    pub fn new(airframe: Airframe, airfoils: Airfoils, env: Environment) -> Self {
        Self { airframe, airfoils, env }
    }

    pub fn aero(&self, mode: Option<AirfoilMode>) -> AeroModel<'_> {
        AeroModel::new(&self.airframe, &self.airfoils, &self.env).with_mode(mode)
    }

    /// Rigid body for a run whose joints start at `act`.
    pub fn body(&self, act: &ActuationInput) -> Result<RigidBody, SimError> {
        let inertia = self.airframe.inertia_at(act.epsilon_port, act.epsilon_starboard)?;
        Ok(RigidBody::new(self.airframe.mass.mass, inertia)?)
    }

    pub fn weight(&self) -> f64 {
        self.airframe.mass.mass * self.env.gravity
    }

    /// All loads at `state` under `act`.
    pub fn loads(
        &self,
        state: &RigidBodyState,
        act: &ActuationInput,
        ground_contact: bool,
        mode: Option<AirfoilMode>,
    ) -> Result<VehicleLoads, AeroError> {
        let aero = self.aero(mode).total_loads(state, act)?;
        let mut thrust = LoadSet::zero();
        let mut clamped = 0;
        for spec in &self.airframe.thrusters {
            let out = thrust_load(spec, act.thrust(spec.side), act);
            thrust += out.load;
            clamped += out.clamped as usize;
        }
        let gravity = dynamics::gravity_body(state, self.airframe.mass.mass, self.env.gravity);
        let contact = if ground_contact {
            dynamics::ground_contact(state, &self.env.contact)
        } else {
            LoadSet::zero()
        };
        let total = dynamics::sum_loads(aero, &[thrust, contact], gravity);
        Ok(VehicleLoads {
            aero,
            thrust,
            gravity,
            contact,
            total,
            clamped,
        })
    }

    /// Integrates `scenario` and streams decimated telemetry into `sink`.
    pub fn run<S: TelemetrySink>(
        &self,
        scenario: &Scenario,
        opts: &RunOptions,
        sink: &mut S,
    ) -> Result<RunSummary, RunError<S::Error>> {
        scenario.validate().map_err(SimError::from)?;
        let body = self.body(&scenario.schedule.at(0.0))?;
        if !(opts.dt > 0.0 && opts.dt <= dynamics::MAX_DT) {
            return Err(SimError::Dynamics(DynamicsError::InvalidTimeStep(opts.dt)).into());
        }
        let every = opts.output_every.max(1);
        let steps = libm::round(scenario.duration / opts.dt) as usize;
        let mode = scenario.airfoil_override;
        let contact = scenario.ground_contact;
        let aero = self.aero(mode);

        let mut state = scenario.initial_state;
        state.time = 0.0;
        let mut segs = Vec::new();
        let mut samples = 0;
        let mut clamped_steps = 0;
        for n in 0..=steps {
            let act = scenario.schedule.at(state.time);
            let loads = self.loads(&state, &act, contact, mode).map_err(SimError::from)?;
            if n % every == 0 || n == steps {
                segs.clear();
                if opts.segment_telemetry {
                    aero.breakdown(&state, &act, &mut segs).map_err(SimError::from)?;
                }
                let sample = VehicleSample {
                    step: n,
                    state,
                    actuation: act,
                    loads,
                };
                sink.record(&sample, &segs).map_err(RunError::Sink)?;
                samples += 1;
            }
            if n == steps {
                break;
            }
            clamped_steps += (loads.clamped > 0) as usize;
            let mut next = dynamics::step(&body, &state, opts.dt, |s| -> Result<LoadSet, SimError> {
                Ok(self.loads(s, &act, contact, mode)?.total)
            })?;
            next.time = (n + 1) as f64 * opts.dt;
            state = next;
        }
        Ok(RunSummary {
            steps,
            samples,
            final_state: state,
            clamped_steps,
        })
    }
}

/// Names accepted by [`builtin`].
pub const BUILTIN_SCENARIOS: [&str; 4] = ["hover_spinup", "hover_thrust", "cruise_roll", "cruise_yaw"];

/// Hover joint angle used by both hover experiments.
pub const HOVER_JOINT: f64 = 75.0 * DEG;

/// Per-side thrust in the constant-thrust hover experiment, N.
pub const SPINUP_THRUST: f64 = 0.3;

/// Per-side thrust that balances the weight at steady spin for the
/// prototype airframe, shipped polars and standard air. Derived with
/// [`trim::hover_balance_thrust`]; a test guards the value.
pub const DERIVED_HOVER_BALANCE_THRUST: f64 = 0.16;

/// Four-phase thrust schedule for the hover thrust experiment. Thrusts are
/// per side, N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoverProfile {
    pub takeoff: f64,
    pub hover: f64,
    pub descend: f64,
    pub rehover: f64,
    pub phase_duration: f64,
}

impl Default for HoverProfile {
    fn default() -> Self {
        Self::from_balance(DERIVED_HOVER_BALANCE_THRUST)
    }
}

impl HoverProfile {
    /// Take-off at 1.5x and descent at 0.9x the balancing thrust. Lower
    /// descent thrust sinks the vehicle, pushes the hover-section incidence
    /// past stall and the spin collapses.
    pub fn from_balance(balance: f64) -> Self {
        Self {
            takeoff: 1.5 * balance,
            hover: balance,
            descend: 0.9 * balance,
            rehover: balance,
            phase_duration: 5.0,
        }
    }

    pub fn thrusts(&self) -> [f64; 4] {
        [self.takeoff, self.hover, self.descend, self.rehover]
    }
}

/// Initial altitude of the cruise experiments, m.
pub const CRUISE_ALTITUDE: f64 = 100.0;
/// Per-side thrust of the powered trim used by the yaw experiment, N.
pub const CRUISE_THRUST: f64 = 0.3;
/// Joint step of the roll experiment.
pub const ROLL_STEP: f64 = 1.0 * DEG;
/// Differential thrust factor of the yaw experiment.
pub const YAW_SPLIT: f64 = 0.2;
/// Start and end of the input step in both cruise experiments, s.
pub const STEP_ON: f64 = 1.0;
pub const STEP_OFF: f64 = 2.0;

fn on_ground(sim: &Simulator) -> RigidBodyState {
    let z = sim.env.contact.rest_height(sim.weight());
    RigidBodyState::at_rest(Vec3::new(0.0, 0.0, z), hover_attitude())
}

/// Hover attitude resting on the ground, both joints at 75 deg, constant
/// 0.3 N per side for 10 s.
pub fn hover_spinup(sim: &Simulator) -> Scenario {
    let act = ActuationInput::new(HOVER_JOINT, HOVER_JOINT, SPINUP_THRUST, SPINUP_THRUST);
    Scenario {
        name: "hover_spinup".into(),
        initial_state: on_ground(sim),
        schedule: Schedule::constant(act),
        duration: 10.0,
        ground_contact: true,
        airfoil_override: None,
    }
}

/// Joints fixed at 75 deg, thrust stepping through take-off, hover, descent
/// and hover again.
pub fn hover_thrust(sim: &Simulator, profile: &HoverProfile) -> Result<Scenario, ScenarioError> {
    let entries = profile
        .thrusts()
        .iter()
        .enumerate()
        .map(|(i, &t)| (i as f64 * profile.phase_duration, ActuationInput::new(HOVER_JOINT, HOVER_JOINT, t, t)))
        .collect();
    Ok(Scenario {
        name: "hover_thrust".into(),
        initial_state: on_ground(sim),
        schedule: Schedule::new(entries)?,
        duration: 4.0 * profile.phase_duration,
        ground_contact: true,
        airfoil_override: None,
    })
}

fn trimmed(sim: &Simulator, thrust: f64) -> Result<RigidBodyState, ScenarioError> {
    let t = trim::trim(sim, &TrimGuess::default(), thrust)?;
    let mut s = t.state;
    s.position = Vec3::new(0.0, 0.0, CRUISE_ALTITUDE);
    Ok(s)
}

/// Unpowered trimmed glide; both joints step by +1 deg between 1 s and 2 s.
///
/// Equal joint angles rotate the two wings in opposite senses about the
/// body y axis, raising the starboard angle of attack and lowering the port
/// one.
pub fn cruise_roll(sim: &Simulator) -> Result<Scenario, ScenarioError> {
    let zero = ActuationInput::default();
    let step = ActuationInput::new(ROLL_STEP, ROLL_STEP, 0.0, 0.0);
    Ok(Scenario {
        name: "cruise_roll".into(),
        initial_state: trimmed(sim, 0.0)?,
        schedule: Schedule::new(alloc::vec![(0.0, zero), (STEP_ON, step), (STEP_OFF, zero)])?,
        duration: 8.0,
        ground_contact: false,
        airfoil_override: None,
    })
}

/// Powered trim at 0.3 N per side; port thrust +20 %, starboard -20 %
/// between 1 s and 2 s.
pub fn cruise_yaw(sim: &Simulator) -> Result<Scenario, ScenarioError> {
    let t = CRUISE_THRUST;
    let base = ActuationInput::new(0.0, 0.0, t, t);
    let split = ActuationInput::new(0.0, 0.0, t * (1.0 + YAW_SPLIT), t * (1.0 - YAW_SPLIT));
    Ok(Scenario {
        name: "cruise_yaw".into(),
        initial_state: trimmed(sim, t)?,
        schedule: Schedule::new(alloc::vec![(0.0, base), (STEP_ON, split), (STEP_OFF, base)])?,
        duration: 8.0,
        ground_contact: false,
        airfoil_override: None,
    })
}

pub fn builtin(name: &str, sim: &Simulator, profile: &HoverProfile) -> Result<Scenario, ScenarioError> {
    match name {
        "hover_spinup" => Ok(hover_spinup(sim)),
        "hover_thrust" => hover_thrust(sim, profile),
        "cruise_roll" => cruise_roll(sim),
        "cruise_yaw" => cruise_yaw(sim),
        other => Err(ScenarioError::Unknown(other.into())),
    }
}

/// Level attitude with the given pitch, helper for hand-built scenarios.
pub fn pitched(theta: f64) -> nalgebra::UnitQuaternion<f64> {
    attitude_from_euler(0.0, theta, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(e: f64) -> ActuationInput {
        ActuationInput::new(e, e, 0.0, 0.0)
    }

    #[test]
    fn schedule_is_right_continuous() {
        let s = Schedule::new(alloc::vec![(0.0, a(0.0)), (1.0, a(0.1)), (2.0, a(0.2))]).unwrap();
        assert_eq!(s.at(0.0), a(0.0));
        assert_eq!(s.at(0.999), a(0.0));
        assert_eq!(s.at(1.0), a(0.1));
        assert_eq!(s.at(2.0), a(0.2));
        assert_eq!(s.at(50.0), a(0.2));
    }

    #[test]
    fn schedule_validation() {
        assert_eq!(Schedule::new(alloc::vec![]), Err(ScenarioError::EmptySchedule));
        assert_eq!(Schedule::new(alloc::vec![(0.5, a(0.0))]), Err(ScenarioError::ScheduleStart));
        assert_eq!(
            Schedule::new(alloc::vec![(0.0, a(0.0)), (1.0, a(0.0)), (1.0, a(0.0))]),
            Err(ScenarioError::ScheduleOrder(2))
        );
    }

    #[test]
    fn mirrored_schedule_swaps_sides() {
        let s = Schedule::new(alloc::vec![(0.0, ActuationInput::new(0.1, 0.2, 0.3, 0.4))]).unwrap();
        let m = s.mirrored().at(0.0);
        assert_eq!(m, ActuationInput::new(-0.2, -0.1, 0.4, 0.3));
    }

    #[test]
    fn hover_profile_ordering() {
        let p = HoverProfile::default();
        assert!(p.takeoff > p.hover && p.hover > p.descend);
        assert_eq!(p.hover, p.rehover);
    }
}
