//! TOML run configuration. Unknown keys are rejected everywhere.

use std::path::{Path, PathBuf};

use metamorph_core::aero::AirfoilMode;
use metamorph_core::airframe::{Airframe, AirframeError, MassProperties, DEFAULT_WING_MASS_FRACTION};
use metamorph_core::environment::{ContactModel, Environment};
use metamorph_core::frames::attitude_from_euler;
use metamorph_core::propulsion::ThrusterSpec;
use metamorph_core::scenario::{self, HoverProfile, Schedule, Simulator};
use metamorph_core::{ActuationInput, Airfoils, RigidBodyState, RunOptions, Scenario, Side, Vec3, WingSpec};
use nalgebra::Matrix3;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(default)]
    pub airframe: AirframeConfig,
    #[serde(default)]
    pub environment: EnvironmentConfig,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub hover_profile: Option<HoverProfileConfig>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AirframeConfig {
    pub wingspan: f64,
    pub root_chord: f64,
    pub taper_ratio: f64,
    pub sweep_deg: f64,
    pub dihedral_deg: f64,
    pub twist_deg: f64,
    pub hinge_x: f64,
    pub segments_per_side: usize,
    pub airfoil_cruise: String,
    pub airfoil_hover: String,
    pub mass: f64,
    pub cg_offset: [f64; 3],
    /// Used for the flat-plate inertia estimate when `inertia` is absent.
    pub wing_mass_fraction: f64,
    /// Full tensor about the centre of mass, kg m^2, row major.
    pub inertia: Option<[[f64; 3]; 3]>,
    /// Rating of the default tip thrusters, N.
    pub max_thrust: f64,
    pub thruster: Option<Vec<ThrusterConfig>>,
}

impl Default for AirframeConfig {
    fn default() -> Self {
        let w = WingSpec::default();
        Self {
            wingspan: w.wingspan,
            root_chord: w.root_chord,
            taper_ratio: w.taper_ratio,
            sweep_deg: 0.0,
            dihedral_deg: 0.0,
            twist_deg: 0.0,
            hinge_x: w.hinge_x,
            segments_per_side: w.segments_per_side,
            airfoil_cruise: w.airfoil_cruise,
            airfoil_hover: w.airfoil_hover,
            mass: 0.450,
            cg_offset: [0.0; 3],
            wing_mass_fraction: DEFAULT_WING_MASS_FRACTION,
            inertia: None,
            max_thrust: 1.0,
            thruster: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideName {
    Port,
    Starboard,
}

impl From<SideName> for Side {
    fn from(s: SideName) -> Self {
        match s {
            SideName::Port => Side::Port,
            SideName::Starboard => Side::Starboard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThrusterConfig {
    pub id: String,
    pub side: SideName,
    /// 1-based strip index, root to tip.
    pub segment: usize,
    pub max_thrust: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvironmentConfig {
    pub rho: f64,
    pub mu: f64,
    pub gravity: f64,
    pub wind: [f64; 3],
    pub contact: ContactConfig,
}

impl Default for EnvironmentConfig {
    fn default() -> Self {
        let e = Environment::default();
        Self {
            rho: e.rho,
            mu: e.mu,
            gravity: e.gravity,
            wind: e.wind.into(),
            contact: ContactConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContactConfig {
    pub height: f64,
    pub stiffness: f64,
    pub damping: f64,
    pub horizontal_damping: f64,
}

impl Default for ContactConfig {
    fn default() -> Self {
        let c = ContactModel::default();
        Self {
            height: c.height,
            stiffness: c.stiffness,
            damping: c.damping,
            horizontal_damping: c.horizontal_damping,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub dt: f64,
    pub output_every: usize,
    pub segment_telemetry: bool,
    /// Relative paths resolve against the config file's directory.
    pub polar_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl Default for SimSection {
    fn default() -> Self {
        let o = RunOptions::default();
        Self {
            dt: o.dt,
            output_every: o.output_every,
            segment_telemetry: o.segment_telemetry,
            polar_dir: None,
            out: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Cruise,
    Hover,
}

/// Either a built-in (`name` only, optional `duration` override) or a custom
/// open-loop run (`initial` and `schedule` given).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub duration: Option<f64>,
    pub ground_contact: Option<bool>,
    pub airfoil_override: Option<ModeName>,
    pub initial: Option<InitialConfig>,
    pub schedule: Option<Vec<ScheduleEntry>>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: "hover_spinup".into(),
            duration: None,
            ground_contact: None,
            airfoil_override: None,
            initial: None,
            schedule: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialConfig {
    /// World frame, z up, m.
    pub position: [f64; 3],
    /// Roll, pitch, yaw against north-east-down, degrees.
    pub euler_deg: [f64; 3],
    /// Body frame, m/s.
    pub velocity: [f64; 3],
    /// Body frame, rad/s.
    pub angular_velocity: [f64; 3],
}

impl Default for InitialConfig {
    fn default() -> Self {
        Self {
            position: [0.0; 3],
            euler_deg: [0.0; 3],
            velocity: [0.0; 3],
            angular_velocity: [0.0; 3],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleEntry {
    pub t: f64,
    pub eps_p_deg: f64,
    pub eps_s_deg: f64,
    pub thrust_p: f64,
    pub thrust_s: f64,
}

impl From<&ScheduleEntry> for ActuationInput {
    fn from(e: &ScheduleEntry) -> Self {
        ActuationInput::new(e.eps_p_deg.to_radians(), e.eps_s_deg.to_radians(), e.thrust_p, e.thrust_s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoverProfileConfig {
    pub takeoff: f64,
    pub hover: f64,
    pub descend: f64,
    pub rehover: f64,
    pub phase_duration: f64,
}

impl From<HoverProfileConfig> for HoverProfile {
    fn from(h: HoverProfileConfig) -> Self {
        HoverProfile {
            takeoff: h.takeoff,
            hover: h.hover,
            descend: h.descend,
            rehover: h.rehover,
            phase_duration: h.phase_duration,
        }
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            airframe: AirframeConfig::default(),
            environment: EnvironmentConfig::default(),
            sim: SimSection::default(),
            scenario: ScenarioConfig::default(),
            hover_profile: None,
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn positive(path: &Path, key: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(path, None, format!("`{key}` must be positive, got {v}")))
    }
}

impl SimConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let cfg: SimConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_of(text, s.start));
            CliError::config(path, line, e.message().to_string())
        })?;
        cfg.check(path)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<(Self, Vec<u8>), CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        let text = std::str::from_utf8(&bytes).map_err(|e| CliError::config(path, None, e.to_string()))?;
        Ok((Self::parse(text, path)?, bytes))
    }

    fn check(&self, path: &Path) -> Result<(), CliError> {
        let a = &self.airframe;
        positive(path, "airframe.mass", a.mass)?;
        positive(path, "airframe.max_thrust", a.max_thrust)?;
        let e = &self.environment;
        positive(path, "environment.rho", e.rho)?;
        positive(path, "environment.mu", e.mu)?;
        positive(path, "environment.gravity", e.gravity)?;
        positive(path, "environment.contact.stiffness", e.contact.stiffness)?;
        if !(e.contact.damping >= 0.0 && e.contact.horizontal_damping >= 0.0) {
            return Err(CliError::config(path, None, "contact damping must be non-negative".into()));
        }
        positive(path, "sim.dt", self.sim.dt)?;
        if self.sim.output_every == 0 {
            return Err(CliError::config(path, None, "`sim.output_every` must be at least 1".into()));
        }
        if let Some(d) = self.scenario.duration {
            positive(path, "scenario.duration", d)?;
        }
        if let Some(t) = &a.thruster {
            for th in t {
                positive(path, "airframe.thruster.max_thrust", th.max_thrust)?;
            }
        }
        Ok(())
    }

    pub fn wing(&self) -> WingSpec {
        let a = &self.airframe;
        WingSpec {
            wingspan: a.wingspan,
            root_chord: a.root_chord,
            taper_ratio: a.taper_ratio,
            sweep: a.sweep_deg.to_radians(),
            dihedral: a.dihedral_deg.to_radians(),
            twist: a.twist_deg.to_radians(),
            segments_per_side: a.segments_per_side,
            airfoil_cruise: a.airfoil_cruise.clone(),
            airfoil_hover: a.airfoil_hover.clone(),
            hinge_x: a.hinge_x,
        }
    }

    pub fn airframe(&self) -> Result<Airframe, AirframeError> {
        let a = &self.airframe;
        let wing = self.wing();
        let cg = Vec3::from(a.cg_offset);
        let thrusters = match &a.thruster {
            None => None,
            Some(list) => {
                let segs = metamorph_core::airframe::segment_wing(&wing, &cg)?;
                let mut out = Vec::with_capacity(list.len());
                for t in list {
                    let side = Side::from(t.side);
                    let seg = segs
                        .iter()
                        .find(|s| s.side == side && s.index == t.segment)
                        .ok_or_else(|| AirframeError::UnknownThrusterSegment(t.id.clone()))?;
                    out.push(ThrusterSpec {
                        id: t.id.clone(),
                        side,
                        segment: t.segment,
                        r_thrust: seg.r_ac,
                        hinge: seg.hinge,
                        max_thrust: t.max_thrust,
                    });
                }
                Some(out)
            }
        };
        match a.inertia {
            Some(rows) => {
                let i = Matrix3::from_fn(|r, c| rows[r][c]);
                let props = MassProperties::new(a.mass, i, cg)?;
                Airframe::new(wing, props, thrusters, a.max_thrust)
            }
            None => Airframe::with_estimated_inertia(
                wing,
                a.mass,
                cg,
                a.wing_mass_fraction * a.mass,
                thrusters,
                a.max_thrust,
            ),
        }
    }

    pub fn environment(&self) -> Environment {
        let e = &self.environment;
        Environment {
            rho: e.rho,
            mu: e.mu,
            gravity: e.gravity,
            wind: Vec3::from(e.wind),
            contact: ContactModel {
                height: e.contact.height,
                stiffness: e.contact.stiffness,
                damping: e.contact.damping,
                horizontal_damping: e.contact.horizontal_damping,
            },
        }
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            dt: self.sim.dt,
            output_every: self.sim.output_every,
            segment_telemetry: self.sim.segment_telemetry,
        }
    }

    pub fn hover_profile(&self) -> HoverProfile {
        self.hover_profile.map(Into::into).unwrap_or_default()
    }

    /// Scenario `name`: the configured custom scenario when the names match
    /// and it has a schedule, otherwise a built-in.
    pub fn scenario(&self, name: &str, sim: &Simulator, path: &Path) -> Result<Scenario, CliError> {
        let sc = &self.scenario;
        let mode = sc.airfoil_override.map(|m| match m {
            ModeName::Cruise => AirfoilMode::Cruise,
            ModeName::Hover => AirfoilMode::Hover,
        });
        if let (true, Some(entries)) = (sc.name == name, &sc.schedule) {
            let init = sc.initial.clone().unwrap_or_default();
            let [r, p, y] = init.euler_deg;
            let state = RigidBodyState {
                position: Vec3::from(init.position),
                attitude: attitude_from_euler(r.to_radians(), p.to_radians(), y.to_radians()),
                velocity: Vec3::from(init.velocity),
                angular_velocity: Vec3::from(init.angular_velocity),
                time: 0.0,
            };
            let schedule = Schedule::new(entries.iter().map(|e| (e.t, e.into())).collect())
                .map_err(|e| CliError::config(path, None, e.to_string()))?;
            let duration = sc
                .duration
                .ok_or_else(|| CliError::config(path, None, "custom scenario needs `duration`".into()))?;
            return Ok(Scenario {
                name: name.to_string(),
                initial_state: state,
                schedule,
                duration,
                ground_contact: sc.ground_contact.unwrap_or(false),
                airfoil_override: mode,
            });
        }
        let mut s = scenario::builtin(name, sim, &self.hover_profile()).map_err(CliError::Scenario)?;
        if sc.name == name {
            if let Some(d) = sc.duration {
                s.duration = d;
            }
            if let Some(g) = sc.ground_contact {
                s.ground_contact = g;
            }
            if mode.is_some() {
                s.airfoil_override = mode;
            }
        }
        Ok(s)
    }
}

/// Assembles the simulator from a config and loaded airfoils.
pub fn simulator(cfg: &SimConfig, airfoils: Airfoils, path: &Path) -> Result<Simulator, CliError> {
    let airframe = cfg
        .airframe()
        .map_err(|e| CliError::config(path, None, e.to_string()))?;
    Ok(Simulator::new(airframe, airfoils, cfg.environment()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<SimConfig, CliError> {
        SimConfig::parse(text, Path::new("test.toml"))
    }

    #[test]
    fn empty_config_is_the_prototype() {
        let cfg = parse("").unwrap();
        assert_eq!(cfg, SimConfig::default());
        let af = cfg.airframe().unwrap();
        let proto = Airframe::prototype();
        assert_eq!(af.mass, proto.mass);
        assert_eq!(af.segments, proto.segments);
        assert_eq!(af.thrusters, proto.thrusters);
    }

    #[test]
    fn unknown_key_is_rejected_with_line() {
        let err = parse("[airframe]\nmass = 0.45\nwingspn = 0.7\n").unwrap_err();
        match err {
            CliError::Config { line, message, .. } => {
                assert_eq!(line, Some(3));
                assert!(message.contains("wingspn"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_positive_quantities_are_rejected() {
        assert!(parse("[airframe]\nmass = 0.0\n").is_err());
        assert!(parse("[environment]\nrho = -1.0\n").is_err());
        assert!(parse("[sim]\ndt = 0.0\n").is_err());
        assert!(parse("[sim]\noutput_every = 0\n").is_err());
    }

    #[test]
    fn custom_schedule() {
        let text = r#"
[scenario]
name = "dive"
duration = 2.0
[scenario.initial]
position = [0.0, 0.0, 50.0]
velocity = [10.0, 0.0, 0.0]
[[scenario.schedule]]
t = 0.0
eps_p_deg = 0.0
eps_s_deg = 0.0
thrust_p = 0.0
thrust_s = 0.0
[[scenario.schedule]]
t = 1.0
eps_p_deg = 2.0
eps_s_deg = 2.0
thrust_p = 0.1
thrust_s = 0.1
"#;
        let cfg = parse(text).unwrap();
        let sched = cfg.scenario.schedule.as_ref().unwrap();
        assert_eq!(sched.len(), 2);
        let act: ActuationInput = (&sched[1]).into();
        assert!((act.epsilon_port - 2f64.to_radians()).abs() < 1e-15);
        assert_eq!(cfg.scenario.initial.as_ref().unwrap().position, [0.0, 0.0, 50.0]);
    }

    #[test]
    fn explicit_thrusters_and_inertia() {
        let text = r#"
[airframe]
inertia = [[0.006, 0.0, 0.0], [0.0, 0.0005, 0.0], [0.0, 0.0, 0.0062]]
[[airframe.thruster]]
id = "p4"
side = "port"
segment = 4
max_thrust = 0.8
"#;
        let af = parse(text).unwrap().airframe().unwrap();
        assert_eq!(af.thrusters.len(), 1);
        assert_eq!(af.thrusters[0].segment, 4);
        assert_eq!(af.mass.inertia[(1, 1)], 0.0005);
        let bad = "[[airframe.thruster]]\nid = \"x\"\nside = \"port\"\nsegment = 9\nmax_thrust = 1.0\n";
        assert!(parse(bad).unwrap().airframe().is_err());
    }
}
