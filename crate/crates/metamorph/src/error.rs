use std::path::{Path, PathBuf};

use metamorph_core::dynamics::{DynamicsError, RigidBodyState};
use metamorph_core::polar::PolarError;
use metamorph_core::scenario::{ScenarioError, SimError};
use metamorph_core::trim::TrimError;
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}{}: {message}", path.display(), line.map(|l| format!(":{l}")).unwrap_or_default())]
    Config {
        path: PathBuf,
        line: Option<usize>,
        message: String,
    },
    #[error("{}{}: {message}", path.display(), line.map(|l| format!(":{l}")).unwrap_or_default())]
    Polar {
        path: PathBuf,
        line: Option<usize>,
        message: String,
    },
    #[error("simulation diverged at t = {time} s")]
    Diverged { time: f64, last_good: Box<RigidBodyState> },
    #[error(transparent)]
    Simulation(SimError),
    #[error(transparent)]
    Scenario(ScenarioError),
    #[error(transparent)]
    Trim(TrimError),
    #[error("{}: no telemetry ({message})", path.display())]
    MissingTelemetry { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn config(path: &Path, line: Option<usize>, message: String) -> Self {
        Self::Config {
            path: path.to_path_buf(),
            line,
            message,
        }
    }

    pub fn polar(path: &Path, err: impl std::fmt::Display) -> Self {
        Self::Polar {
            path: path.to_path_buf(),
            line: None,
            message: err.to_string(),
        }
    }

    pub fn polar_parse(path: &Path, err: &PolarError) -> Self {
        let line = match err {
            PolarError::MalformedRow(n) => Some(*n),
            _ => None,
        };
        Self::Polar {
            path: path.to_path_buf(),
            line,
            message: err.to_string(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Config { .. } => "ConfigError",
            Self::Polar { .. } => "PolarError",
            Self::Diverged { .. } => "SimulationDiverged",
            Self::Simulation(_) => "SimulationError",
            Self::Scenario(_) => "ScenarioError",
            Self::Trim(_) => "TrimError",
            Self::MissingTelemetry { .. } => "MissingTelemetry",
            Self::Io { .. } => "IoError",
            Self::Usage(_) => "UsageError",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Polar { .. } => 2,
            _ => 1,
        }
    }

    /// Machine-readable form printed on stderr.
    pub fn to_json(&self) -> Value {
        let mut v = json!({ "error": self.kind(), "message": self.to_string() });
        match self {
            Self::Config { path, line, .. } | Self::Polar { path, line, .. } => {
                v["file"] = json!(path);
                if let Some(l) = line {
                    v["line"] = json!(l);
                }
            }
            Self::MissingTelemetry { path, .. } | Self::Io { path, .. } => {
                v["file"] = json!(path);
            }
            Self::Diverged { time, last_good } => {
                let s = last_good;
                let q = s.attitude.quaternion();
                v["time"] = json!(time);
                v["last_good_state"] = json!({
                    "t": s.time,
                    "position": s.position.as_slice(),
                    "attitude_wxyz": [q.w, q.i, q.j, q.k],
                    "velocity": s.velocity.as_slice(),
                    "angular_velocity": s.angular_velocity.as_slice(),
                });
            }
            _ => {}
        }
        v
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Dynamics(DynamicsError::NonFiniteState { time, last_good, .. }) => Self::Diverged { time, last_good },
            SimError::Scenario(s) => Self::Scenario(s),
            other => Self::Simulation(other),
        }
    }
}
