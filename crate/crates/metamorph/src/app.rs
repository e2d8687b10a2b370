//! The work behind each subcommand, independent of argument parsing.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use metamorph_core::scenario::{RunError, RunSummary, Simulator, BUILTIN_SCENARIOS};
use metamorph_core::trim::{self, TrimGuess};
use metamorph_core::RunOptions;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{self, SimConfig};
use crate::error::CliError;
use crate::polars::{self, sha256_hex, PolarFile};
use crate::telemetry::CsvSink;

pub const MANIFEST: &str = "run_manifest.json";

/// Config, simulator and provenance shared by every run of one invocation.
pub struct Context {
    pub config_path: PathBuf,
    pub config: SimConfig,
    pub config_sha256: String,
    pub polar_files: Vec<PolarFile>,
    pub sim: Simulator,
}

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub polar_dir: Option<PathBuf>,
    pub segments: Option<usize>,
    pub dt: Option<f64>,
}

impl Context {
    pub fn load(config_path: &Path, o: &Overrides) -> Result<Self, CliError> {
        let (mut cfg, bytes) = SimConfig::load(config_path)?;
        if let Some(n) = o.segments {
            cfg.airframe.segments_per_side = n;
        }
        if let Some(dt) = o.dt {
            cfg.sim.dt = dt;
        }
        let dir = polars::resolve_dir(o.polar_dir.as_deref(), cfg.sim.polar_dir.as_deref(), Some(config_path));
        let (airfoils, polar_files) =
            polars::load_airfoils(&dir, &cfg.airframe.airfoil_cruise, &cfg.airframe.airfoil_hover)?;
        let sim = config::simulator(&cfg, airfoils, config_path)?;
        Ok(Self {
            config_path: config_path.to_path_buf(),
            config: cfg,
            config_sha256: sha256_hex(&bytes),
            polar_files,
            sim,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
struct HashedFile {
    path: String,
    sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub version: &'static str,
    pub scenario: String,
    pub out: String,
    config: HashedFile,
    polars: Vec<HashedFile>,
    dt: f64,
    output_every: usize,
    segments_per_side: usize,
    duration: f64,
    steps: usize,
    samples: usize,
    clamped_steps: usize,
    pub wall_time_s: f64,
}

/// Scenario names to run: `all` expands to every built-in, an empty list to
/// the configured scenario.
pub fn scenario_names(requested: &[String], cfg: &SimConfig) -> Vec<String> {
    if requested.is_empty() {
        return vec![cfg.scenario.name.clone()];
    }
    let mut out = Vec::new();
    for r in requested {
        if r == "all" {
            out.extend(BUILTIN_SCENARIOS.iter().map(|s| s.to_string()));
        } else {
            out.push(r.clone());
        }
    }
    out
}

/// Runs one scenario into `out`, writing the CSVs and the manifest.
pub fn run_scenario(ctx: &Context, name: &str, out: &Path) -> Result<(RunSummary, Manifest), CliError> {
    let started = Instant::now();
    let scenario = ctx.config.scenario(name, &ctx.sim, &ctx.config_path)?;
    let opts: RunOptions = ctx.config.run_options();
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let mut sink = CsvSink::create(out, opts.segment_telemetry).map_err(|e| CliError::io(out, e.into()))?;
    let summary = match ctx.sim.run(&scenario, &opts, &mut sink) {
        Ok(s) => s,
        Err(RunError::Sim(e)) => return Err(e.into()),
        Err(RunError::Sink(e)) => return Err(CliError::io(out, e.into())),
    };
    sink.finish().map_err(|e| CliError::io(out, e))?;
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        scenario: name.to_string(),
        out: out.display().to_string(),
        config: HashedFile {
            path: ctx.config_path.display().to_string(),
            sha256: ctx.config_sha256.clone(),
        },
        polars: ctx
            .polar_files
            .iter()
            .map(|f| HashedFile {
                path: f.path.display().to_string(),
                sha256: f.sha256.clone(),
            })
            .collect(),
        dt: opts.dt,
        output_every: opts.output_every,
        segments_per_side: ctx.sim.airframe.wing.segments_per_side,
        duration: scenario.duration,
        steps: summary.steps,
        samples: summary.samples,
        clamped_steps: summary.clamped_steps,
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    let path = out.join(MANIFEST);
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
    Ok((summary, manifest))
}

/// Runs every name; with more than one, each gets `out/<name>/`. Up to
/// `jobs` runs execute at once. Results come back in input order.
pub fn run_all(
    ctx: &Context,
    names: &[String],
    out: &Path,
    jobs: usize,
) -> Vec<(String, Result<(RunSummary, Manifest), CliError>)> {
    let dirs: Vec<PathBuf> = if names.len() == 1 {
        vec![out.to_path_buf()]
    } else {
        names.iter().map(|n| out.join(n)).collect()
    };
    let results: Vec<Mutex<Option<Result<(RunSummary, Manifest), CliError>>>> =
        names.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs.clamp(1, names.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= names.len() {
                    break;
                }
                let r = run_scenario(ctx, &names[i], &dirs[i]);
                *results[i].lock().unwrap() = Some(r);
            });
        }
    });
    names
        .iter()
        .cloned()
        .zip(results.into_iter().map(|m| m.into_inner().unwrap().expect("every run finishes")))
        .collect()
}

/// Trim (or hover balance) as JSON.
pub fn trim_report(ctx: &Context, thrust: f64, hover: bool) -> Result<Value, CliError> {
    if hover {
        let b = trim::hover_balance_thrust(&ctx.sim).map_err(CliError::Trim)?;
        return Ok(json!({
            "mode": "hover_balance",
            "thrust_per_side_n": b.thrust,
            "spin_rate_rad_s": b.spin_rate,
            "vertical_residual_n": b.vertical_residual,
        }));
    }
    let t = trim::trim(&ctx.sim, &TrimGuess::default(), thrust).map_err(CliError::Trim)?;
    Ok(json!({
        "mode": if thrust == 0.0 { "glide" } else { "powered" },
        "thrust_per_side_n": thrust,
        "airspeed_m_s": t.airspeed,
        "alpha_deg": t.alpha.to_degrees(),
        "theta_deg": t.theta.to_degrees(),
        "gamma_deg": t.gamma.to_degrees(),
        "lift_to_drag": t.lift_to_drag,
        "iterations": t.iterations,
        "residual_force_n": t.residual.force.as_slice(),
        "residual_moment_nm": t.residual.moment.as_slice(),
    }))
}
