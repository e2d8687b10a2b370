use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use metamorph::app::{self, Context, Overrides};
use metamorph::polars::{self, FileReport};
use metamorph::{plot, CliError};

#[derive(Parser)]
#[command(name = "metamorph", version, about = "Morphing-wing UAV flight simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more scenarios and write telemetry.
    Run {
        config: PathBuf,
        /// Built-in or configured scenario; repeatable, `all` for every built-in.
        #[arg(long)]
        scenario: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dt: Option<f64>,
        /// Strips per half wing.
        #[arg(long)]
        segments: Option<usize>,
        /// Scenarios run concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        polar_dir: Option<PathBuf>,
    },
    /// Parse every polar file in a directory and report.
    ValidatePolar { dir: PathBuf },
    /// Write gnuplot scripts for a run directory.
    Plot { out: PathBuf },
    /// Solve the symmetric trim (or the hover balance) and print it.
    Trim {
        config: PathBuf,
        /// Per-side thrust, N.
        #[arg(long, default_value_t = 0.0)]
        thrust: f64,
        #[arg(long)]
        hover: bool,
        #[arg(long)]
        segments: Option<usize>,
        #[arg(long)]
        polar_dir: Option<PathBuf>,
    },
}

// stdout may be a closed pipe (`| head`); that is not an error
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            config,
            scenario,
            out,
            dt,
            segments,
            jobs,
            polar_dir,
        } => {
            let o = Overrides { polar_dir, segments, dt };
            let ctx = match Context::load(&config, &o) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            let out = out.or_else(|| ctx.config.sim.out.clone()).unwrap_or_else(|| "results".into());
            let names = app::scenario_names(&scenario, &ctx.config);
            let mut code = ExitCode::SUCCESS;
            for (name, r) in app::run_all(&ctx, &names, &out, jobs) {
                match r {
                    Ok((summary, m)) => {
                        if summary.clamped_steps > 0 {
                            eprintln!(
                                "{}",
                                serde_json::json!({
                                    "warning": "ThrustOutOfRange",
                                    "scenario": name,
                                    "clamped_steps": summary.clamped_steps,
                                })
                            );
                        }
                        say!(
                            "{}",
                            serde_json::json!({
                                "scenario": name,
                                "out": m.out,
                                "steps": summary.steps,
                                "samples": summary.samples,
                                "wall_time_s": m.wall_time_s,
                            })
                        );
                    }
                    Err(e) => code = fail(&e),
                }
            }
            code
        }
        Command::ValidatePolar { dir } => {
            let report = match polars::validate_dir(&dir) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            for f in &report.files {
                match f {
                    FileReport::Ok {
                        path,
                        reynolds,
                        alpha_min_deg,
                        alpha_max_deg,
                        points,
                    } => say!(
                        "OK    {}  Re={reynolds}  alpha=[{alpha_min_deg}, {alpha_max_deg}] deg  points={points}",
                        path.display()
                    ),
                    FileReport::Rejected { error } => say!("ERROR {error}"),
                }
            }
            for w in &report.warnings {
                say!("WARN  {w}");
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Plot { out } => match plot::write_scripts(&out) {
            Ok(files) => {
                for f in files {
                    say!("{}", f.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
        Command::Trim {
            config,
            thrust,
            hover,
            segments,
            polar_dir,
        } => {
            let o = Overrides {
                polar_dir,
                segments,
                dt: None,
            };
            let report = Context::load(&config, &o).and_then(|ctx| app::trim_report(&ctx, thrust, hover));
            match report {
                Ok(v) => {
                    say!("{}", serde_json::to_string_pretty(&v).expect("json"));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
    }
}
