//! gnuplot scripts for a finished run directory. Scripts only; nothing is
//! rendered here.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::CliError;
use crate::telemetry::{SEGMENTS_CSV, SEGMENT_HEADER, VEHICLE_CSV, VEHICLE_HEADER};

pub const VEHICLE_GP: &str = "vehicle.gp";
pub const SEGMENTS_GP: &str = "segments.gp";

fn header(path: &Path) -> Result<(csv::Reader<std::fs::File>, Vec<String>), CliError> {
    let missing = |m: String| CliError::MissingTelemetry {
        path: path.to_path_buf(),
        message: m,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(|e| missing(e.to_string()))?;
    let h = rdr.headers().map_err(|e| missing(e.to_string()))?;
    let cols = h.iter().map(str::to_string).collect();
    Ok((rdr, cols))
}

fn expect_header(path: &Path, got: &[String], want: &[&str]) -> Result<(), CliError> {
    if got.iter().map(String::as_str).eq(want.iter().copied()) {
        Ok(())
    } else {
        Err(CliError::MissingTelemetry {
            path: path.to_path_buf(),
            message: format!("unexpected header {}", got.join(",")),
        })
    }
}

/// Strips per side, counted from the rows of the first output time.
fn segments_per_side(path: &Path) -> Result<usize, CliError> {
    let (mut rdr, cols) = header(path)?;
    expect_header(path, &cols, &SEGMENT_HEADER)?;
    let mut first = None;
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::MissingTelemetry {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let t = rec.get(0).unwrap_or("").to_string();
        match &first {
            None => first = Some(t),
            Some(f) if *f != t => break,
            _ => {}
        }
        rows += 1;
    }
    if rows == 0 || rows % 2 != 0 {
        return Err(CliError::MissingTelemetry {
            path: path.to_path_buf(),
            message: format!("{rows} segment rows in the first sample"),
        });
    }
    Ok(rows / 2)
}

fn preamble(out: &mut String, png: &str, rows: usize, title: &str) {
    let _ = writeln!(out, "# gnuplot {}", png.replace(".png", ".gp"));
    let _ = writeln!(out, "set datafile separator \",\"");
    let _ = writeln!(out, "set terminal pngcairo size 1400,{} noenhanced", 330 * rows);
    let _ = writeln!(out, "set output \"{png}\"");
    let _ = writeln!(out, "set multiplot layout {rows},{} title \"{title}\"", if rows == 3 { 2 } else { 1 });
    let _ = writeln!(out, "set grid");
    let _ = writeln!(out, "set key outside right");
    let _ = writeln!(out, "set xlabel \"t [s]\"");
}

/// Body-frame rates, attitude, position, velocity and total loads.
pub fn vehicle_script() -> String {
    let mut s = String::new();
    preamble(&mut s, "vehicle.png", 3, "vehicle");
    let panels: [(&str, [usize; 3], bool); 6] = [
        ("position, world [m]", [2, 3, 4], false),
        ("attitude [deg]", [5, 6, 7], true),
        ("velocity, body [m/s]", [8, 9, 10], false),
        ("angular rate, body [rad/s]", [11, 12, 13], false),
        ("force, body [N]", [14, 15, 16], false),
        ("moment, body [N m]", [17, 18, 19], false),
    ];
    for (title, cols, deg) in panels {
        let _ = writeln!(s, "set title \"{title}\"");
        let series: Vec<String> = cols
            .iter()
            .map(|&c| {
                let y = if deg { format!("(${c}*180/pi)") } else { format!("{c}") };
                format!("\"{VEHICLE_CSV}\" skip 1 using 1:{y} with lines title \"{}\"", VEHICLE_HEADER[c - 1])
            })
            .collect();
        let _ = writeln!(s, "plot {}", series.join(", \\\n     "));
    }
    let _ = writeln!(s, "unset multiplot");
    s
}

/// Per-strip Fx, Fz and effective angle of attack, coloured root to tip;
/// port dashed, starboard solid.
pub fn segments_script(n: usize) -> String {
    let mut s = String::new();
    preamble(&mut s, "segments.png", 3, "segments");
    let _ = writeln!(s, "set palette defined (0 \"#1f4e9c\", 1 \"#d62728\")");
    let _ = writeln!(s, "unset colorbox");
    let panels = [
        ("Fx, body [N]", "$7"),
        ("Fz, body [N]", "$9"),
        ("alpha_eff [deg]", "($5*180/pi)"),
    ];
    for (title, y) in panels {
        let _ = writeln!(s, "set title \"{title}\"");
        let mut series = Vec::with_capacity(2 * n);
        for (side, tag, dash) in [("port", "P", 2), ("starboard", "S", 1)] {
            for i in 1..=n {
                let frac = if n > 1 { (i - 1) as f64 / (n - 1) as f64 } else { 0.0 };
                series.push(format!(
                    "\"{SEGMENTS_CSV}\" skip 1 using 1:((strcol(2) eq \"{side}\" && $3 == {i}) ? {y} : NaN) \
                     with lines dt {dash} lc palette frac {frac:.4} title \"{tag}{i}\""
                ));
            }
        }
        let _ = writeln!(s, "plot {}", series.join(", \\\n     "));
    }
    let _ = writeln!(s, "unset multiplot");
    s
}

/// Writes `vehicle.gp`, plus `segments.gp` when segment telemetry exists.
pub fn write_scripts(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let vpath = dir.join(VEHICLE_CSV);
    let (_, cols) = header(&vpath)?;
    expect_header(&vpath, &cols, &VEHICLE_HEADER)?;
    let mut written = Vec::new();
    let out = dir.join(VEHICLE_GP);
    std::fs::write(&out, vehicle_script()).map_err(|e| CliError::io(&out, e))?;
    written.push(out);
    let spath = dir.join(SEGMENTS_CSV);
    if spath.exists() {
        let n = segments_per_side(&spath)?;
        let out = dir.join(SEGMENTS_GP);
        std::fs::write(&out, segments_script(n)).map_err(|e| CliError::io(&out, e))?;
        written.push(out);
    }
    Ok(written)
}
