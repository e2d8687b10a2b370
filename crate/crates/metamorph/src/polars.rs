//! Polar directory ingest: every `*.txt` under `<root>/<airfoil>/` is one
//! curve of that airfoil's surface.

use std::path::{Path, PathBuf};

use metamorph_core::polar::{parse_polar, PolarCurve, PolarSurface};
use metamorph_core::Airfoils;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Environment variable consulted when neither the command line nor the
/// config names a polar directory.
pub const POLAR_DIR_ENV: &str = "METAMORPH_POLAR_DIR";

#[derive(Debug, Clone, PartialEq)]
pub struct PolarFile {
    pub path: PathBuf,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Command-line flag, then config entry (relative to the config file), then
/// [`POLAR_DIR_ENV`], then `./polars`.
pub fn resolve_dir(flag: Option<&Path>, config: Option<&Path>, config_path: Option<&Path>) -> PathBuf {
    if let Some(f) = flag {
        return f.to_path_buf();
    }
    if let Some(c) = config {
        let base = config_path.and_then(Path::parent).unwrap_or(Path::new(""));
        return base.join(c);
    }
    match std::env::var_os(POLAR_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from("polars"),
    }
}

/// Sorted `*.txt` files directly inside `dir`.
pub fn polar_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let rd = std::fs::read_dir(dir).map_err(|e| CliError::polar(dir, e))?;
    let mut files = Vec::new();
    for entry in rd {
        let p = entry.map_err(|e| CliError::polar(dir, e))?.path();
        if p.is_file() && p.extension().is_some_and(|x| x.eq_ignore_ascii_case("txt")) {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

pub fn read_curve(path: &Path) -> Result<(PolarCurve, PolarFile), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::polar(path, e))?;
    let text = String::from_utf8_lossy(&bytes);
    let curve = parse_polar(&text).map_err(|e| CliError::polar_parse(path, &e))?;
    Ok((
        curve,
        PolarFile {
            path: path.to_path_buf(),
            sha256: sha256_hex(&bytes),
        },
    ))
}

pub fn load_surface(root: &Path, name: &str) -> Result<(PolarSurface, Vec<PolarFile>), CliError> {
    let dir = root.join(name);
    let files = polar_files(&dir)?;
    let mut curves = Vec::with_capacity(files.len());
    let mut meta = Vec::with_capacity(files.len());
    for f in &files {
        let (c, m) = read_curve(f)?;
        curves.push(c);
        meta.push(m);
    }
    let surface = PolarSurface::new(name, curves).map_err(|e| CliError::polar(&dir, e))?;
    Ok((surface, meta))
}

/// Cruise and hover surfaces named by the wing, plus hashes of every file
/// read.
pub fn load_airfoils(root: &Path, cruise: &str, hover: &str) -> Result<(Airfoils, Vec<PolarFile>), CliError> {
    let (c, mut files) = load_surface(root, cruise)?;
    let (h, more) = load_surface(root, hover)?;
    if hover != cruise {
        files.extend(more);
    }
    Ok((Airfoils::new(c, h), files))
}

/// One line of the `validate-polar` report.
#[derive(Debug, Clone, PartialEq)]
pub enum FileReport {
    Ok {
        path: PathBuf,
        reynolds: f64,
        alpha_min_deg: f64,
        alpha_max_deg: f64,
        points: usize,
    },
    Rejected {
        error: String,
    },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub files: Vec<FileReport>,
    /// Directory-level problems (empty directory, duplicate Reynolds).
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.warnings.is_empty() && self.files.iter().all(|f| matches!(f, FileReport::Ok { .. }))
    }
}

/// Parses every polar in `dir`, or in each airfoil subdirectory of `dir`.
pub fn validate_dir(dir: &Path) -> Result<ValidationReport, CliError> {
    if !dir.is_dir() {
        return Err(CliError::polar(dir, "not a directory"));
    }
    let mut groups = vec![dir.to_path_buf()];
    let mut subdirs: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::polar(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    subdirs.sort();
    groups.extend(subdirs);

    let mut report = ValidationReport::default();
    for g in &groups {
        let files = polar_files(g)?;
        let mut curves = Vec::new();
        for f in files {
            match read_curve(&f) {
                Ok((c, _)) => {
                    report.files.push(FileReport::Ok {
                        path: f,
                        reynolds: c.reynolds(),
                        alpha_min_deg: c.points()[0].alpha_deg,
                        alpha_max_deg: c.points()[c.points().len() - 1].alpha_deg,
                        points: c.points().len(),
                    });
                    curves.push(c);
                }
                Err(e) => report.files.push(FileReport::Rejected { error: e.to_string() }),
            }
        }
        if !curves.is_empty() {
            let name = g.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            if let Err(e) = PolarSurface::new(name, curves) {
                report.warnings.push(format!("{}: {e}", g.display()));
            }
        }
    }
    if report.files.is_empty() {
        report.warnings.push(format!("{}: polar surface has no curves", dir.display()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_wins_then_config_relative_to_file() {
        let p = resolve_dir(Some(Path::new("/a")), Some(Path::new("b")), Some(Path::new("/cfg/x.toml")));
        assert_eq!(p, PathBuf::from("/a"));
        let p = resolve_dir(None, Some(Path::new("b")), Some(Path::new("/cfg/x.toml")));
        assert_eq!(p, PathBuf::from("/cfg/b"));
    }

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
