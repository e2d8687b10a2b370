//! Airfoil polar tables: parsing XFLR5 text exports and serving coefficients
//! over (Reynolds number, angle of attack).
//!
//! Angles are kept in degrees inside [`PolarPoint`] because that is how the
//! files store them. Each [`PolarCurve`] converts its abscissa to radians
//! once, at construction, and every query takes radians.
//!
//! Outside the measured alpha range a curve hands over to a flat-plate model
//! ([`FlatPlate`]) through a linear blend over [`BLEND_BAND`], so a lookup is
//! defined (and continuous) over the full `[-pi, pi]` circle.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::math::{cos, log, sin, wrap_pi, DEG};

/// Width of the table-edge blend into the flat-plate model, radians (5 deg).
pub const BLEND_BAND: f64 = 5.0 * DEG;

/// Minimum number of rows a curve must carry.
pub const MIN_POINTS: usize = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolarError {
    #[error("no `Re = <mantissa> e <exponent>` header found")]
    MissingReynoldsHeader,
    #[error("Reynolds number {0} is not positive and finite")]
    InvalidReynolds(f64),
    #[error("missing column `{0}`")]
    MissingColumn(&'static str),
    #[error("alpha values are not strictly increasing (duplicate at {0} deg)")]
    NonMonotonicAlpha(f64),
    #[error("polar has no data rows")]
    EmptyPolar,
    #[error("polar has {0} rows, at least {MIN_POINTS} are required")]
    TooFewPoints(usize),
    #[error("malformed data row at line {0}")]
    MalformedRow(usize),
    #[error("polar surface has no curves")]
    EmptySurface,
    #[error("duplicate Reynolds number {0} in surface")]
    DuplicateReynolds(f64),
}

/// One tabulated row: angle of attack in degrees and the three section
/// coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    pub alpha_deg: f64,
    pub cl: f64,
    pub cd: f64,
    pub cm: f64,
}

/// Lift, drag and quarter-chord pitching-moment coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Coefficients {
    pub cl: f64,
    pub cd: f64,
    pub cm: f64,
}

impl Coefficients {
    pub const fn new(cl: f64, cd: f64, cm: f64) -> Self {
        Self { cl, cd, cm }
    }

    /// `self + t * (other - self)`; returns `self` bit-exactly at `t = 0`.
    pub fn lerp(&self, other: &Self, t: f64) -> Self {
        Self {
            cl: self.cl + t * (other.cl - self.cl),
            cd: self.cd + t * (other.cd - self.cd),
            cm: self.cm + t * (other.cm - self.cm),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.cl.is_finite() && self.cd.is_finite() && self.cm.is_finite()
    }
}

impl From<&PolarPoint> for Coefficients {
    fn from(p: &PolarPoint) -> Self {
        Self::new(p.cl, p.cd, p.cm)
    }
}

/// Flat-plate post-stall model used beyond the tabulated alpha range.
///
/// `cl = 2 sin a cos a`, `cd = cd0 + 2 sin^2 a`, normal force `cn = 2 sin a`
/// acting at `x_cp = 0.25 + 0.25 |sin a|` chords, so the quarter-chord moment
/// is `cm = -cn (x_cp - 0.25)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatPlate {
    pub cd0: f64,
}

impl Default for FlatPlate {
    fn default() -> Self {
        Self { cd0: 0.02 }
    }
}

impl FlatPlate {
    pub fn coeffs(&self, alpha: f64) -> Coefficients {
        let (s, c) = (sin(alpha), cos(alpha));
        let cn = 2.0 * s;
        let x_cp = 0.25 + 0.25 * s.abs();
        Coefficients {
            cl: 2.0 * s * c,
            cd: self.cd0 + 2.0 * s * s,
            cm: -cn * (x_cp - 0.25),
        }
    }
}

/// Flat-plate coefficients with the default `cd0 = 0.02`.
pub fn flat_plate_coeffs(alpha: f64) -> Coefficients {
    FlatPlate::default().coeffs(alpha)
}

/// One polar: a single Reynolds number, rows sorted by alpha.
#[derive(Debug, Clone)]
pub struct PolarCurve {
    reynolds: f64,
    points: Vec<PolarPoint>,
    alpha_rad: Vec<f64>,
}

impl PartialEq for PolarCurve {
    fn eq(&self, other: &Self) -> bool {
        self.reynolds == other.reynolds && self.points == other.points
    }
}

impl PolarCurve {
    /// Builds a curve, sorting rows by alpha and rejecting duplicates,
    /// non-finite values and non-positive drag.
    pub fn new(reynolds: f64, mut points: Vec<PolarPoint>) -> Result<Self, PolarError> {
        if !(reynolds.is_finite() && reynolds > 0.0) {
            return Err(PolarError::InvalidReynolds(reynolds));
        }
        if points.is_empty() {
            return Err(PolarError::EmptyPolar);
        }
        if points.len() < MIN_POINTS {
            return Err(PolarError::TooFewPoints(points.len()));
        }
        points.sort_by(|a, b| a.alpha_deg.total_cmp(&b.alpha_deg));
        for pair in points.windows(2) {
            if pair[1].alpha_deg <= pair[0].alpha_deg {
                return Err(PolarError::NonMonotonicAlpha(pair[1].alpha_deg));
            }
        }
        let alpha_rad = points.iter().map(|p| p.alpha_deg * DEG).collect();
        Ok(Self {
            reynolds,
            points,
            alpha_rad,
        })
    }

    pub fn reynolds(&self) -> f64 {
        self.reynolds
    }

    pub fn points(&self) -> &[PolarPoint] {
        &self.points
    }

    /// Tabulated alpha values in radians, in row order.
    pub fn alpha_nodes(&self) -> &[f64] {
        &self.alpha_rad
    }

    pub fn alpha_min(&self) -> f64 {
        self.alpha_rad[0]
    }

    pub fn alpha_max(&self) -> f64 {
        self.alpha_rad[self.alpha_rad.len() - 1]
    }

    /// Coefficients at `alpha` (radians), blended into `plate` outside the
    /// tabulated range.
    pub fn eval(&self, alpha: f64, plate: &FlatPlate) -> Coefficients {
        let nodes = &self.alpha_rad;
        let (lo, hi) = (self.alpha_min(), self.alpha_max());
        if alpha < lo {
            return blend_edge((&self.points[0]).into(), plate.coeffs(alpha), lo - alpha);
        }
        if alpha > hi {
            let edge = (&self.points[self.points.len() - 1]).into();
            return blend_edge(edge, plate.coeffs(alpha), alpha - hi);
        }
        let j = nodes.partition_point(|&a| a <= alpha);
        if j == nodes.len() {
            return (&self.points[j - 1]).into();
        }
        let i = j - 1;
        let t = (alpha - nodes[i]) / (nodes[j] - nodes[i]);
        Coefficients::from(&self.points[i]).lerp(&(&self.points[j]).into(), t)
    }
}

fn blend_edge(edge: Coefficients, plate: Coefficients, distance: f64) -> Coefficients {
    if distance >= BLEND_BAND {
        plate
    } else {
        edge.lerp(&plate, distance / BLEND_BAND)
    }
}

/// All polars of one airfoil, ordered by ascending Reynolds number.
///
/// Immutable after construction and `Sync`, so one surface can serve any
/// number of concurrent simulations.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarSurface {
    name: String,
    curves: Vec<PolarCurve>,
    log_re: Vec<f64>,
    plate: FlatPlate,
}

impl PolarSurface {
    pub fn new(name: impl Into<String>, mut curves: Vec<PolarCurve>) -> Result<Self, PolarError> {
        if curves.is_empty() {
            return Err(PolarError::EmptySurface);
        }
        curves.sort_by(|a, b| a.reynolds.total_cmp(&b.reynolds));
        for pair in curves.windows(2) {
            if pair[0].reynolds == pair[1].reynolds {
                return Err(PolarError::DuplicateReynolds(pair[0].reynolds));
            }
        }
        let log_re = curves.iter().map(|c| log(c.reynolds)).collect();
        Ok(Self {
            name: name.into(),
            curves,
            log_re,
            plate: FlatPlate::default(),
        })
    }

    pub fn with_flat_plate(mut self, plate: FlatPlate) -> Self {
        self.plate = plate;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn curves(&self) -> &[PolarCurve] {
        &self.curves
    }

    pub fn flat_plate(&self) -> &FlatPlate {
        &self.plate
    }

    /// Coefficients at `(reynolds, alpha)`, alpha in radians.
    ///
    /// Linear in alpha along each curve, linear in `ln Re` across curves,
    /// clamped to the first/last curve outside the tabulated Reynolds range.
    pub fn lookup(&self, reynolds: f64, alpha: f64) -> Coefficients {
        let alpha = wrap_pi(alpha);
        let first = &self.curves[0];
        let last = &self.curves[self.curves.len() - 1];
        if !(reynolds > first.reynolds) {
            return first.eval(alpha, &self.plate);
        }
        if reynolds >= last.reynolds {
            return last.eval(alpha, &self.plate);
        }
        let j = self.curves.partition_point(|c| c.reynolds <= reynolds);
        let i = j - 1;
        let t = (log(reynolds) - self.log_re[i]) / (self.log_re[j] - self.log_re[i]);
        let a = self.curves[i].eval(alpha, &self.plate);
        let b = self.curves[j].eval(alpha, &self.plate);
        a.lerp(&b, t)
    }
}

const REQUIRED_COLUMNS: [&str; 4] = ["alpha", "CL", "CD", "Cm"];

/// Parses an XFLR5 polar export.
///
/// Needs a `Re = <mantissa> e <exponent>` header somewhere above the data, a
/// column-header line starting with `alpha`, then whitespace-separated rows.
/// Columns are picked by name, so extra columns (`CDp`, `Top Xtr`, ...) can
/// appear in any order.
pub fn parse_polar(text: &str) -> Result<PolarCurve, PolarError> {
    let mut reynolds = None;
    let mut columns: Option<[usize; 4]> = None;
    let mut points = Vec::new();

    for (n, line) in text.lines().enumerate() {
        let lineno = n + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        match columns {
            None => {
                if reynolds.is_none() {
                    if let Some(re) = parse_reynolds(line) {
                        reynolds = Some(re);
                        continue;
                    }
                }
                let first = trimmed.split_whitespace().next().unwrap_or("");
                if first.eq_ignore_ascii_case("alpha") {
                    columns = Some(column_indices(trimmed)?);
                }
            }
            Some(idx) => {
                if trimmed.starts_with("--") {
                    continue;
                }
                points.push(parse_row(trimmed, &idx).ok_or(PolarError::MalformedRow(lineno))?);
            }
        }
    }

    let reynolds = reynolds.ok_or(PolarError::MissingReynoldsHeader)?;
    if columns.is_none() {
        return Err(PolarError::MissingColumn("alpha"));
    }
    PolarCurve::new(reynolds, points)
}

fn column_indices(header: &str) -> Result<[usize; 4], PolarError> {
    let mut names: Vec<&str> = Vec::new();
    let mut tokens = header.split_whitespace().peekable();
    while let Some(tok) = tokens.next() {
        // "Top Xtr" / "Bot Xtr" are single data columns
        if (tok == "Top" || tok == "Bot") && tokens.peek() == Some(&"Xtr") {
            tokens.next();
        }
        names.push(tok);
    }
    let mut out = [0usize; 4];
    for (slot, want) in out.iter_mut().zip(REQUIRED_COLUMNS) {
        *slot = names
            .iter()
            .position(|n| n.eq_ignore_ascii_case(want))
            .ok_or(PolarError::MissingColumn(want))?;
    }
    Ok(out)
}

fn parse_row(line: &str, idx: &[usize; 4]) -> Option<PolarPoint> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let get = |i: usize| -> Option<f64> {
        let v: f64 = fields.get(i)?.parse().ok()?;
        v.is_finite().then_some(v)
    };
    let point = PolarPoint {
        alpha_deg: get(idx[0])?,
        cl: get(idx[1])?,
        cd: get(idx[2])?,
        cm: get(idx[3])?,
    };
    (point.cd > 0.0).then_some(point)
}

/// Extracts the Reynolds number from a header line such as
/// ` Mach =   0.000     Re =     0.100 e 6     Ncrit =   9.000`.
fn parse_reynolds(line: &str) -> Option<f64> {
    let bytes = line.as_bytes();
    let mut start = 0;
    while let Some(off) = line[start..].find("Re") {
        let at = start + off;
        start = at + 2;
        if at > 0 && bytes[at - 1].is_ascii_alphanumeric() {
            continue;
        }
        let rest = line[at + 2..].trim_start();
        let Some(rest) = rest.strip_prefix('=') else {
            continue;
        };
        let rest = rest.trim_start();
        let mant_len = rest
            .find(|c: char| !(c.is_ascii_digit() || c == '.' || c == '+' || c == '-'))
            .unwrap_or(rest.len());
        let mantissa = &rest[..mant_len];
        if mantissa.is_empty() {
            return None;
        }
        let after = rest[mant_len..].trim_start();
        let exponent = match after.strip_prefix(['e', 'E']) {
            Some(exp) => {
                let exp = exp.trim_start();
                let len = exp
                    .find(|c: char| !(c.is_ascii_digit() || c == '+' || c == '-'))
                    .unwrap_or(exp.len());
                &exp[..len]
            }
            None => "0",
        };
        // decimal string -> f64 is correctly rounded, unlike mantissa * 10^exp
        return format!("{mantissa}e{exponent}").parse().ok();
    }
    None
}

/// Writes a curve back out in the XFLR5 layout read by [`parse_polar`].
///
/// Values use Rust's shortest round-trip formatting, so parsing the output
/// reproduces the curve bit for bit.
pub fn write_polar(curve: &PolarCurve, title: &str) -> String {
    let mut out = String::new();
    let sci = format!("{:e}", curve.reynolds);
    let (mant, exp) = sci.split_once('e').unwrap_or((sci.as_str(), "0"));
    let _ = writeln!(out, "xflr5 v6.47\n");
    let _ = writeln!(out, " Calculated polar for: {title}\n");
    let _ = writeln!(out, " Mach =   0.000     Re =     {mant} e {exp}     Ncrit =   9.000\n");
    let _ = writeln!(out, "  alpha     CL        CD       Cm");
    let _ = writeln!(out, " ------- -------- --------- --------");
    for p in &curve.points {
        let _ = writeln!(out, " {} {} {} {}", p.alpha_deg, p.cl, p.cd, p.cm);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;

    const SAMPLE: &str = "\
xflr5 v6.47

 Calculated polar for: E387

 1 1 Reynolds number fixed       Mach number fixed

 xtrf =   1.000 (top)        1.000 (bottom)
 Mach =   0.000     Re =     0.100 e 6     Ncrit =   9.000

  alpha     CL        CD       CDp       Cm    Top Xtr Bot Xtr   Cpmin    Chinge    XCp
 ------- -------- --------- --------- -------- ------- ------- -------- --------- ---------
  -1.000   0.2850   0.01050   0.00510  -0.0815  0.6000  0.9000  -0.9000   0.0000   0.3100
   0.000   0.3921   0.01012   0.00480  -0.0821  0.5800  0.9200  -0.8000   0.0000   0.3000
   1.000   0.5010   0.01030   0.00500  -0.0830  0.5500  0.9400  -0.9500   0.0000   0.2900
";

    #[test]
    fn reynolds_header_mantissa_exponent() {
        assert_eq!(parse_reynolds(" Mach =   0.000     Re =     0.100 e 6     Ncrit"), Some(100000.0));
        assert_eq!(parse_reynolds("Re=0.1e6"), Some(100000.0));
        assert_eq!(parse_reynolds("Re = 250000"), Some(250000.0));
        assert_eq!(parse_reynolds(" 1 1 Reynolds number fixed"), None);
        assert_eq!(parse_reynolds(" xtrf = 1.0"), None);
    }

    #[test]
    fn parses_sample_rows_by_column_name() {
        let curve = parse_polar(SAMPLE).unwrap();
        assert_eq!(curve.reynolds(), 100000.0);
        assert_eq!(curve.points().len(), 3);
        assert_eq!(
            curve.points()[1],
            PolarPoint {
                alpha_deg: 0.0,
                cl: 0.3921,
                cd: 0.01012,
                cm: -0.0821
            }
        );
    }

    #[test]
    fn unsorted_rows_are_sorted() {
        let text = "Re = 1 e 5\nalpha CL CD Cm\n2 0.2 0.01 0\n0 0.0 0.01 0\n1 0.1 0.01 0\n";
        let curve = parse_polar(text).unwrap();
        let alphas: Vec<f64> = curve.points().iter().map(|p| p.alpha_deg).collect();
        assert_eq!(alphas, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn duplicate_alpha_is_rejected() {
        let text = "Re = 1 e 5\nalpha CL CD Cm\n0 0.0 0.01 0\n1 0.1 0.01 0\n1 0.1 0.01 0\n";
        assert_eq!(parse_polar(text), Err(PolarError::NonMonotonicAlpha(1.0)));
    }

    #[test]
    fn error_paths() {
        assert_eq!(
            parse_polar("alpha CL CD Cm\n0 0 0.01 0\n1 0 0.01 0\n2 0 0.01 0\n"),
            Err(PolarError::MissingReynoldsHeader)
        );
        assert_eq!(
            parse_polar("Re = 1 e 5\nalpha CL CDp Cm\n0 0 0.01 0\n"),
            Err(PolarError::MissingColumn("CD"))
        );
        assert_eq!(parse_polar("Re = 1 e 5\nalpha CL CD Cm\n"), Err(PolarError::EmptyPolar));
        assert_eq!(
            parse_polar("Re = 1 e 5\nalpha CL CD Cm\n0 0 0.01 0\n1 0.1 0.01\n"),
            Err(PolarError::MalformedRow(4))
        );
        assert_eq!(
            parse_polar("Re = 1 e 5\nalpha CL CD Cm\n0 0 0.01 0\n1 nan 0.01 0\n"),
            Err(PolarError::MalformedRow(4))
        );
        assert_eq!(
            parse_polar("Re = 1 e 5\nalpha CL CD Cm\n0 0 0.0 0\n"),
            Err(PolarError::MalformedRow(3))
        );
        assert_eq!(
            parse_polar("Re = 1 e 5\nalpha CL CD Cm\n0 0 0.01 0\n1 0 0.01 0\n"),
            Err(PolarError::TooFewPoints(2))
        );
        assert_eq!(parse_polar("Re = 1 e 5\n"), Err(PolarError::MissingColumn("alpha")));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let curve = parse_polar(SAMPLE).unwrap();
        let again = parse_polar(&write_polar(&curve, "E387")).unwrap();
        assert_eq!(curve, again);
    }

    #[test]
    fn flat_plate_reference_values() {
        assert_eq!(flat_plate_coeffs(0.0), Coefficients::new(0.0, 0.02, -0.0));
        let c = flat_plate_coeffs(core::f64::consts::FRAC_PI_2);
        assert!(c.cl.abs() < 1e-15);
        assert_relative_eq!(c.cd, 2.02, epsilon = 1e-15);
        assert_relative_eq!(c.cm, -0.5, epsilon = 1e-15);
        assert_relative_eq!(flat_plate_coeffs(-core::f64::consts::FRAC_PI_4).cl, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn surface_rejects_empty_and_duplicates() {
        assert_eq!(PolarSurface::new("x", vec![]), Err(PolarError::EmptySurface));
        let c = parse_polar(SAMPLE).unwrap();
        assert_eq!(
            PolarSurface::new("x", vec![c.clone(), c]),
            Err(PolarError::DuplicateReynolds(100000.0))
        );
    }

    #[test]
    fn edge_blend_reaches_flat_plate() {
        let c = parse_polar(SAMPLE).unwrap();
        let plate = FlatPlate::default();
        let hi = c.alpha_max();
        let at_edge = c.eval(hi, &plate);
        assert_eq!(at_edge, Coefficients::new(0.5010, 0.01030, -0.0830));
        let beyond = hi + BLEND_BAND;
        assert_eq!(c.eval(beyond, &plate), plate.coeffs(beyond));
        let mid = c.eval(hi + 0.5 * BLEND_BAND, &plate);
        let expect = at_edge.lerp(&plate.coeffs(hi + 0.5 * BLEND_BAND), 0.5);
        assert_relative_eq!(mid.cl, expect.cl, epsilon = 1e-15);
    }
}
