//! Wing parametrization, spanwise segmentation and mass properties.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::Matrix3;

use crate::frames::rot_y;
use crate::math::tan;
use crate::propulsion::ThrusterSpec;
use crate::Vec3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AirframeError {
    #[error("invalid wing spec: {0}")]
    InvalidSpec(&'static str),
    #[error("invalid mass properties: {0}")]
    InvalidMass(&'static str),
    #[error("total wing area is zero")]
    ZeroArea,
    #[error("thruster `{0}` references a segment that does not exist")]
    UnknownThrusterSegment(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Port,
    Starboard,
}

impl Side {
    /// Sign of the body y coordinate on this side.
    pub fn sign(self) -> f64 {
        match self {
            Side::Port => -1.0,
            Side::Starboard => 1.0,
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            Side::Port => Side::Starboard,
            Side::Starboard => Side::Port,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Port => "port",
            Side::Starboard => "starboard",
        }
    }
}

/// Planform of the wing. Angles in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct WingSpec {
    pub wingspan: f64,
    pub root_chord: f64,
    pub taper_ratio: f64,
    /// Quarter-chord sweep, positive swept back.
    pub sweep: f64,
    /// Positive raises the tips.
    pub dihedral: f64,
    /// Linear twist from root (0) to tip, positive nose up.
    pub twist: f64,
    pub segments_per_side: usize,
    pub airfoil_cruise: String,
    pub airfoil_hover: String,
    /// Chordwise position of the morphing hinge line relative to the root
    /// quarter chord, positive forward.
    pub hinge_x: f64,
}

impl Default for WingSpec {
    /// The first prototype: 0.70 m span, 160 mm root chord, taper 0.688,
    /// no sweep, dihedral or twist, eight segments per side.
    fn default() -> Self {
        Self {
            wingspan: 0.70,
            root_chord: 0.160,
            taper_ratio: 0.688,
            sweep: 0.0,
            dihedral: 0.0,
            twist: 0.0,
            segments_per_side: 8,
            airfoil_cruise: "E387".into(),
            airfoil_hover: "NACA0010".into(),
            hinge_x: 0.0,
        }
    }
}

impl WingSpec {
    pub fn validate(&self) -> Result<(), AirframeError> {
        let finite = [self.wingspan, self.root_chord, self.taper_ratio, self.sweep, self.dihedral, self.twist]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(AirframeError::InvalidSpec("non-finite parameter"));
        }
        if self.wingspan <= 0.0 {
            return Err(AirframeError::InvalidSpec("wingspan must be positive"));
        }
        if self.root_chord <= 0.0 {
            return Err(AirframeError::InvalidSpec("root chord must be positive"));
        }
        if !(self.taper_ratio > 0.0 && self.taper_ratio <= 1.0) {
            return Err(AirframeError::InvalidSpec("taper ratio must lie in (0, 1]"));
        }
        if self.segments_per_side == 0 {
            return Err(AirframeError::InvalidSpec("need at least one segment per side"));
        }
        Ok(())
    }

    pub fn half_span(&self) -> f64 {
        0.5 * self.wingspan
    }

    /// Chord at spanwise station `y` (either side).
    pub fn chord_at(&self, y: f64) -> f64 {
        self.root_chord * (1.0 - (1.0 - self.taper_ratio) * y.abs() / self.half_span())
    }

    /// Closed-form trapezoid area of both panels.
    pub fn trapezoid_area(&self) -> f64 {
        self.wingspan * self.root_chord * (1.0 + self.taper_ratio) / 2.0
    }
}

/// One spanwise strip.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentGeometry {
    pub side: Side,
    /// 1 at the root, `segments_per_side` at the tip.
    pub index: usize,
    pub span_width: f64,
    /// Chord at the strip midspan.
    pub chord: f64,
    pub area: f64,
    /// Geometric incidence from twist, added to the effective alpha.
    pub incidence: f64,
    /// Quarter-chord point relative to the centre of mass, body frame, at
    /// zero wing rotation.
    pub r_ac: Vec3,
    /// A point on the hinge line of this strip (hinge axis is body y).
    pub hinge: Vec3,
}

/// Splits each half wing into equal-width strips, port strips first, each
/// side ordered root to tip.
///
/// `cg_offset` is the centre-of-mass position in the wing reference frame
/// (origin on the root quarter chord); every returned vector is relative to
/// the centre of mass.
pub fn segment_wing(wing: &WingSpec, cg_offset: &Vec3) -> Result<Vec<SegmentGeometry>, AirframeError> {
    wing.validate()?;
    let n = wing.segments_per_side;
    let half = wing.half_span();
    let b_seg = half / n as f64;
    let mut segments = Vec::with_capacity(2 * n);
    for side in [Side::Port, Side::Starboard] {
        for i in 0..n {
            let y_abs = (i as f64 + 0.5) * b_seg;
            let chord = wing.chord_at(y_abs);
            let x_qc = -y_abs * tan(wing.sweep);
            let z = -y_abs * tan(wing.dihedral);
            let r_ac = Vec3::new(x_qc, side.sign() * y_abs, z) - cg_offset;
            let hinge = Vec3::new(wing.hinge_x, side.sign() * y_abs, z) - cg_offset;
            segments.push(SegmentGeometry {
                side,
                index: i + 1,
                span_width: b_seg,
                chord,
                area: chord * b_seg,
                incidence: wing.twist * y_abs / half,
                r_ac,
                hinge,
            });
        }
    }
    Ok(segments)
}

/// Mass, inertia about the centre of mass (body axes) and centre-of-mass
/// position in the wing reference frame.
#[derive(Debug, Clone, PartialEq)]
pub struct MassProperties {
    pub mass: f64,
    pub inertia: Matrix3<f64>,
    pub cg_offset: Vec3,
}

impl MassProperties {
    pub fn new(mass: f64, inertia: Matrix3<f64>, cg_offset: Vec3) -> Result<Self, AirframeError> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(AirframeError::InvalidMass("mass must be positive"));
        }
        if !inertia.iter().all(|v| v.is_finite()) || !cg_offset.iter().all(|v| v.is_finite()) {
            return Err(AirframeError::InvalidMass("non-finite entry"));
        }
        let asym = (inertia - inertia.transpose()).abs().max();
        if asym > 1e-12 * inertia.abs().max() {
            return Err(AirframeError::InvalidMass("inertia tensor is not symmetric"));
        }
        let eig = inertia.symmetric_eigenvalues();
        if eig.iter().any(|&l| !(l > 0.0)) {
            return Err(AirframeError::InvalidMass("inertia tensor is not positive definite"));
        }
        let slack = 1e-12 * eig.sum();
        let (a, b, c) = (eig[0], eig[1], eig[2]);
        if a + b < c - slack || a + c < b - slack || b + c < a - slack {
            return Err(AirframeError::InvalidMass("principal moments violate the triangle inequality"));
        }
        Ok(Self {
            mass,
            inertia,
            cg_offset,
        })
    }
}

/// Wing loading `m / A` in kg/m^2.
pub fn wing_loading_for_area(mass: f64, area: f64) -> Result<f64, AirframeError> {
    if !(area > 0.0) {
        return Err(AirframeError::ZeroArea);
    }
    Ok(mass / area)
}

/// Wing loading using the summed strip areas of `wing`.
pub fn wing_loading(mass: &MassProperties, wing: &WingSpec) -> Result<f64, AirframeError> {
    let segments = segment_wing(wing, &mass.cg_offset)?;
    wing_loading_for_area(mass.mass, total_area(&segments))
}

pub fn total_area(segments: &[SegmentGeometry]) -> f64 {
    segments.iter().map(|s| s.area).sum()
}

/// Point-mass (parallel-axis) inertia of `mass` at `r` about the origin.
pub fn parallel_axis(mass: f64, r: &Vec3) -> Matrix3<f64> {
    (Matrix3::identity() * r.dot(r) - r * r.transpose()) * mass
}

/// Inertia of a thin rectangular lamina in the body x-y plane, side lengths
/// `len_x` (chordwise) and `len_y` (spanwise), about the origin.
pub fn lamina_inertia(mass: f64, len_x: f64, len_y: f64, center: &Vec3) -> Matrix3<f64> {
    let own = Matrix3::from_diagonal(&Vec3::new(
        mass * len_y * len_y / 12.0,
        mass * len_x * len_x / 12.0,
        mass * (len_x * len_x + len_y * len_y) / 12.0,
    ));
    own + parallel_axis(mass, center)
}

/// Flat-plate inertia estimate: `wing_mass` spread over the strips in
/// proportion to area, the remainder a point mass at the centre of mass.
///
/// Each strip lamina is turned about its hinge line by the joint angle of
/// its side (`-eps_port` on port, `+eps_starboard` on starboard).
pub fn default_inertia(
    wing: &WingSpec,
    cg_offset: &Vec3,
    wing_mass: f64,
    eps_port: f64,
    eps_starboard: f64,
) -> Result<Matrix3<f64>, AirframeError> {
    let segments = segment_wing(wing, cg_offset)?;
    let area = total_area(&segments);
    let n = wing.segments_per_side;
    let mut inertia = Matrix3::zeros();
    // pair port/starboard strips so mirror terms cancel exactly
    for i in 0..n {
        let mut pair = Matrix3::zeros();
        for (seg, eps) in [(&segments[i], -eps_port), (&segments[n + i], eps_starboard)] {
            let m = wing_mass * seg.area / area;
            let rot = rot_y(eps);
            let own = lamina_inertia(m, seg.chord, seg.span_width, &Vec3::zeros());
            let center = seg.r_ac - Vec3::new(0.25 * seg.chord, 0.0, 0.0);
            let center = seg.hinge + rot * (center - seg.hinge);
            pair += rot * own * rot.transpose() + parallel_axis(m, &center);
        }
        inertia += pair;
    }
    Ok(inertia)
}

/// Where the inertia tensor used in a run comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InertiaModel {
    /// `MassProperties::inertia` as given.
    Given,
    /// [`default_inertia`] re-evaluated at the joint angles a run starts
    /// with; `MassProperties::inertia` holds the zero-joint tensor.
    Laminae { wing_mass: f64 },
}

/// Fraction of the vehicle mass carried by the wing panels when the inertia
/// is estimated rather than given.
pub const DEFAULT_WING_MASS_FRACTION: f64 = 0.35;

/// Everything geometric about the vehicle: wing strips, mass and thrusters.
#[derive(Debug, Clone)]
pub struct Airframe {
    pub wing: WingSpec,
    pub mass: MassProperties,
    pub segments: Vec<SegmentGeometry>,
    pub thrusters: Vec<ThrusterSpec>,
    pub inertia_model: InertiaModel,
}

impl Airframe {
    /// Builds an airframe. With `thrusters = None` one thruster is placed on
    /// the outermost strip of each side.
    pub fn new(
        wing: WingSpec,
        mass: MassProperties,
        thrusters: Option<Vec<ThrusterSpec>>,
        default_max_thrust: f64,
    ) -> Result<Self, AirframeError> {
        let segments = segment_wing(&wing, &mass.cg_offset)?;
        let thrusters = match thrusters {
            Some(t) => t,
            None => tip_thrusters(&segments, wing.segments_per_side, default_max_thrust),
        };
        for t in &thrusters {
            if t.segment == 0 || t.segment > wing.segments_per_side {
                return Err(AirframeError::UnknownThrusterSegment(t.id.clone()));
            }
        }
        Ok(Self {
            wing,
            mass,
            segments,
            thrusters,
            inertia_model: InertiaModel::Given,
        })
    }

    /// Builds an airframe whose inertia is the flat-plate estimate with
    /// `wing_mass` on the wing panels.
    pub fn with_estimated_inertia(
        wing: WingSpec,
        mass: f64,
        cg_offset: Vec3,
        wing_mass: f64,
        thrusters: Option<Vec<ThrusterSpec>>,
        default_max_thrust: f64,
    ) -> Result<Self, AirframeError> {
        if !(wing_mass >= 0.0 && wing_mass <= mass) {
            return Err(AirframeError::InvalidMass("wing mass must lie in [0, mass]"));
        }
        let inertia = default_inertia(&wing, &cg_offset, wing_mass, 0.0, 0.0)?;
        let props = MassProperties::new(mass, inertia, cg_offset)?;
        let mut a = Self::new(wing, props, thrusters, default_max_thrust)?;
        a.inertia_model = InertiaModel::Laminae { wing_mass };
        Ok(a)
    }

    /// The first prototype: 0.45 kg, flat-plate inertia estimate, tip
    /// thrusters rated at 1 N.
    pub fn prototype() -> Self {
        let mass = 0.450;
        Self::with_estimated_inertia(
            WingSpec::default(),
            mass,
            Vec3::zeros(),
            DEFAULT_WING_MASS_FRACTION * mass,
            None,
            1.0,
        )
        .expect("default airframe is valid")
    }

    /// Inertia tensor for a run that starts with the given joint angles.
    pub fn inertia_at(&self, eps_port: f64, eps_starboard: f64) -> Result<Matrix3<f64>, AirframeError> {
        match self.inertia_model {
            InertiaModel::Given => Ok(self.mass.inertia),
            InertiaModel::Laminae { wing_mass } => {
                default_inertia(&self.wing, &self.mass.cg_offset, wing_mass, eps_port, eps_starboard)
            }
        }
    }

    pub fn total_area(&self) -> f64 {
        total_area(&self.segments)
    }

    pub fn wing_loading(&self) -> Result<f64, AirframeError> {
        wing_loading_for_area(self.mass.mass, self.total_area())
    }

    pub fn segment(&self, side: Side, index: usize) -> Option<&SegmentGeometry> {
        self.segments.iter().find(|s| s.side == side && s.index == index)
    }

    /// Same airframe with a different strip count (thrusters stay on the
    /// outermost strip when they were placed there by default).
    pub fn with_segments(&self, segments_per_side: usize) -> Result<Self, AirframeError> {
        let mut wing = self.wing.clone();
        let old = wing.segments_per_side;
        wing.segments_per_side = segments_per_side;
        let segs = segment_wing(&wing, &self.mass.cg_offset)?;
        let thrusters = self
            .thrusters
            .iter()
            .map(|t| {
                let segment = if t.segment == old { segments_per_side } else { t.segment };
                let mut t = t.clone();
                if let Some(s) = segs.iter().find(|s| s.side == t.side && s.index == segment) {
                    t.segment = segment;
                    t.r_thrust = s.r_ac;
                    t.hinge = s.hinge;
                }
                t
            })
            .collect();
        let mut a = Self::new(wing, self.mass.clone(), Some(thrusters), 0.0)?;
        a.inertia_model = self.inertia_model;
        if let InertiaModel::Laminae { wing_mass } = a.inertia_model {
            a.mass.inertia = default_inertia(&a.wing, &a.mass.cg_offset, wing_mass, 0.0, 0.0)?;
        }
        Ok(a)
    }
}

fn tip_thrusters(segments: &[SegmentGeometry], n: usize, max_thrust: f64) -> Vec<ThrusterSpec> {
    segments
        .iter()
        .filter(|s| s.index == n)
        .map(|s| ThrusterSpec {
            id: s.side.as_str().into(),
            side: s.side,
            segment: s.index,
            r_thrust: s.r_ac,
            hinge: s.hinge,
            max_thrust,
        })
        .collect()
}
