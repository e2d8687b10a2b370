//! Segmented strip-theory flight dynamics for a metamorphic (morphing-wing) UAV.
//!
//! The crate is `no_std` + `alloc`: polar tables are parsed from `&str`, the
//! rigid-body integrator and all load models are pure functions, and
//! telemetry leaves through the [`scenario::TelemetrySink`] trait. File IO,
//! configuration and the command line live in the `metamorph` crate.
//!
//! Frame conventions used throughout:
//!
//! * body frame: x forward (nose), y starboard, z down;
//! * world frame: z up, gravity `(0, 0, -g)`;
//! * attitude is stored as a unit quaternion rotating body vectors into the
//!   world frame. Euler angles (ZYX) are reported relative to a local
//!   north-east-down frame whose x axis coincides with world x, so level
//!   cruise reads `phi = theta = psi = 0`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod aero;
pub mod airframe;
pub mod dynamics;
pub mod environment;
pub mod frames;
pub mod polar;
pub mod propulsion;
pub mod scenario;
pub mod trim;

mod math;

pub use aero::{ActuationInput, AeroModel, Airfoils, LoadSet};
pub use airframe::{Airframe, MassProperties, SegmentGeometry, Side, WingSpec};
pub use dynamics::RigidBodyState;
pub use environment::{ContactModel, Environment};
pub use polar::{Coefficients, PolarCurve, PolarSurface};
pub use scenario::{RunOptions, Scenario, Schedule, Simulator};

/// 3-vector used for every position, velocity, force and moment.
pub type Vec3 = nalgebra::Vector3<f64>;
