//! Air properties, gravity and the ground contact constants.

use crate::Vec3;

/// Penalty ground contact acting at the centre of mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactModel {
    /// Centre-of-mass height at which contact starts, m.
    pub height: f64,
    /// Normal stiffness, N/m.
    pub stiffness: f64,
    /// Normal damping, N s/m.
    pub damping: f64,
    /// Horizontal velocity damping while in contact, N s/m.
    pub horizontal_damping: f64,
}

impl Default for ContactModel {
    fn default() -> Self {
        Self {
            height: 0.05,
            stiffness: 500.0,
            damping: 50.0,
            horizontal_damping: 5.0,
        }
    }
}

impl ContactModel {
    /// Centre-of-mass height at which the spring carries `weight`.
    pub fn rest_height(&self, weight: f64) -> f64 {
        self.height - weight / self.stiffness
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    /// Air density, kg/m^3.
    pub rho: f64,
    /// Dynamic viscosity, Pa s.
    pub mu: f64,
    /// Gravitational acceleration, m/s^2.
    pub gravity: f64,
    /// Steady wind, world frame, m/s.
    pub wind: Vec3,
    pub contact: ContactModel,
}

impl Default for Environment {
    fn default() -> Self {
        Self {
            rho: 1.225,
            mu: 1.7894e-5,
            gravity: 9.81,
            wind: Vec3::zeros(),
            contact: ContactModel::default(),
        }
    }
}
