//! Rotation helpers shared by the aerodynamic, propulsion and dynamics code.

use nalgebra::{Matrix3, Quaternion, UnitQuaternion, Vector3};

use crate::math::{cos, sin, PI};
use crate::Vec3;

/// Rotation about the body y axis by `angle` (right-handed, so a positive
/// angle pitches the x axis toward -z, i.e. nose up in a z-down frame).
pub fn rot_y(angle: f64) -> Matrix3<f64> {
    let (s, c) = (sin(angle), cos(angle));
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

/// Wind-to-body rotation for a strip whose relative wind sits at `alpha_kin`
/// in the body x-z plane.
///
/// Rows are `[cos a, 0, -sin a]`, `[0, 1, 0]`, `[sin a, 0, cos a]`, which maps
/// the wind-frame load `(-D, 0, -L)` onto the body axes.
pub fn wind_to_body(alpha_kin: f64) -> Matrix3<f64> {
    let (s, c) = (sin(alpha_kin), cos(alpha_kin));
    Matrix3::new(c, 0.0, -s, 0.0, 1.0, 0.0, s, 0.0, c)
}

/// Rotation taking local north-east-down vectors into the z-up world frame
/// (half turn about x).
pub fn ned_to_world() -> UnitQuaternion<f64> {
    UnitQuaternion::from_quaternion(Quaternion::new(0.0, 1.0, 0.0, 0.0))
}

/// Body-to-world attitude from ZYX Euler angles measured against the local
/// north-east-down frame.
pub fn attitude_from_euler(phi: f64, theta: f64, psi: f64) -> UnitQuaternion<f64> {
    ned_to_world() * UnitQuaternion::from_euler_angles(phi, theta, psi)
}

/// ZYX Euler angles `(phi, theta, psi)` of a body-to-world attitude.
pub fn euler_angles(attitude: &UnitQuaternion<f64>) -> (f64, f64, f64) {
    (ned_to_world().inverse() * attitude).euler_angles()
}

/// Level-flight attitude: body x along world x, body z along world -z.
pub fn level_attitude() -> UnitQuaternion<f64> {
    ned_to_world()
}

/// Hover attitude: body x along world +z (nose straight up).
pub fn hover_attitude() -> UnitQuaternion<f64> {
    attitude_from_euler(0.0, PI / 2.0, 0.0)
}

/// Reflection through the x-z plane, used for mirror experiments.
pub fn mirror_vector(v: &Vec3) -> Vec3 {
    Vector3::new(v.x, -v.y, v.z)
}

/// Angular velocity is a pseudovector: mirroring through x-z keeps the y
/// component and flips x and z.
pub fn mirror_pseudovector(w: &Vec3) -> Vec3 {
    Vector3::new(-w.x, w.y, -w.z)
}

/// Mirror image of an attitude when both the world and body frames are
/// reflected through their x-z planes (`R' = M R M`).
pub fn mirror_attitude(q: &UnitQuaternion<f64>) -> UnitQuaternion<f64> {
    let q = q.quaternion();
    UnitQuaternion::from_quaternion(Quaternion::new(q.w, -q.i, q.j, -q.k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn level_attitude_maps_body_down_to_world_down() {
        let q = level_attitude();
        assert_relative_eq!(q * Vec3::z(), -Vec3::z(), epsilon = 1e-15);
        assert_relative_eq!(q * Vec3::x(), Vec3::x(), epsilon = 1e-15);
        let (phi, theta, psi) = euler_angles(&q);
        assert_eq!((phi, theta, psi), (0.0, 0.0, 0.0));
    }

    #[test]
    fn hover_attitude_points_nose_up() {
        let q = hover_attitude();
        assert_relative_eq!(q * Vec3::x(), Vec3::z(), epsilon = 1e-15);
    }

    #[test]
    fn euler_round_trip_away_from_gimbal_lock() {
        let q = attitude_from_euler(0.2, -0.3, 1.1);
        let (phi, theta, psi) = euler_angles(&q);
        assert_relative_eq!(phi, 0.2, epsilon = 1e-12);
        assert_relative_eq!(theta, -0.3, epsilon = 1e-12);
        assert_relative_eq!(psi, 1.1, epsilon = 1e-12);
    }

    #[test]
    fn mirrored_attitude_negates_roll_and_yaw() {
        let q = attitude_from_euler(0.2, -0.3, 1.1);
        let (phi, theta, psi) = euler_angles(&mirror_attitude(&q));
        assert_relative_eq!(phi, -0.2, epsilon = 1e-12);
        assert_relative_eq!(theta, -0.3, epsilon = 1e-12);
        assert_relative_eq!(psi, -1.1, epsilon = 1e-12);
    }

    #[test]
    fn mirrored_attitude_is_reflection_conjugate() {
        let q = attitude_from_euler(0.4, 0.1, -0.7);
        let m = Matrix3::from_diagonal(&Vec3::new(1.0, -1.0, 1.0));
        let expected = m * q.to_rotation_matrix().into_inner() * m;
        let got = mirror_attitude(&q).to_rotation_matrix().into_inner();
        assert_relative_eq!(got, expected, epsilon = 1e-14);
    }

    #[test]
    fn wind_to_body_is_orthonormal() {
        for i in 0..100 {
            let a = -3.0 + 0.06 * i as f64;
            let r = wind_to_body(a);
            assert_relative_eq!(r.transpose() * r, Matrix3::identity(), epsilon = 1e-14);
        }
    }
}
