pub(crate) use core::f64::consts::PI;
pub(crate) use libm::{atan2, cos, log, sin, sqrt, tan};

pub(crate) const DEG: f64 = PI / 180.0;

/// Wraps an angle into `[-pi, pi]`.
pub(crate) fn wrap_pi(angle: f64) -> f64 {
    if (-PI..=PI).contains(&angle) {
        return angle;
    }
    let two_pi = 2.0 * PI;
    let mut a = libm::fmod(angle + PI, two_pi);
    if a < 0.0 {
        a += two_pi;
    }
    a - PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_keeps_in_range_values() {
        assert_eq!(wrap_pi(0.3), 0.3);
        assert_eq!(wrap_pi(PI), PI);
        assert_eq!(wrap_pi(-PI), -PI);
    }

    #[test]
    fn wrap_folds_out_of_range() {
        assert!((wrap_pi(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_pi(-3.0 * PI / 2.0) - PI / 2.0).abs() < 1e-15);
        assert!((wrap_pi(7.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
    }
}
