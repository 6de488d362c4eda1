//! Jones matrices in the (H, V) basis.
//!
//! `HWP(θ) = [[cos2θ, sin2θ], [sin2θ, −cos2θ]]` and
//! `QWP(θ) = R(θ)·diag(1, i)·R(−θ)` with the passive rotation
//! `R(θ) = [[cosθ, −sinθ], [sinθ, cosθ]]`. Angles are fast-axis orientations
//! in radians and every plate is π-periodic in its angle.

use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::Matrix2;
use num_complex::Complex64;

pub type Jones = Matrix2<Complex64>;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn rotation(theta: f64) -> Jones {
    let (s, co) = theta.sin_cos();
    Jones::new(c(co), c(-s), c(s), c(co))
}

pub fn hwp(theta: f64) -> Jones {
    let (s, co) = (2.0 * theta).sin_cos();
    Jones::new(c(co), c(s), c(s), c(-co))
}

pub fn qwp(theta: f64) -> Jones {
    let retarder = Jones::new(c(1.0), c(0.0), c(0.0), Complex64::new(0.0, 1.0));
    rotation(theta) * retarder * rotation(-theta)
}

/// Wraps a plate angle into `[0, π)`.
pub fn canonical_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(PI);
    // rem_euclid can round up to exactly π
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// Relative H/V phase per radian of HWP rotation in the
/// `QWP(π/4)·HWP(θ)·QWP(π/4)` phase shifter.
///
/// The shifter is diagonal; its V entry runs ahead of the H entry by
/// `rate·θ` on top of a fixed sign. Read off the conventions above rather
/// than hard-coded.
pub fn phase_rate_per_hwp_radian() -> f64 {
    let theta = 0.1;
    let ratio = |m: Jones| m[(1, 1)] / m[(0, 0)];
    (ratio(phase_shifter(theta)) / ratio(phase_shifter(0.0))).arg() / theta
}

/// `QWP(π/4)·HWP(θ)·QWP(π/4) = diag(i·e^{−2iθ}, −i·e^{2iθ})`.
pub fn phase_shifter(theta: f64) -> Jones {
    qwp(FRAC_PI_4) * hwp(theta) * qwp(FRAC_PI_4)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Jones, b: &Jones, tol: f64) -> bool {
        (a - b).iter().all(|z| z.norm() < tol)
    }

    #[test]
    fn plates_are_unitary() {
        for k in 0..16 {
            let t = 0.21 * k as f64;
            for m in [hwp(t), qwp(t)] {
                assert!(close(&(m.adjoint() * m), &Jones::identity(), 1e-14));
            }
        }
    }

    #[test]
    fn hwp_at_zero_flips_v() {
        assert!(close(
            &hwp(0.0),
            &Jones::new(c(1.), c(0.), c(0.), c(-1.)),
            1e-15
        ));
    }

    #[test]
    fn two_hwps_make_a_rotation() {
        let (a, b) = (0.4, -1.1);
        assert!(close(&(hwp(a) * hwp(b)), &rotation(2.0 * (a - b)), 1e-14));
    }

    #[test]
    fn two_qwps_make_an_hwp() {
        let t = 0.37;
        assert!(close(&(qwp(t) * qwp(t)), &hwp(t), 1e-14));
    }

    #[test]
    fn phase_shifter_is_diagonal_with_rate_four() {
        let t = 0.3;
        let m = phase_shifter(t);
        let i = Complex64::new(0.0, 1.0);
        let want = Jones::new(
            i * Complex64::from_polar(1.0, -2.0 * t),
            c(0.0),
            c(0.0),
            -i * Complex64::from_polar(1.0, 2.0 * t),
        );
        assert!(close(&m, &want, 1e-14));
        assert!((phase_rate_per_hwp_radian() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn angles_wrap() {
        assert_eq!(canonical_angle(PI), 0.0);
        assert!((canonical_angle(-0.25) - (PI - 0.25)).abs() < 1e-15);
        assert!((canonical_angle(0.5 + 3.0 * PI) - 0.5).abs() < 1e-12);
    }
}
