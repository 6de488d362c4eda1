use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{canonical_angle, hwp, qwp, Jones};

/// Plate orientations with `QWP(alpha)·HWP(beta)·QWP(gamma) = e^{i·global_phase}·target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveplateTriple {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub global_phase: f64,
}

impl WaveplateTriple {
    /// The product of the three plates.
    pub fn plates(&self) -> Jones {
        qwp(self.alpha) * hwp(self.beta) * qwp(self.gamma)
    }

    /// The realized 2×2 unitary, `e^{−i·global_phase}` times the plates.
    pub fn target(&self) -> Jones {
        self.plates() * Complex64::from_polar(1.0, -self.global_phase)
    }
}

/// Solves for the three plate angles realizing a 2×2 unitary.
///
/// With `ψ = arg(det T)/2`, `W = e^{−iψ}T` is special unitary and factors as
/// `R(a)·diag(e^{iφ}, e^{−iφ})·R(b)`. The plates give
/// `QWP(α)·HWP(β)·QWP(γ) = R(α + π/4)·diag(e^{iμ}, e^{−iμ})·R(−γ − π/4)`
/// with `μ = 2β − α − γ`, so the angles follow by matching terms.
pub fn solve_waveplate_triple(target: &Jones) -> Result<WaveplateTriple> {
    if target
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::NonFinite);
    }
    let defect = (target.adjoint() * target - Jones::identity()).norm();
    if defect > 1e-10 {
        return Err(Error::NotUnitary(defect));
    }

    let det = target[(0, 0)] * target[(1, 1)] - target[(0, 1)] * target[(1, 0)];
    let psi = det.arg() / 2.0;
    let w = target * Complex64::from_polar(1.0, -psi);
    let (w00, w01) = (w[(0, 0)], w[(0, 1)]);

    let cos_phi = w00.re.hypot(w01.re);
    let sin_phi = w00.im.hypot(w01.im);
    let phi = sin_phi.atan2(cos_phi);
    let sum = (-w01.re).atan2(w00.re);
    let diff = w01.im.atan2(w00.im);
    let a = (sum + diff) / 2.0;
    let b = (sum - diff) / 2.0;

    let alpha = a - FRAC_PI_4;
    let gamma = -b - FRAC_PI_4;
    let beta = (phi + alpha + gamma) / 2.0;
    let triple = WaveplateTriple {
        alpha: canonical_angle(alpha),
        beta: canonical_angle(beta),
        gamma: canonical_angle(gamma),
        global_phase: -psi,
    };

    let err = (triple.target() - target).norm();
    if err > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "wave-plate solution misses the target by {err:.3e}"
        )));
    }
    Ok(triple)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_unitary;
    use crate::optics::rotation;
    use nalgebra::Matrix2;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    /// `R(a)·diag(e^{iφ}, e^{−iφ})·R(b)`, the special-unitary normal form.
    fn normal_form(a: f64, phi: f64, b: f64) -> Jones {
        let d = Jones::new(
            Complex64::from_polar(1.0, phi),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(1.0, -phi),
        );
        rotation(a) * d * rotation(b)
    }

    fn jones(m: &crate::linalg::CMatrix) -> Jones {
        Matrix2::from_fn(|i, j| m[(i, j)])
    }

    fn check(target: &Jones) -> WaveplateTriple {
        let t = solve_waveplate_triple(target).unwrap();
        let back = t.plates() * Complex64::from_polar(1.0, -t.global_phase);
        assert!((back - target).norm() < 1e-10);
        for angle in [t.alpha, t.beta, t.gamma] {
            assert!((0.0..PI).contains(&angle));
        }
        t
    }

    #[test]
    fn identity() {
        check(&Jones::identity());
    }

    #[test]
    fn plain_half_wave_plate() {
        for beta in [0.0, 0.3, 1.0, 2.5] {
            check(&hwp(beta));
        }
    }

    #[test]
    fn parameterized_two_mode_unitary() {
        // [[e^{iφ}cosε, e^{iξ}sinε], [e^{−iξ}sinε, −e^{−iφ}cosε]]
        let (phi, xi, eps) = (0.0f64, 0.0f64, FRAC_PI_4);
        let target = Jones::new(
            Complex64::from_polar(eps.cos(), phi),
            Complex64::from_polar(eps.sin(), xi),
            Complex64::from_polar(eps.sin(), -xi),
            -Complex64::from_polar(eps.cos(), -phi),
        );
        check(&target);
    }

    #[test]
    fn normal_form_matches_plates() {
        let (a, phi, b) = (0.4, 0.7, -1.3);
        let alpha = a - FRAC_PI_4;
        let gamma = -b - FRAC_PI_4;
        let beta = (phi + alpha + gamma) / 2.0;
        let plates = qwp(alpha) * hwp(beta) * qwp(gamma);
        assert!((plates - normal_form(a, phi, b)).norm() < 1e-14);
    }

    #[test]
    fn real_rotations_and_phase_shifters() {
        for k in 0..24 {
            let t = 0.29 * k as f64;
            check(&rotation(t).map(|z| z));
            check(&crate::optics::phase_shifter(t));
            check(&qwp(t));
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let m = Jones::identity() * Complex64::new(0.5, 0.0);
        assert!(matches!(
            solve_waveplate_triple(&m),
            Err(Error::NotUnitary(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn haar_targets(seed in any::<u64>()) {
            let u = jones(&haar_unitary(2, &mut ChaCha8Rng::seed_from_u64(seed)));
            let t = solve_waveplate_triple(&u).unwrap();
            prop_assert!((t.target() - u).norm() < 1e-10);
        }
    }
}
