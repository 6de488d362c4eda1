use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ir::one_based;
use crate::error::{Error, Result};
use crate::optics;

/// Per-mode HWP angles in front of a polarizer: mode `k` transmits the
/// amplitude factor `sin 2θ_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttenuationStage {
    pub angles: Vec<f64>,
    /// The factor divided out of the target diagonal.
    pub lambda_scale: f64,
}

impl AttenuationStage {
    pub fn transmissions(&self) -> Vec<f64> {
        self.angles.iter().map(|t| (2.0 * t).sin()).collect()
    }
}

/// `θ_k = ½·asin(d_k)` for transmissions `d_k ∈ [0, 1]`.
pub fn synthesize_attenuation(d: &[f64], lambda_scale: f64) -> Result<AttenuationStage> {
    if !(lambda_scale > 0.0 && lambda_scale.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "scale {lambda_scale} must be positive"
        )));
    }
    let mut angles = Vec::with_capacity(d.len());
    for (index, &value) in d.iter().enumerate() {
        if !(-1e-12..=1.0 + 1e-12).contains(&value) {
            return Err(Error::OutOfRange { index, value });
        }
        angles.push(0.5 * value.clamp(0.0, 1.0).asin());
    }
    Ok(AttenuationStage {
        angles,
        lambda_scale,
    })
}

/// Time slope of the HWP between two QWPs at 45° that produces the relative
/// H/V phase of one path. A fixed HWP at 0 after the triple removes the
/// constant sign of the shifter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HwpSlope {
    #[serde(with = "one_based")]
    pub path: usize,
    /// HWP angle per unit of evolution time, in radians.
    pub slope: f64,
}

/// `diag(e^{−i(c_k − offset)t})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseStage {
    pub coeffs: Vec<f64>,
    pub offset: f64,
    #[serde(default)]
    pub hwp_slopes: Vec<HwpSlope>,
    /// Rate of the relative phase between the two paths, per unit time.
    #[serde(default)]
    pub path_phase_rate: f64,
}

impl PhaseStage {
    pub fn phases(&self, t: f64) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|c| Complex64::from_polar(1.0, -(c - self.offset) * t))
            .collect()
    }

    /// Physical HWP angle of every path at time `t`, wrapped to `[0, π)`.
    pub fn hwp_angles(&self, t: f64) -> Vec<(usize, f64)> {
        self.hwp_slopes
            .iter()
            .map(|s| (s.path, optics::canonical_angle(s.slope * t)))
            .collect()
    }
}

/// Phase stage for eigenvalues `lambda`, centered on the midrange so that
/// the stored coefficients are symmetric about zero.
pub fn synthesize_phase_stage(lambda: &[f64]) -> PhaseStage {
    let (lo, hi) = lambda
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let offset = if lambda.is_empty() {
        0.0
    } else {
        (lo + hi) / 2.0
    };

    let rate = optics::phase_rate_per_hwp_radian();
    let hwp_slopes = (0..lambda.len() / 2)
        .map(|p| HwpSlope {
            path: p,
            slope: (lambda[2 * p] - lambda[2 * p + 1]) / rate,
        })
        .collect();
    let path_phase_rate = if lambda.len() == 4 {
        (lambda[0] + lambda[1] - lambda[2] - lambda[3]) / 2.0
    } else {
        0.0
    };

    PhaseStage {
        coeffs: lambda.to_vec(),
        offset,
        hwp_slopes,
        path_phase_rate,
    }
}
