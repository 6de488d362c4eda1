//! Jones-calculus evaluation of compiled circuits, time sweeps and shot noise.

mod csv;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::centrality::{CentralityReport, Method, DEFAULT_TIE_TOLERANCE};
use crate::compiler::{CircuitIR, Plate, Stage};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, ONE, ZERO};
use crate::optics::{hwp, qwp, Jones};
use crate::par::{self, Execution};

pub use csv::format_significant;

/// Amplitudes over `(1H, 1V, 2H, 2V)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuquartState {
    pub amplitudes: [Complex64; 4],
}

impl QuquartState {
    pub fn basis(mode: usize) -> Self {
        let mut amplitudes = [ZERO; 4];
        amplitudes[mode] = ONE;
        Self { amplitudes }
    }

    /// Places vertex amplitudes on the given modes.
    pub fn from_vertices(values: &[Complex64], modes: &[usize]) -> Result<Self> {
        if values.len() != modes.len() {
            return Err(Error::DimensionMismatch {
                expected: modes.len(),
                got: values.len(),
            });
        }
        let mut amplitudes = [ZERO; 4];
        for (&v, &m) in values.iter().zip(modes) {
            amplitudes[m] = v;
        }
        Ok(Self { amplitudes })
    }

    /// Equal superposition of the circuit's vertex modes with unit norm.
    pub fn uniform(ir: &CircuitIR) -> Self {
        let a = ONE.scale(1.0 / (ir.vertices as f64).sqrt());
        Self::from_vertices(&vec![a; ir.vertices], &ir.detectors).expect("lengths agree")
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    fn to_vector(self) -> CVector {
        CVector::from_column_slice(&self.amplitudes)
    }
}

fn embed(m: &mut CMatrix, path: usize, block: &Jones) {
    m.view_mut((2 * path, 2 * path), (2, 2)).copy_from(block);
}

/// The 4×4 operator of a single stage at evolution time `t`.
pub fn element_matrix(stage: &Stage, t: f64) -> Result<CMatrix> {
    let mut m = CMatrix::identity(4, 4);
    match stage {
        Stage::Routing { perm } => {
            if perm.len() != 4 || perm.iter().any(|&p| p >= 4) {
                return Err(Error::InvalidCircuit(format!("bad routing {perm:?}")));
            }
            m.fill(ZERO);
            for (i, &p) in perm.iter().enumerate() {
                m[(i, p)] = ONE;
            }
        }
        Stage::Waveplate { path, plate, angle } => {
            if *path > 1 {
                return Err(Error::InvalidCircuit(format!(
                    "path {} does not exist",
                    path + 1
                )));
            }
            let j = match plate {
                Plate::Half => hwp(*angle),
                Plate::Quarter => qwp(*angle),
            };
            embed(&mut m, *path, &j);
        }
        Stage::BlockUnitary { paths } => {
            for (p, triple) in paths.iter().enumerate() {
                embed(&mut m, p, &triple.target());
            }
        }
        Stage::Attenuator(a) => {
            if a.angles.len() != 4 {
                return Err(Error::InvalidCircuit("attenuator needs 4 angles".into()));
            }
            for (k, d) in a.transmissions().into_iter().enumerate() {
                m[(k, k)] = ONE.scale(d);
            }
        }
        Stage::Phase(p) => {
            if p.coeffs.len() != 4 {
                return Err(Error::InvalidCircuit(
                    "phase stage needs 4 coefficients".into(),
                ));
            }
            for (k, z) in p.phases(t).into_iter().enumerate() {
                m[(k, k)] = z;
            }
        }
        Stage::Blocker { modes } => {
            for &k in modes {
                if k >= 4 {
                    return Err(Error::InvalidCircuit(format!("mode {k} out of range")));
                }
                m[(k, k)] = ZERO;
            }
        }
    }
    Ok(m)
}

/// Runs a state through every stage in order.
pub fn simulate(ir: &CircuitIR, psi_in: &QuquartState, t: f64) -> Result<QuquartState> {
    let mut v = psi_in.to_vector();
    for entry in &ir.stages {
        v = element_matrix(&entry.stage, t)? * v;
    }
    let mut amplitudes = [ZERO; 4];
    amplitudes.copy_from_slice(v.as_slice());
    Ok(QuquartState { amplitudes })
}

/// End-to-end 4×4 map, one simulated basis state per column.
pub fn transfer_matrix(ir: &CircuitIR, t: f64) -> Result<CMatrix> {
    let mut m = CMatrix::zeros(4, 4);
    for k in 0..4 {
        let out = simulate(ir, &QuquartState::basis(k), t)?;
        m.set_column(k, &CVector::from_column_slice(&out.amplitudes));
    }
    Ok(m)
}

/// Product of all stage matrices; equals [`transfer_matrix`].
pub fn stage_product(ir: &CircuitIR, t: f64) -> Result<CMatrix> {
    ir.stages
        .iter()
        .try_fold(CMatrix::identity(4, 4), |acc, e| {
            Ok(element_matrix(&e.stage, t)? * acc)
        })
}

/// Detector probabilities over a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub t: Vec<f64>,
    /// One row per grid point, one column per detector.
    pub probabilities: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<Vec<u64>>>,
    /// Mode read by each detector; detector `k` reports vertex `k`.
    pub detectors: Vec<usize>,
    pub total_scale: f64,
}

impl SweepTable {
    /// Grid-averaged probabilities normalized to one. Matches the exact time
    /// average when the grid covers whole periods uniformly.
    pub fn centrality(&self) -> Result<CentralityReport> {
        let rows = self.probabilities.len() as f64;
        let mean: Vec<f64> = (0..self.detectors.len())
            .map(|d| self.probabilities.iter().map(|r| r[d]).sum::<f64>() / rows)
            .collect();
        CentralityReport::from_scores(Method::Ctqw, &mean, DEFAULT_TIE_TOLERANCE)
    }

    /// Probabilities of row `i` rescaled by `total_scale²`, i.e. the
    /// occupation probabilities of the un-attenuated walk.
    pub fn vertex_probabilities(&self, i: usize) -> Vec<f64> {
        let s2 = self.total_scale * self.total_scale;
        self.probabilities[i].iter().map(|p| p * s2).collect()
    }

    /// Adds Poisson counts with mean `mean_total·p` per cell.
    pub fn with_counts<R: Rng + ?Sized>(mut self, mean_total: f64, rng: &mut R) -> Result<Self> {
        let counts = self
            .probabilities
            .iter()
            .map(|row| sample_counts(row, mean_total, rng))
            .collect::<Result<Vec<_>>>()?;
        self.counts = Some(counts);
        Ok(self)
    }

    /// `t,det1,...[,count1,...]` with 12 significant digits.
    pub fn to_csv(&self) -> String {
        csv::render(self)
    }
}

/// Simulates `psi_in` at every grid point.
pub fn sweep(
    ir: &CircuitIR,
    psi_in: &QuquartState,
    grid: &[f64],
    exec: Execution,
) -> Result<SweepTable> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("time grid is empty".into()));
    }
    ir.validate()?;
    let rows = par::map_collect(grid, exec, |&t| {
        simulate(ir, psi_in, t).map(|out| {
            ir.detectors
                .iter()
                .map(|&d| out.amplitudes[d].norm_sqr())
                .collect::<Vec<f64>>()
        })
    });
    Ok(SweepTable {
        t: grid.to_vec(),
        probabilities: rows.into_iter().collect::<Result<_>>()?,
        counts: None,
        detectors: ir.detectors.clone(),
        total_scale: ir.total_scale,
    })
}

/// `n` equally spaced points on `[start, stop)`.
pub fn time_grid(start: f64, stop: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(Error::InvalidArgument(
            "grid needs finite bounds and at least one point".into(),
        ));
    }
    if n > 1 && stop <= start {
        return Err(Error::InvalidArgument("grid stop must exceed start".into()));
    }
    let step = (stop - start) / n as f64;
    Ok((0..n).map(|k| start + k as f64 * step).collect())
}

/// Independent Poisson draws with means `mean_total·p_j`.
pub fn sample_counts<R: Rng + ?Sized>(
    probabilities: &[f64],
    mean_total: f64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    if !(mean_total >= 0.0 && mean_total.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "mean total {mean_total} must be non-negative"
        )));
    }
    probabilities
        .iter()
        .enumerate()
        .map(|(index, &p)| {
            if !(0.0..=1.0 + 1e-9).contains(&p) {
                return Err(Error::OutOfRange { index, value: p });
            }
            let mean = mean_total * p.min(1.0);
            if mean == 0.0 {
                return Ok(0);
            }
            let dist = Poisson::new(mean).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            Ok(dist.sample(rng) as u64)
        })
        .collect()
}
