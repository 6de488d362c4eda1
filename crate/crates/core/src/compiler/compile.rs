use serde::{Deserialize, Serialize};

use super::csd::{block_diag, csd4};
use super::expand::{expand_dimension, ExpansionMode};
use super::ir::{CircuitIR, Plate, Provenance, Stage, StageEntry};
use super::peephole::peephole;
use super::svd::optical_factors;
use super::synth::{synthesize_attenuation, synthesize_phase_stage};
use super::waveplate::solve_waveplate_triple;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::optics::{canonical_angle, Jones};
use crate::spectral::SpectralDecomposition;

/// Unitary factors this close to the identity (up to phase) are dropped.
const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionChoice {
    /// Fixture embeddings when both `P` and `P⁻¹` match them, padding otherwise.
    #[default]
    Auto,
    Fixture,
    GenericPad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    pub expansion: ExpansionChoice,
    pub peephole: bool,
    /// Recorded in the provenance; see [`Provenance::decomposition`].
    pub reference_decomposition: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self {
            expansion: ExpansionChoice::Auto,
            peephole: true,
            reference_decomposition: false,
        }
    }
}

/// Compiles `e^{−iHt} = P·e^{−iΛt}·P⁻¹` into an optical program.
///
/// Block order follows the photon: the factors of `P⁻¹` (`V2`, `D2`, `U2`),
/// the phase stage `Lambda_t`, then the factors of `P` (`U1`, `D1`, `V1`).
/// Three-vertex inputs are embedded in four modes and the spare mode is
/// blocked before the phase stage and at the output.
pub fn compile_evolution(dec: &SpectralDecomposition, opts: &CompileOptions) -> Result<CircuitIR> {
    dec.require_evolvable()?;
    let n = dec.dim();
    let (p, p_inv, blocked, expansion) = match n {
        4 => (dec.p.clone(), dec.p_inv.clone(), Vec::new(), None),
        3 => {
            let mode = match opts.expansion {
                ExpansionChoice::Fixture => ExpansionMode::Fixture,
                ExpansionChoice::GenericPad => ExpansionMode::GenericPad,
                ExpansionChoice::Auto => {
                    let fits = |m| expand_dimension(m, ExpansionMode::Fixture).is_ok();
                    if fits(&dec.p) && fits(&dec.p_inv) {
                        ExpansionMode::Fixture
                    } else {
                        ExpansionMode::GenericPad
                    }
                }
            };
            let e = expand_dimension(&dec.p, mode)?;
            let ei = expand_dimension(&dec.p_inv, mode)?;
            (e.matrix, ei.matrix, e.blocked, Some(mode))
        }
        other => return Err(Error::UnsupportedDimension(other)),
    };

    let mut lambda = dec.lambda.clone();
    while lambda.len() < 4 {
        lambda.push(*lambda.last().expect("n >= 3"));
    }

    let inv = optical_factors(&p_inv)?;
    let fwd = optical_factors(&p)?;

    let mut stages = Vec::new();
    push_unitary(&mut stages, &inv.u2, "V2")?;
    push_attenuator(&mut stages, &inv.d, inv.scale, "D2")?;
    push_unitary(&mut stages, &inv.u1, "U2")?;
    if !blocked.is_empty() {
        stages.push(entry(
            Stage::Blocker {
                modes: blocked.clone(),
            },
            "block",
        ));
    }
    stages.push(entry(
        Stage::Phase(synthesize_phase_stage(&lambda)),
        "Lambda_t",
    ));
    push_unitary(&mut stages, &fwd.u2, "U1")?;
    push_attenuator(&mut stages, &fwd.d, fwd.scale, "D1")?;
    push_unitary(&mut stages, &fwd.u1, "V1")?;
    if !blocked.is_empty() {
        stages.push(entry(Stage::Blocker { modes: blocked }, "block"));
    }

    if opts.peephole {
        stages = peephole(stages);
    }

    let ir = CircuitIR {
        dim: 4,
        total_scale: inv.scale * fwd.scale,
        vertices: n,
        detectors: (0..n).collect(),
        stages,
        provenance: Provenance {
            decomposition: if opts.reference_decomposition {
                "reference"
            } else {
                "eigendecompose"
            }
            .into(),
            classification: dec.classification,
            lambda: dec.lambda.clone(),
            expansion,
        },
    };
    ir.validate()?;
    Ok(ir)
}

fn entry(stage: Stage, block: &str) -> StageEntry {
    StageEntry {
        stage,
        block: block.into(),
    }
}

fn push_attenuator(stages: &mut Vec<StageEntry>, d: &[f64], scale: f64, block: &str) -> Result<()> {
    if d.iter().all(|&x| (x - 1.0).abs() <= IDENTITY_TOL) {
        return Ok(());
    }
    stages.push(entry(
        Stage::Attenuator(synthesize_attenuation(d, scale)?),
        block,
    ));
    Ok(())
}

fn is_identity(u: &CMatrix) -> bool {
    linalg::phase_invariant_distance(u, &CMatrix::identity(u.nrows(), u.ncols())) <= IDENTITY_TOL
}

fn push_block_unitary(
    stages: &mut Vec<StageEntry>,
    a: &Jones,
    b: &Jones,
    block: &str,
) -> Result<()> {
    if is_identity(&block_diag(a, b)) {
        return Ok(());
    }
    let paths = [solve_waveplate_triple(a)?, solve_waveplate_triple(b)?];
    stages.push(entry(Stage::BlockUnitary { paths }, block));
    Ok(())
}

/// `diag(L, L')·S₄·diag(R, R')` in application order: `R` blocks, the
/// routed HWP pairs realizing `S₄`, then `L` blocks.
fn push_unitary(stages: &mut Vec<StageEntry>, u: &CMatrix, block: &str) -> Result<()> {
    if is_identity(u) {
        return Ok(());
    }
    let f = csd4(u)?;
    push_block_unitary(stages, &f.r, &f.r_prime, block)?;
    if f.theta.iter().any(|&t| t != 0.0) {
        let route = Stage::Routing {
            perm: vec![0, 2, 1, 3],
        };
        stages.push(entry(route.clone(), block));
        for (path, theta) in f.theta.iter().enumerate() {
            // HWP(0)·HWP(θ/2) is the rotation [[cos θ, sin θ], [−sin θ, cos θ]]
            stages.push(entry(
                Stage::Waveplate {
                    path,
                    plate: Plate::Half,
                    angle: canonical_angle(theta / 2.0),
                },
                block,
            ));
            stages.push(entry(
                Stage::Waveplate {
                    path,
                    plate: Plate::Half,
                    angle: 0.0,
                },
                block,
            ));
        }
        stages.push(entry(route, block));
    }
    push_block_unitary(stages, &f.l, &f.l_prime, block)?;
    Ok(())
}
