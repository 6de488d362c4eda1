//! Checks a compiled circuit against the dense matrix exponential and
//! locates the first faulty stage.

use std::f64::consts::TAU;

use serde::Serialize;
use serde_json::Value;

use crate::compiler::{
    compile_evolution, CircuitIR, CompileOptions, ExpansionChoice, ExpansionMode,
};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::jones::transfer_matrix;
use crate::linalg::{self, CMatrix, ONE};
use crate::par::{self, Execution};
use crate::spectral::{eigendecompose, SpectralDecomposition, DEFAULT_TOL};

/// Maximum phase-invariant Frobenius error accepted by [`verify_circuit`].
pub const VERIFY_TOL: f64 = 1e-8;
pub const DEFAULT_SAMPLES: usize = 32;

/// Stage parameters closer than this are treated as equal by [`locate_fault`].
const STAGE_TOL: f64 = 1e-7;

/// `n` low-discrepancy times in `[0, 2π)` from the golden-ratio sequence.
pub fn sample_times(n: usize) -> Vec<f64> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    (0..n).map(|k| TAU * (0.5 + k as f64 * g).fract()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaultLocation {
    /// 1-based stage index.
    pub stage: usize,
    pub block: String,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub samples: usize,
    pub max_error: f64,
    pub worst_t: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<FaultLocation>,
}

/// `T(t)·total_scale` on the detector modes.
pub fn scaled_vertex_block(ir: &CircuitIR, t: f64) -> Result<CMatrix> {
    let full = transfer_matrix(ir, t)?;
    let d = &ir.detectors;
    Ok(CMatrix::from_fn(d.len(), d.len(), |i, j| {
        full[(d[i], d[j])] * ONE.scale(ir.total_scale)
    }))
}

/// Compares the circuit with `e^{−iHt}` at [`sample_times`]. On failure the
/// first stage that differs from a fresh compilation is reported.
pub fn verify_circuit(
    ir: &CircuitIR,
    h: &CMatrix,
    samples: usize,
    exec: Execution,
) -> Result<VerifyReport> {
    ir.validate()?;
    if h.nrows() != ir.vertices || h.ncols() != ir.vertices {
        return Err(Error::DimensionMismatch {
            expected: ir.vertices,
            got: h.nrows(),
        });
    }
    if samples == 0 {
        return Err(Error::InvalidArgument(
            "at least one sample is required".into(),
        ));
    }
    let times = sample_times(samples);
    let errors = par::map_collect(&times, exec, |&t| {
        scaled_vertex_block(ir, t)
            .map(|got| linalg::phase_invariant_distance(&got, &linalg::evolution_reference(h, t)))
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let (worst, max_error) = errors
        .iter()
        .copied()
        .enumerate()
        .fold(
            (0, 0.0),
            |acc, (i, e)| if e > acc.1 || e.is_nan() { (i, e) } else { acc },
        );
    let passed = max_error <= VERIFY_TOL;
    Ok(VerifyReport {
        samples,
        max_error,
        worst_t: times[worst],
        tolerance: VERIFY_TOL,
        passed,
        fault: if passed { None } else { locate_fault(ir, h) },
    })
}

/// Recompiles `h` the way the circuit's provenance describes and returns
/// the first stage whose kind, block or parameters disagree.
pub fn locate_fault(ir: &CircuitIR, h: &CMatrix) -> Option<FaultLocation> {
    let expected = recompile(ir, h)?;
    let n = ir.stages.len().max(expected.stages.len());
    (0..n).find_map(|i| {
        let same = match (ir.stages.get(i), expected.stages.get(i)) {
            (Some(a), Some(b)) => {
                let va = serde_json::to_value(a).ok()?;
                let vb = serde_json::to_value(b).ok()?;
                approx_equal(&va, &vb)
            }
            _ => false,
        };
        if same {
            return None;
        }
        let e = ir.stages.get(i).or(expected.stages.get(i))?;
        Some(FaultLocation {
            stage: i + 1,
            block: e.block.clone(),
            kind: e.stage.kind().into(),
        })
    })
}

fn recompile(ir: &CircuitIR, h: &CMatrix) -> Option<CircuitIR> {
    let reference = ir.provenance.decomposition == "reference";
    let dec: SpectralDecomposition = if reference {
        fixtures::reference_decomposition(h)?
    } else {
        eigendecompose(h, DEFAULT_TOL).ok()?
    };
    let expansion = match ir.provenance.expansion {
        Some(ExpansionMode::Fixture) => ExpansionChoice::Fixture,
        Some(ExpansionMode::GenericPad) => ExpansionChoice::GenericPad,
        None => ExpansionChoice::Auto,
    };
    let compile = |peephole| {
        compile_evolution(
            &dec,
            &CompileOptions {
                expansion,
                peephole,
                reference_decomposition: reference,
            },
        )
        .ok()
    };
    let merged = compile(true)?;
    if merged.stages.len() == ir.stages.len() {
        return Some(merged);
    }
    compile(false)
        .filter(|c| c.stages.len() == ir.stages.len())
        .or(Some(merged))
}

fn approx_equal(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => match (x.as_f64(), y.as_f64()) {
            (Some(x), Some(y)) => (x - y).abs() <= STAGE_TOL * x.abs().max(y.abs()).max(1.0),
            _ => x == y,
        },
        (Value::Array(x), Value::Array(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|(a, b)| approx_equal(a, b))
        }
        (Value::Object(x), Value::Object(y)) => {
            x.len() == y.len()
                && x.iter()
                    .all(|(k, v)| y.get(k).is_some_and(|w| approx_equal(v, w)))
        }
        _ => a == b,
    }
}
