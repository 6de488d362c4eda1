//! Compilation of `U(t) = P·e^{−iΛt}·P⁻¹` into a linear-optical program on a
//! path ⊗ polarization ququart with modes `(1H, 1V, 2H, 2V)`.
//!
//! `P` and `P⁻¹` are first brought to 4×4 (for three vertices), factored as
//! `scale·U·D·V`, and every unitary factor is split by a 2+2 cosine-sine
//! decomposition into polarization rotations on each path around a central
//! `S₄` mixer. Diagonal factors become attenuators and `e^{−iΛt}` becomes a
//! single time-parametric phase stage.

mod compile;
mod csd;
mod expand;
mod ir;
mod peephole;
mod svd;
mod synth;
mod waveplate;

pub use compile::{compile_evolution, CompileOptions, ExpansionChoice};
pub use csd::{csd4, s4, CsdFactors};
pub use expand::{expand_dimension, Expanded, ExpansionMode};
pub use ir::{CircuitIR, Plate, Provenance, Stage, StageEntry};
pub use peephole::peephole;
pub use svd::{optical_factors, svd, SvdFactors};
pub use synth::{
    synthesize_attenuation, synthesize_phase_stage, AttenuationStage, HwpSlope, PhaseStage,
};
pub use waveplate::{solve_waveplate_triple, WaveplateTriple};
