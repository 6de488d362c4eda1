//! Centrality ranking of directed graphs with pseudo-Hermitian continuous-time
//! quantum walks, and compilation of the resulting non-unitary evolutions into
//! linear-optical element programs.
//!
//! The pipeline is:
//!
//! 1. [`graph`]: parse an edge list, build the adjacency matrix and the walk
//!    Hamiltonian `H = L†`, and rank vertices with classical PageRank.
//! 2. [`spectral`]: diagonalize `H = P Λ P⁻¹`, classify it, evolve states and
//!    compute time-averaged occupation probabilities (CTQW centrality).
//! 3. [`compiler`]: factor `P` and `P⁻¹` with SVD, split every unitary factor
//!    with a 2+2 cosine-sine decomposition, and emit wave plates, attenuators
//!    and a time-parametric phase stage acting on a path ⊗ polarization ququart.
//! 4. [`jones`]: evaluate the emitted program with Jones calculus, sweep the
//!    evolution time and draw Poissonian coincidence counts.
//! 5. [`verify`]: compare the compiled circuit with a dense matrix exponential.
//!
//! Data-parallel loops (quadrature, sweeps, verification samples) run on rayon
//! when the `parallel` feature is enabled and fall back to plain iterators
//! otherwise. See [`par::Execution`].

pub mod centrality;
pub mod cli;
pub mod compiler;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod jones;
pub mod linalg;
pub mod optics;
pub mod par;
pub mod spectral;
pub mod verify;

pub use centrality::{CentralityReport, Method};
pub use compiler::{compile_evolution, CircuitIR, CompileOptions, Stage};
pub use error::{Error, Result};
pub use graph::DirectedGraph;
pub use par::Execution;
pub use spectral::{eigendecompose, Classification, SpectralDecomposition};
