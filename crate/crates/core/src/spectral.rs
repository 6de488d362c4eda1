//! Eigendecomposition of (generally non-Hermitian) walk Hamiltonians and the
//! continuous-time quantum walk built on it.
//!
//! A Hamiltonian with a real spectrum and a complete eigenbasis is
//! pseudo-Hermitian: `e^{−iHt} = P e^{−iΛt} P⁻¹` is not unitary, but the norm
//! of an evolved state oscillates inside fixed bounds instead of growing.

use std::fmt;

use nalgebra::linalg::Schur;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::centrality::{CentralityReport, Method, DEFAULT_TIE_TOLERANCE};
use crate::error::{Error, Result};
use crate::linalg::{self, complex_matrix_serde, complex_vec_serde, CMatrix, CVector};
use crate::par::{self, Execution};

/// Relative tolerance used for realness, Hermiticity and (via `1/tol`) the
/// eigenvector condition-number threshold.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Eigenvalues closer than this (relative to `max(1, ‖H‖_F)`) are treated as
/// one degenerate eigenvalue.
const CLUSTER_TOL: f64 = 1e-5;

/// An eigenspace is complete when its multiplicity-th smallest shifted
/// singular value is below this (relative) threshold.
const NULL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Hermitian,
    PseudoHermitian,
    ComplexSpectrum,
    Defective,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Hermitian => "hermitian",
            Classification::PseudoHermitian => "pseudo-hermitian",
            Classification::ComplexSpectrum => "complex-spectrum",
            Classification::Defective => "defective",
        })
    }
}

/// `H = P · diag(lambda) · P⁻¹`.
///
/// For decompositions produced by [`eigendecompose`], `lambda` is ascending and
/// every column of `p` has unit norm with its largest-magnitude component real
/// and positive. Hand-assembled decompositions ([`SpectralDecomposition::from_factors`])
/// keep the caller's column order and scaling.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    #[serde(with = "complex_matrix_serde")]
    pub p: CMatrix,
    pub lambda: Vec<f64>,
    #[serde(with = "complex_matrix_serde")]
    pub p_inv: CMatrix,
    pub classification: Classification,
    /// `‖HP − P·diag(eigenvalues)‖_F`.
    pub residual: f64,
    /// Eigenvalues as computed, including imaginary parts; diagnostics only.
    #[serde(with = "complex_vec_serde")]
    pub eigenvalues: Vec<Complex64>,
}

fn check_square(h: &CMatrix) -> Result<usize> {
    let (rows, cols) = h.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix);
    }
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if !linalg::is_finite(h) {
        return Err(Error::NonFinite);
    }
    Ok(rows)
}

/// Diagonalizes `h` and classifies it.
///
/// Eigenvalues come from a complex Schur form. Eigenvalues within
/// `CLUSTER_TOL` are merged, and each cluster's eigenvectors are read off the
/// null space of `H − μI`, which handles degenerate but diagonalizable
/// spectra. Within a degenerate eigenspace the basis is chosen by pivoted
/// Gram–Schmidt on the eigenspace projector, so e.g. `H = 0` yields `P = I`.
pub fn eigendecompose(h: &CMatrix, tol: f64) -> Result<SpectralDecomposition> {
    let n = check_square(h)?;
    let scale = linalg::frobenius(h).max(1.0);
    let hermitian = linalg::frobenius(&(h - h.adjoint())) <= tol * scale;

    let raw = schur_eigenvalues(h, 0.0)
        .or_else(|| schur_eigenvalues(h, scale))
        .ok_or(Error::EigenFailure)?;

    let mut clusters = cluster_eigenvalues(&raw, CLUSTER_TOL * scale);
    clusters.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let real = clusters.iter().all(|(mu, _)| mu.im.abs() <= tol * scale);

    let mut p = CMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut deficient = false;
    let mut col = 0;
    for &(mu, mult) in &clusters {
        let mu = if real { Complex64::new(mu.re, 0.0) } else { mu };
        let (basis, short) = eigenspace_basis(h, mu, mult, NULL_TOL * scale);
        deficient |= short;
        for v in basis {
            p.set_column(col, &v);
            eigenvalues.push(mu);
            col += 1;
        }
    }

    let sv = p.clone().svd(false, false).singular_values;
    let cond = sv.max() / sv.min();
    let p_inv = p.clone().try_inverse();
    let defective = deficient || !(cond <= 1.0 / tol) || p_inv.is_none();
    let p_inv = p_inv.unwrap_or_else(|| CMatrix::zeros(n, n));

    let classification = if !real {
        Classification::ComplexSpectrum
    } else if defective {
        Classification::Defective
    } else if hermitian {
        Classification::Hermitian
    } else {
        Classification::PseudoHermitian
    };

    let diag = CMatrix::from_diagonal(&CVector::from_vec(eigenvalues.clone()));
    let residual = linalg::frobenius(&(h * &p - &p * diag));

    Ok(SpectralDecomposition {
        lambda: eigenvalues.iter().map(|z| z.re).collect(),
        p,
        p_inv,
        classification,
        residual,
        eigenvalues,
    })
}

/// Diagonal of the Schur form of `H + shift·I`, shifted back. The shifted
/// retry covers inputs such as `H = 0` on which the QR iteration stalls.
fn schur_eigenvalues(h: &CMatrix, shift: f64) -> Option<Vec<Complex64>> {
    let n = h.nrows();
    let shifted = h + CMatrix::identity(n, n) * Complex64::new(shift, 0.0);
    let (_, t) = Schur::try_new(shifted, f64::EPSILON, 100_000)?.unpack();
    Some((0..n).map(|i| t[(i, i)] - shift).collect())
}

/// Single-linkage clustering; returns `(mean, multiplicity)` per cluster.
fn cluster_eigenvalues(values: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut sums: Vec<(Complex64, usize)> = vec![(Complex64::new(0.0, 0.0), 0); n];
    for (i, &v) in values.iter().enumerate() {
        let r = find(&mut parent, i);
        sums[r].0 += v;
        sums[r].1 += 1;
    }
    sums.into_iter()
        .filter(|&(_, m)| m > 0)
        .map(|(s, m)| (s / m as f64, m))
        .collect()
}

/// Orthonormal basis of the (numerical) null space of `H − μI` with `mult`
/// vectors. The flag reports that fewer than `mult` singular values were
/// below `null_tol`.
fn eigenspace_basis(
    h: &CMatrix,
    mu: Complex64,
    mult: usize,
    null_tol: f64,
) -> (Vec<CVector>, bool) {
    let n = h.nrows();
    let shifted = h - CMatrix::identity(n, n) * mu;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let chosen = &idx[..mult];
    let short = svd.singular_values[chosen[mult - 1]] > null_tol;

    // columns of N span the eigenspace; Π = N N† is basis independent
    let null = CMatrix::from_fn(n, mult, |i, k| v_t[(chosen[k], i)].conj());
    if mult == 1 {
        let mut v = null.column(0).into_owned();
        v /= Complex64::new(v.norm(), 0.0);
        let mut m = CMatrix::from_column_slice(n, 1, v.as_slice());
        linalg::canonical_column_phase(&mut m, 0);
        return (vec![m.column(0).into_owned()], short);
    }

    let mut residual = &null * null.adjoint();
    let mut basis = Vec::with_capacity(mult);
    for _ in 0..mult {
        let mut best = 0;
        let mut best_norm = -1.0;
        for j in 0..n {
            let c = residual.column(j).norm();
            if c > best_norm + 1e-12 {
                best = j;
                best_norm = c;
            }
        }
        let mut q = CMatrix::from_column_slice(n, 1, residual.column(best).as_slice());
        q /= Complex64::new(best_norm, 0.0);
        linalg::canonical_column_phase(&mut q, 0);
        residual -= &q * (q.adjoint() * &residual);
        basis.push(q.column(0).into_owned());
    }
    (basis, short)
}

impl SpectralDecomposition {
    /// Assembles a decomposition from known factors, e.g. a hand-chosen
    /// eigenbasis. Checks `HP = PΛ` and `P·P⁻¹ = I` to `tol`.
    pub fn from_factors(
        h: &CMatrix,
        p: CMatrix,
        lambda: Vec<f64>,
        p_inv: CMatrix,
        tol: f64,
    ) -> Result<Self> {
        let n = check_square(h)?;
        for (m, what) in [(&p, "P"), (&p_inv, "P⁻¹")] {
            if m.shape() != (n, n) {
                return Err(Error::InvalidArgument(format!("{what} must be {n}x{n}")));
            }
        }
        if lambda.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: lambda.len(),
            });
        }
        let scale = linalg::frobenius(h).max(1.0);
        let eigenvalues: Vec<Complex64> = lambda.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let diag = CMatrix::from_diagonal(&CVector::from_vec(eigenvalues.clone()));
        let residual = linalg::frobenius(&(h * &p - &p * diag));
        if residual > tol * scale {
            return Err(Error::InvalidArgument(format!(
                "factors do not diagonalize H (residual {residual:.3e})"
            )));
        }
        let inv_err = linalg::frobenius(&(&p * &p_inv - CMatrix::identity(n, n)));
        if inv_err > tol {
            return Err(Error::InvalidArgument(format!(
                "P⁻¹ is not the inverse of P (error {inv_err:.3e})"
            )));
        }
        let classification = if linalg::frobenius(&(h - h.adjoint())) <= tol * scale {
            Classification::Hermitian
        } else {
            Classification::PseudoHermitian
        };
        Ok(Self {
            p,
            lambda,
            p_inv,
            classification,
            residual,
            eigenvalues,
        })
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    /// Hermitian or pseudo-Hermitian: `e^{−iHt}` exists in diagonal form with
    /// a unitary middle factor.
    pub fn is_evolvable(&self) -> bool {
        matches!(
            self.classification,
            Classification::Hermitian | Classification::PseudoHermitian
        )
    }

    pub(crate) fn require_evolvable(&self) -> Result<()> {
        if self.is_evolvable() {
            Ok(())
        } else {
            Err(Error::NotPseudoHermitian {
                classification: self.classification,
                eigenvalues: self.eigenvalues.clone(),
            })
        }
    }

    /// `P · diag(λ) · P⁻¹`.
    pub fn reconstruct(&self) -> CMatrix {
        let d = CMatrix::from_diagonal(&CVector::from_vec(self.eigenvalues.clone()));
        &self.p * d * &self.p_inv
    }

    /// `U(t) = P · diag(e^{−iλ_k t}) · P⁻¹`.
    pub fn evolution_operator(&self, t: f64) -> Result<CMatrix> {
        self.require_evolvable()?;
        let phases = CVector::from_iterator(
            self.dim(),
            self.lambda
                .iter()
                .map(|&l| Complex64::from_polar(1.0, -l * t)),
        );
        Ok(&self.p * CMatrix::from_diagonal(&phases) * &self.p_inv)
    }

    pub fn evolve_state(&self, psi0: &CVector, t: f64) -> Result<CVector> {
        self.check_state(psi0)?;
        Ok(self.evolution_operator(t)? * psi0)
    }

    fn check_state(&self, psi0: &CVector) -> Result<()> {
        if psi0.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: psi0.len(),
            });
        }
        Ok(())
    }

    /// Column indices grouped by equal eigenvalue.
    pub fn degenerate_groups(&self) -> Vec<Vec<usize>> {
        let tol = 1e-9 * self.lambda.iter().fold(1.0f64, |m, l| m.max(l.abs()));
        let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
        for (k, &l) in self.lambda.iter().enumerate() {
            match groups.iter_mut().find(|(g, _)| (g - l).abs() <= tol) {
                Some((_, members)) => members.push(k),
                None => groups.push((l, vec![k])),
            }
        }
        groups.into_iter().map(|(_, m)| m).collect()
    }

    /// Infinite-time average of `|⟨j|ψ(t)⟩|²` for every vertex `j`.
    ///
    /// With `c = P⁻¹ψ₀`, `ψ_j(t) = Σ_k P_jk c_k e^{−iλ_k t}`. Cross terms
    /// between distinct eigenvalues average to zero, so the average is
    /// `Σ_groups |Σ_{k∈group} P_jk c_k|²`.
    pub fn time_averaged_probabilities(&self, psi0: &CVector) -> Result<Vec<f64>> {
        self.require_evolvable()?;
        self.check_state(psi0)?;
        let c = &self.p_inv * psi0;
        let groups = self.degenerate_groups();
        Ok((0..self.dim())
            .map(|j| {
                groups
                    .iter()
                    .map(|g| {
                        g.iter()
                            .map(|&k| self.p[(j, k)] * c[k])
                            .sum::<Complex64>()
                            .norm_sqr()
                    })
                    .sum()
            })
            .collect())
    }

    /// Bounds on `‖ψ(t)‖²` over all `t`: with `c = P⁻¹ψ₀`,
    /// `‖c‖/‖P⁻¹‖₂ ≤ ‖ψ(t)‖ ≤ ‖P‖₂‖c‖`.
    pub fn norm_bounds(&self, psi0: &CVector) -> Result<(f64, f64)> {
        self.require_evolvable()?;
        self.check_state(psi0)?;
        let c = (&self.p_inv * psi0).norm();
        let spectral = |m: &CMatrix| m.clone().svd(false, false).singular_values.max();
        let upper = spectral(&self.p) * c;
        let lower = c / spectral(&self.p_inv);
        Ok((lower * lower, upper * upper))
    }
}

/// The unnormalized all-ones initial state.
pub fn uniform_state(n: usize) -> CVector {
    CVector::from_element(n, linalg::ONE)
}

/// CTQW centrality: time-averaged occupation probabilities normalized to 1.
pub fn ctqw_centrality(dec: &SpectralDecomposition, psi0: &CVector) -> Result<CentralityReport> {
    let avg = dec.time_averaged_probabilities(psi0)?;
    CentralityReport::from_scores(Method::Ctqw, &avg, DEFAULT_TIE_TOLERANCE)
}

/// Trapezoidal average of `|ψ_j(t)|²` over `[0, period]` with `samples`
/// equally spaced nodes. Reference for [`ctqw_centrality`].
pub fn time_average_numeric(
    dec: &SpectralDecomposition,
    psi0: &CVector,
    period: f64,
    samples: usize,
    exec: Execution,
) -> Result<Vec<f64>> {
    if samples < 2 {
        return Err(Error::InvalidArgument(
            "quadrature needs at least 2 samples".into(),
        ));
    }
    if !(period > 0.0) {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    dec.require_evolvable()?;
    dec.check_state(psi0)?;

    let c = &dec.p_inv * psi0;
    let n = dec.dim();
    let step = period / (samples - 1) as f64;
    let nodes: Vec<usize> = (0..samples).collect();
    let values = par::map_collect(&nodes, exec, |&k| {
        let t = k as f64 * step;
        let weight = if k == 0 || k == samples - 1 { 0.5 } else { 1.0 };
        let evolved = CVector::from_iterator(
            n,
            dec.lambda
                .iter()
                .zip(c.iter())
                .map(|(&l, &ck)| ck * Complex64::from_polar(1.0, -l * t)),
        );
        let psi = &dec.p * evolved;
        psi.iter()
            .map(|z| weight * z.norm_sqr())
            .collect::<Vec<f64>>()
    });
    let mut acc = vec![0.0; n];
    for v in values {
        for (a, x) in acc.iter_mut().zip(v) {
            *a += x;
        }
    }
    Ok(acc.into_iter().map(|a| a / (samples - 1) as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::linalg::{complexify, real_matrix};

    fn h3() -> CMatrix {
        complexify(
            &parse_graph("3\n0 1\n1 0\n2 0\n2 1")
                .unwrap()
                .graph
                .hamiltonian(),
        )
    }

    fn h4() -> CMatrix {
        complexify(
            &parse_graph("4\n0 3\n1 2\n2 0\n2 1\n3 0\n3 1")
                .unwrap()
                .graph
                .hamiltonian(),
        )
    }

    fn assert_invariants(h: &CMatrix, dec: &SpectralDecomposition) {
        let scale = linalg::frobenius(h).max(1.0);
        assert!(dec.residual <= 1e-9 * scale, "residual {}", dec.residual);
        let n = dec.dim();
        assert!(linalg::frobenius(&(&dec.p * &dec.p_inv - CMatrix::identity(n, n))) <= 1e-9);
        assert!(dec.lambda.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn three_vertex_spectrum() {
        let h = h3();
        let dec = eigendecompose(&h, DEFAULT_TOL).unwrap();
        assert_eq!(dec.classification, Classification::PseudoHermitian);
        for (l, w) in dec.lambda.iter().zip([0.0, 2.0, 2.0]) {
            assert!((l - w).abs() < 1e-9);
        }
        assert_invariants(&h, &dec);
    }

    #[test]
    fn four_vertex_spectrum() {
        let h = h4();
        let dec = eigendecompose(&h, DEFAULT_TOL).unwrap();
        assert_eq!(dec.classification, Classification::PseudoHermitian);
        for (l, w) in dec.lambda.iter().zip([0.0, 1.0, 2.0, 3.0]) {
            assert!((l - w).abs() < 1e-9);
        }
        assert_invariants(&h, &dec);
    }

    #[test]
    fn identity_is_hermitian_with_identity_basis() {
        let h = CMatrix::identity(3, 3);
        let dec = eigendecompose(&h, DEFAULT_TOL).unwrap();
        assert_eq!(dec.classification, Classification::Hermitian);
        assert_eq!(dec.lambda, vec![1.0; 3]);
        assert!(linalg::frobenius(&(&dec.p - CMatrix::identity(3, 3))) < 1e-12);
        assert!(linalg::frobenius(&(&dec.p_inv - CMatrix::identity(3, 3))) < 1e-12);
    }

    #[test]
    fn rotation_generator_has_complex_spectrum() {
        let dec = eigendecompose(&real_matrix(2, 2, &[0., 1., -1., 0.]), DEFAULT_TOL).unwrap();
        assert_eq!(dec.classification, Classification::ComplexSpectrum);
        assert!(matches!(
            dec.evolution_operator(1.0),
            Err(Error::NotPseudoHermitian { .. })
        ));
        let mut im: Vec<f64> = dec.eigenvalues.iter().map(|z| z.im).collect();
        im.sort_by(f64::total_cmp);
        assert!((im[0] + 1.0).abs() < 1e-12 && (im[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jordan_block_is_defective() {
        let dec = eigendecompose(&real_matrix(2, 2, &[1., 1., 0., 1.]), DEFAULT_TOL).unwrap();
        assert_eq!(dec.classification, Classification::Defective);
        assert!(dec.evolution_operator(0.3).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            eigendecompose(&CMatrix::zeros(0, 0), DEFAULT_TOL),
            Err(Error::EmptyMatrix)
        ));
        let mut h = CMatrix::identity(2, 2);
        h[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            eigendecompose(&h, DEFAULT_TOL),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn zero_hamiltonian_is_trivial() {
        for n in 1..=4 {
            let dec = eigendecompose(&CMatrix::zeros(n, n), DEFAULT_TOL).unwrap();
            assert_eq!(dec.p, CMatrix::identity(n, n));
            assert_eq!(dec.lambda, vec![0.0; n]);
            assert_eq!(dec.classification, Classification::Hermitian);
        }
    }

    #[test]
    fn evolution_at_zero_is_identity() {
        for h in [h3(), h4()] {
            let dec = eigendecompose(&h, DEFAULT_TOL).unwrap();
            let n = dec.dim();
            let u = dec.evolution_operator(0.0).unwrap();
            assert!(linalg::frobenius(&(u - CMatrix::identity(n, n))) < 1e-9);
        }
    }

    #[test]
    fn four_vertex_evolution_is_periodic() {
        let dec = eigendecompose(&h4(), DEFAULT_TOL).unwrap();
        let u = dec.evolution_operator(2.0 * std::f64::consts::PI).unwrap();
        assert!(linalg::frobenius(&(u - CMatrix::identity(4, 4))) < 1e-9);
    }

    #[test]
    fn matches_dense_exponential() {
        for h in [h3(), h4()] {
            let dec = eigendecompose(&h, DEFAULT_TOL).unwrap();
            for t in [0.1, 0.77, 2.5, 6.0] {
                let u = dec.evolution_operator(t).unwrap();
                let reference = linalg::evolution_reference(&h, t);
                assert!(linalg::frobenius(&(u - reference)) < 1e-10);
            }
        }
    }

    #[test]
    fn three_vertex_sink_amplitude_has_unit_modulus() {
        // closed form: ψ₃(t) = e^{−2it} for ψ₀ = (1, 1, 1)
        let dec = eigendecompose(&h3(), DEFAULT_TOL).unwrap();
        let psi0 = uniform_state(3);
        for k in 0..50 {
            let t = 0.137 * k as f64;
            let psi = dec.evolve_state(&psi0, t).unwrap();
            assert!((psi[2] - Complex64::from_polar(1.0, -2.0 * t)).norm() < 1e-10);
            let first = Complex64::new(1.5, 0.0) - Complex64::from_polar(0.5, -2.0 * t);
            assert!((psi[0] - first).norm() < 1e-10);
            assert!((psi[1] - first).norm() < 1e-10);
        }
    }

    #[test]
    fn eigenstate_only_picks_up_a_phase() {
        let dec = eigendecompose(&h4(), DEFAULT_TOL).unwrap();
        for k in 0..4 {
            let v = dec.p.column(k).into_owned();
            let psi = dec.evolve_state(&v, 1.3).unwrap();
            let want = &v * Complex64::from_polar(1.0, -dec.lambda[k] * 1.3);
            assert!((psi - want).norm() < 1e-10);
        }
    }

    #[test]
    fn state_dimension_checked() {
        let dec = eigendecompose(&h3(), DEFAULT_TOL).unwrap();
        assert!(matches!(
            dec.evolve_state(&uniform_state(4), 0.5),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 4
            })
        ));
    }

    #[test]
    fn ctqw_three_vertex() {
        let dec = eigendecompose(&h3(), DEFAULT_TOL).unwrap();
        let r = ctqw_centrality(&dec, &uniform_state(3)).unwrap();
        for (s, w) in r.scores.iter().zip([5.0 / 12.0, 5.0 / 12.0, 2.0 / 12.0]) {
            assert!((s - w).abs() < 1e-9);
        }
        assert_eq!(r.ranking, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn ctqw_four_vertex() {
        let dec = eigendecompose(&h4(), DEFAULT_TOL).unwrap();
        let r = ctqw_centrality(&dec, &uniform_state(4)).unwrap();
        for (s, w) in r
            .scores
            .iter()
            .zip([17.0, 17.0, 5.0, 5.0].map(|x| x / 44.0))
        {
            assert!((s - w).abs() < 1e-9);
        }
        assert_eq!(r.ranking, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn ctqw_zero_state_is_an_error() {
        let dec = eigendecompose(&h3(), DEFAULT_TOL).unwrap();
        assert!(matches!(
            ctqw_centrality(&dec, &CVector::zeros(3)),
            Err(Error::ZeroProbability)
        ));
    }

    #[test]
    fn hermitian_eigenstate_gives_stationary_scores() {
        let h = real_matrix(3, 3, &[2., -1., 0., -1., 2., -1., 0., -1., 2.]);
        let dec = eigendecompose(&h, DEFAULT_TOL).unwrap();
        assert_eq!(dec.classification, Classification::Hermitian);
        let v = dec.p.column(1).into_owned();
        let r = ctqw_centrality(&dec, &v).unwrap();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        for j in 0..3 {
            assert!((r.scores[j] - v[j].norm_sqr() / norm).abs() < 1e-12);
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let dec = eigendecompose(&h3(), DEFAULT_TOL).unwrap();
        let psi0 = uniform_state(3);
        let exact = dec.time_averaged_probabilities(&psi0).unwrap();
        let numeric = time_average_numeric(
            &dec,
            &psi0,
            std::f64::consts::PI,
            10_000,
            Execution::default(),
        )
        .unwrap();
        for (a, b) in exact.iter().zip(&numeric) {
            assert!((a - b).abs() < 1e-6);
        }
        // unnormalized averages: (2.5, 2.5, 1)
        assert!((exact[0] - 2.5).abs() < 1e-9 && (exact[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn quadrature_of_constant_integrand() {
        let dec = eigendecompose(&h4(), DEFAULT_TOL).unwrap();
        let v = dec.p.column(2).into_owned();
        let two = time_average_numeric(&dec, &v, 1.0, 2, Execution::Sequential).unwrap();
        let many = time_average_numeric(&dec, &v, 1.0, 10_000, Execution::Parallel).unwrap();
        for j in 0..4 {
            assert!((two[j] - v[j].norm_sqr()).abs() < 1e-12);
            assert!((two[j] - many[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn quadrature_rejects_bad_grids() {
        let dec = eigendecompose(&h3(), DEFAULT_TOL).unwrap();
        let psi0 = uniform_state(3);
        assert!(time_average_numeric(&dec, &psi0, 1.0, 1, Execution::Sequential).is_err());
        assert!(time_average_numeric(&dec, &psi0, 0.0, 10, Execution::Sequential).is_err());
    }

    #[test]
    fn decomposition_json_round_trip() {
        let dec = eigendecompose(&h3(), DEFAULT_TOL).unwrap();
        let text = serde_json::to_string(&dec).unwrap();
        let back: SpectralDecomposition = serde_json::from_str(&text).unwrap();
        assert_eq!(back.lambda, dec.lambda);
        assert_eq!(back.p, dec.p);
        assert_eq!(back.classification, dec.classification);
    }
}
