//! The two reference graphs, their hand-chosen eigenbases and the known
//! factorizations used as regression fixtures.
//!
//! Vertices are 0-based here; human-facing output numbers them from 1.

use nalgebra::DMatrix;

use crate::graph::{parse_graph, DirectedGraph};
use crate::linalg::{self, real_matrix, CMatrix};
use crate::spectral::{SpectralDecomposition, DEFAULT_TOL};

/// Vertices 1 and 2 point at each other; vertex 3 points at both.
pub const THREE_VERTEX: &str = "3\n0 1\n1 0\n2 0\n2 1\n";

/// Four vertices whose PageRank scores are all equal.
pub const FOUR_VERTEX: &str = "4\n0 3\n1 2\n2 0\n2 1\n3 0\n3 1\n";

pub fn three_vertex_graph() -> DirectedGraph {
    parse_graph(THREE_VERTEX).expect("fixture parses").graph
}

pub fn four_vertex_graph() -> DirectedGraph {
    parse_graph(FOUR_VERTEX).expect("fixture parses").graph
}

pub fn h3() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[1., -1., -1., -1., 1., -1., 0., 0., 2.])
}

pub fn h4() -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            1., 0., -1., -1., 0., 1., -1., -1., 0., -1., 2., 0., -1., 0., 0., 2.,
        ],
    )
}

const FRAC_1_SQ2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Eigenvector columns of `H₃` for eigenvalues `(2, 0, 2)`.
pub fn p3() -> CMatrix {
    real_matrix(3, 3, &[-1., 1., -1., 1., 1., 0., 0., 0., 1.])
}

/// `2·P₃⁻¹`.
pub fn p3_inv_scaled() -> CMatrix {
    real_matrix(3, 3, &[-1., 1., -1., 1., 1., 1., 0., 0., 2.])
}

pub const LAMBDA3: [f64; 3] = [2.0, 0.0, 2.0];

/// Eigenvector columns of `H₄` for eigenvalues `(0, 3, 1, 2)`.
pub fn p4() -> CMatrix {
    real_matrix(
        4,
        4,
        &[
            2., -1., 1., 0., 2., -1., -1., 0., 1., 1., -1., 1., 1., 1., 1., -1.,
        ],
    )
}

/// `6·P₄⁻¹`.
pub fn p4_inv_scaled() -> CMatrix {
    real_matrix(
        4,
        4,
        &[
            1., 1., 1., 1., -1., -1., 2., 2., 3., -3., 0., 0., 3., -3., 3., -3.,
        ],
    )
}

pub const LAMBDA4: [f64; 4] = [0.0, 3.0, 1.0, 2.0];

pub fn three_vertex_decomposition() -> SpectralDecomposition {
    let h = linalg::complexify(&h3());
    let p_inv = p3_inv_scaled() / linalg::ONE.scale(2.0);
    SpectralDecomposition::from_factors(&h, p3(), LAMBDA3.to_vec(), p_inv, DEFAULT_TOL)
        .expect("fixture factors diagonalize H3")
}

pub fn four_vertex_decomposition() -> SpectralDecomposition {
    let h = linalg::complexify(&h4());
    let p_inv = p4_inv_scaled() / linalg::ONE.scale(6.0);
    SpectralDecomposition::from_factors(&h, p4(), LAMBDA4.to_vec(), p_inv, DEFAULT_TOL)
        .expect("fixture factors diagonalize H4")
}

/// The hand-chosen decomposition for a Hamiltonian equal to one of the
/// reference Hamiltonians, if any.
pub fn reference_decomposition(h: &CMatrix) -> Option<SpectralDecomposition> {
    let same = |m: DMatrix<f64>| {
        h.shape() == m.shape() && linalg::frobenius(&(h - linalg::complexify(&m))) <= 1e-12
    };
    if same(h3()) {
        Some(three_vertex_decomposition())
    } else if same(h4()) {
        Some(four_vertex_decomposition())
    } else {
        None
    }
}

/// `P₃` embedded in four dimensions so that the unitary factor of its SVD
/// splits with one vanishing cosine-sine angle.
pub fn p3_expanded() -> CMatrix {
    real_matrix(
        4,
        4,
        &[
            -1., 1., -1., 1., 1., 1., 0., 0., 0., 0., 1., 1., -1., 1., 1., -1.,
        ],
    )
}

/// `2·P₃⁻¹` embedded in four dimensions.
pub fn p3_inv_scaled_expanded() -> CMatrix {
    let r = 1.0 / 3f64.sqrt();
    real_matrix(
        4,
        4,
        &[
            -1.,
            1.,
            -1.,
            2. * r,
            1.,
            1.,
            1.,
            -2. * r,
            0.,
            0.,
            2.,
            3. * r,
            -2.,
            0.,
            1.,
            -2. * r,
        ],
    )
}

/// Known factors of `p3_expanded() = 2·D·U`.
pub fn p3_expanded_factors() -> (f64, Vec<f64>, CMatrix) {
    let u = real_matrix(
        4,
        4,
        &[
            -0.5, 0.5, -0.5, 0.5, FRAC_1_SQ2, FRAC_1_SQ2, 0., 0., 0., 0., FRAC_1_SQ2, FRAC_1_SQ2,
            -0.5, 0.5, 0.5, -0.5,
        ],
    );
    (2.0, vec![1.0, FRAC_1_SQ2, FRAC_1_SQ2, 1.0], u)
}

/// Known factors of `p3_inv_scaled_expanded() = √7·U·D`.
pub fn p3_inv_expanded_factors() -> (f64, CMatrix, Vec<f64>) {
    let s6 = 6f64.sqrt();
    let s7 = 7f64.sqrt();
    let s21 = 21f64.sqrt();
    let u = real_matrix(
        4,
        4,
        &[
            -1. / s6,
            FRAC_1_SQ2,
            -1. / s7,
            2. / s21,
            1. / s6,
            FRAC_1_SQ2,
            1. / s7,
            -2. / s21,
            0.,
            0.,
            2. / s7,
            3. / s21,
            -2. / s6,
            0.,
            1. / s7,
            -2. / s21,
        ],
    );
    (
        s7,
        u,
        vec![(6f64 / 7.).sqrt(), (2f64 / 7.).sqrt(), 1.0, 1.0],
    )
}

/// Known three-factor cosine-sine splitting of the unitary in
/// [`p3_expanded_factors`].
pub fn p3_unitary_csd() -> [CMatrix; 3] {
    let h = FRAC_1_SQ2;
    [
        real_matrix(
            4,
            4,
            &[
                1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., -1., 0.,
            ],
        ),
        real_matrix(
            4,
            4,
            &[
                -h, 0., -h, 0., 0., 1., 0., 0., h, 0., -h, 0., 0., 0., 0., 1.,
            ],
        ),
        real_matrix(
            4,
            4,
            &[h, -h, 0., 0., h, h, 0., 0., 0., 0., h, -h, 0., 0., h, h],
        ),
    ]
}

/// Known three-factor cosine-sine splitting of the unitary in
/// [`p3_inv_expanded_factors`].
pub fn p3_inv_unitary_csd() -> [CMatrix; 3] {
    let h = FRAC_1_SQ2;
    let a = 1.0 / 3f64.sqrt();
    let b = (2f64 / 3.).sqrt();
    let c = (3f64 / 7.).sqrt();
    let d = (4f64 / 7.).sqrt();
    [
        real_matrix(
            4,
            4,
            &[h, h, 0., 0., -h, h, 0., 0., 0., 0., 0., 1., 0., 0., -1., 0.],
        ),
        real_matrix(
            4,
            4,
            &[
                -a, 0., -b, 0., 0., 1., 0., 0., b, 0., -a, 0., 0., 0., 0., 1.,
            ],
        ),
        real_matrix(
            4,
            4,
            &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., c, -d, 0., 0., d, c],
        ),
    ]
}

/// Known 4-decimal singular value factorization `P₄ = s·U·D·V`.
pub fn p4_reference_svd() -> (f64, CMatrix, Vec<f64>, CMatrix) {
    let u = real_matrix(
        4,
        4,
        &[
            -0.6768, -0.2049, 0.3717, -0.6015, -0.6768, -0.2049, -0.3717, 0.6015, -0.2049, 0.6768,
            -0.6015, -0.3717, -0.2049, 0.6768, 0.6015, 0.3717,
        ],
    );
    let v = real_matrix(
        4,
        4,
        &[
            -0.9571, 0.2898, 0., 0., 0.2898, 0.9571, 0., 0., 0., 0., 0.8507, -0.5257, 0., 0.,
            -0.5257, -0.8507,
        ],
    );
    (3.2566, u, vec![1.0, 0.5657, 0.7026, 0.2684], v)
}

/// Known 4-decimal factorization `6·P₄⁻¹ = s·V·D·U`.
pub fn p4_inv_reference_svd() -> (f64, CMatrix, Vec<f64>, CMatrix) {
    let v = real_matrix(
        4,
        4,
        &[
            -0.9571, -0.2898, 0., 0., 0.2898, -0.9571, 0., 0., 0., 0., 0.8507, 0.5257, 0., 0.,
            -0.5257, 0.8507,
        ],
    );
    let u = real_matrix(
        4,
        4,
        &[
            -0.6768, -0.6768, -0.2049, -0.2049, 0.2049, 0.2049, -0.6768, -0.6768, 0.3717, -0.3717,
            -0.6015, 0.6015, -0.6015, 0.6015, -0.3717, 0.3717,
        ],
    );
    (6.8644, v, vec![0.2684, 0.4745, 0.3820, -1.0], u)
}
