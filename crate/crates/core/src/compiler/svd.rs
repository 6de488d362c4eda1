use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// `M = scale · u1 · diag(d) · u2` with unitary `u1`, `u2` and `d ∈ [0, 1]`.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u1: CMatrix,
    pub d: Vec<f64>,
    pub u2: CMatrix,
    pub scale: f64,
}

impl SvdFactors {
    pub fn reassemble(&self) -> CMatrix {
        let mut m = self.u1.clone();
        for (j, &dj) in self.d.iter().enumerate() {
            m.column_mut(j).scale_mut(dj * self.scale);
        }
        m * &self.u2
    }
}

fn check(m: &CMatrix) -> Result<f64> {
    let (rows, cols) = m.shape();
    if rows == 0 {
        return Err(Error::EmptyMatrix);
    }
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if !linalg::is_finite(m) {
        return Err(Error::NonFinite);
    }
    let norm = linalg::frobenius(m);
    if norm == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(norm)
}

/// Singular value decomposition with singular values sorted descending and
/// `scale` equal to the largest one, so every entry of `d` is a physical
/// transmission. Each row of `u2` is rephased so that its largest-magnitude
/// entry is real and positive.
pub fn svd(m: &CMatrix) -> Result<SvdFactors> {
    check(m)?;
    let n = m.nrows();
    let dec = m.clone().svd(true, true);
    let (u, v_t) = (
        dec.u.expect("left vectors requested"),
        dec.v_t.expect("right vectors requested"),
    );
    let sv = dec.singular_values;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]).then(a.cmp(&b)));
    let scale = sv[order[0]];

    let mut u1 = CMatrix::zeros(n, n);
    let mut u2 = CMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        u1.set_column(k, &u.column(src));
        u2.set_row(k, &v_t.row(src));
    }
    for k in 0..n {
        let mut best = linalg::ONE;
        let mut best_norm = -1.0;
        for j in 0..n {
            let z = u2[(k, j)];
            if z.norm() > best_norm + 1e-12 {
                best = z;
                best_norm = z.norm();
            }
        }
        let phase = best / best_norm;
        u2.row_mut(k).apply(|z| *z /= phase);
        u1.column_mut(k).apply(|z| *z *= phase);
    }
    let d = order.iter().map(|&k| (sv[k] / scale).min(1.0)).collect();
    Ok(SvdFactors { u1, d, u2, scale })
}

/// Factorization used by the compiler.
///
/// A matrix with orthogonal rows is `diag(row norms)·W` and one with
/// orthogonal columns is `W·diag(column norms)`; both skip a unitary factor
/// entirely. Everything else goes through [`svd`].
pub fn optical_factors(m: &CMatrix) -> Result<SvdFactors> {
    let norm = check(m)?;
    let n = m.nrows();
    let tol = 1e-12 * norm * norm;

    let orthogonal = |g: &CMatrix| {
        (0..n).all(|i| g[(i, i)].re > tol)
            && (0..n).all(|i| (0..n).all(|j| i == j || g[(i, j)].norm() <= tol))
    };

    let rows = m * m.adjoint();
    if orthogonal(&rows) {
        let norms: Vec<f64> = (0..n).map(|i| rows[(i, i)].re.sqrt()).collect();
        let scale = norms.iter().copied().fold(0.0, f64::max);
        let mut w = m.clone();
        for (i, &r) in norms.iter().enumerate() {
            w.row_mut(i).apply(|z| *z /= Complex64::new(r, 0.0));
        }
        let d = norms.iter().map(|r| r / scale).collect();
        return Ok(SvdFactors {
            u1: CMatrix::identity(n, n),
            d,
            u2: w,
            scale,
        });
    }

    let cols = m.adjoint() * m;
    if orthogonal(&cols) {
        let norms: Vec<f64> = (0..n).map(|j| cols[(j, j)].re.sqrt()).collect();
        let scale = norms.iter().copied().fold(0.0, f64::max);
        let mut w = m.clone();
        for (j, &c) in norms.iter().enumerate() {
            w.column_mut(j).apply(|z| *z /= Complex64::new(c, 0.0));
        }
        let d = norms.iter().map(|c| c / scale).collect();
        return Ok(SvdFactors {
            u1: w,
            d,
            u2: CMatrix::identity(n, n),
            scale,
        });
    }

    svd(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::{frobenius, real_matrix, unitarity_defect};
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn check_factors(m: &CMatrix, f: &SvdFactors) {
        let tol = 1e-10 * frobenius(m).max(1.0);
        assert!(frobenius(&(f.reassemble() - m)) <= tol);
        assert!(unitarity_defect(&f.u1) < 1e-10);
        assert!(unitarity_defect(&f.u2) < 1e-10);
        assert!(f.d.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn identity() {
        let f = svd(&CMatrix::identity(4, 4)).unwrap();
        assert_eq!(f.scale, 1.0);
        assert_eq!(f.d, vec![1.0; 4]);
        assert!(frobenius(&(f.u1.clone() * &f.u2 - CMatrix::identity(4, 4))) < 1e-14);
        check_factors(&CMatrix::identity(4, 4), &f);
    }

    #[test]
    fn zero_matrix_is_rejected() {
        assert!(matches!(svd(&CMatrix::zeros(3, 3)), Err(Error::ZeroMatrix)));
        assert!(matches!(
            optical_factors(&CMatrix::zeros(3, 3)),
            Err(Error::ZeroMatrix)
        ));
    }

    #[test]
    fn expanded_three_vertex_p() {
        let m = fixtures::p3_expanded();
        let f = svd(&m).unwrap();
        check_factors(&m, &f);
        let mut scaled: Vec<f64> = f.d.iter().map(|x| x * f.scale).collect();
        scaled.sort_by(f64::total_cmp);
        let s2 = std::f64::consts::SQRT_2;
        for (a, b) in scaled.iter().zip([s2, s2, 2.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_rows_skip_the_left_factor() {
        let m = fixtures::p3_expanded();
        let f = optical_factors(&m).unwrap();
        check_factors(&m, &f);
        let (scale, d, u) = fixtures::p3_expanded_factors();
        assert_eq!(f.u1, CMatrix::identity(4, 4));
        assert!((f.scale - scale).abs() < 1e-14);
        for (a, b) in f.d.iter().zip(&d) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(frobenius(&(&f.u2 - u)) < 1e-14);
    }

    #[test]
    fn orthogonal_columns_skip_the_right_factor() {
        let m = fixtures::p3_inv_scaled_expanded();
        let f = optical_factors(&m).unwrap();
        check_factors(&m, &f);
        let (scale, u, d) = fixtures::p3_inv_expanded_factors();
        assert_eq!(f.u2, CMatrix::identity(4, 4));
        assert!((f.scale - scale).abs() < 1e-13);
        for (a, b) in f.d.iter().zip(&d) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(frobenius(&(&f.u1 - u)) < 1e-14);
    }

    #[test]
    fn four_vertex_singular_values() {
        let f = svd(&fixtures::p4()).unwrap();
        check_factors(&fixtures::p4(), &f);
        assert!((f.scale - 3.2566).abs() < 5e-5);
        let want = [1.0, 0.7026, 0.5657, 0.2684];
        for (a, b) in f.d.iter().zip(want) {
            assert!((a - b).abs() < 5e-5, "{a} vs {b}");
        }
    }

    #[test]
    fn general_matrix_takes_the_svd_path() {
        let m = real_matrix(2, 2, &[1., 2., 3., 4.]);
        let f = optical_factors(&m).unwrap();
        check_factors(&m, &f);
        assert!(f.d[0] == 1.0 && f.d[1] < 1.0);
    }

    proptest! {
        #[test]
        fn random_real_round_trip(entries in proptest::collection::vec(-5.0f64..5.0, 16)) {
            let m = linalg::complexify(&DMatrix::from_row_slice(4, 4, &entries));
            prop_assume!(frobenius(&m) > 1e-6);
            let f = svd(&m).unwrap();
            prop_assert!(frobenius(&(f.reassemble() - &m)) <= 1e-10 * frobenius(&m));
            prop_assert!(f.d.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
