use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::linalg::{self, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionMode {
    /// Hand-made embeddings of the three-vertex eigenbasis and its inverse.
    Fixture,
    /// `M` in the top-left block and a 1 at the last diagonal entry.
    GenericPad,
}

/// A 4×4 embedding plus the modes whose photons are discarded after it.
#[derive(Debug, Clone)]
pub struct Expanded {
    pub matrix: CMatrix,
    pub blocked: Vec<usize>,
}

/// Embeds a 3×3 matrix into four dimensions.
///
/// In either mode the top-left block equals `M` and mode 3 is blocked.
pub fn expand_dimension(m: &CMatrix, mode: ExpansionMode) -> Result<Expanded> {
    if m.shape() != (3, 3) {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: m.nrows(),
        });
    }
    if !linalg::is_finite(m) {
        return Err(Error::NonFinite);
    }
    let matrix = match mode {
        ExpansionMode::GenericPad => {
            let mut e = CMatrix::identity(4, 4);
            e.view_mut((0, 0), (3, 3)).copy_from(m);
            e
        }
        ExpansionMode::Fixture => {
            let candidates = [
                (fixtures::p3(), fixtures::p3_expanded()),
                (
                    fixtures::p3_inv_scaled(),
                    fixtures::p3_inv_scaled_expanded(),
                ),
            ];
            candidates
                .iter()
                .find_map(|(small, big)| {
                    positive_multiple(m, small).map(|c| big * linalg::ONE.scale(c))
                })
                .ok_or(Error::NotAFixture)?
        }
    };
    Ok(Expanded {
        matrix,
        blocked: vec![3],
    })
}

/// `c > 0` with `m = c·f`, if one exists.
fn positive_multiple(m: &CMatrix, f: &CMatrix) -> Option<f64> {
    let inner: num_complex::Complex64 = f.iter().zip(m.iter()).map(|(a, b)| a.conj() * b).sum();
    let c = inner.re / f.norm_squared();
    let tol = 1e-9 * linalg::frobenius(m).max(1.0);
    (c > 0.0 && linalg::frobenius(&(m - f * linalg::ONE.scale(c))) <= tol).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;

    #[test]
    fn identity_pads_to_identity() {
        let e = expand_dimension(&CMatrix::identity(3, 3), ExpansionMode::GenericPad).unwrap();
        assert_eq!(e.matrix, CMatrix::identity(4, 4));
        assert_eq!(e.blocked, vec![3]);
    }

    #[test]
    fn fixture_eigenbasis() {
        let e = expand_dimension(&fixtures::p3(), ExpansionMode::Fixture).unwrap();
        assert_eq!(e.matrix, fixtures::p3_expanded());
    }

    #[test]
    fn fixture_inverse_up_to_scale() {
        let half = fixtures::p3_inv_scaled() * linalg::ONE.scale(0.5);
        let e = expand_dimension(&half, ExpansionMode::Fixture).unwrap();
        let want = fixtures::p3_inv_scaled_expanded() * linalg::ONE.scale(0.5);
        assert!(frobenius(&(e.matrix - want)) < 1e-15);
    }

    #[test]
    fn non_fixture_is_rejected() {
        let m = CMatrix::identity(3, 3);
        assert!(matches!(
            expand_dimension(&m, ExpansionMode::Fixture),
            Err(Error::NotAFixture)
        ));
        let neg = fixtures::p3() * linalg::ONE.scale(-1.0);
        assert!(matches!(
            expand_dimension(&neg, ExpansionMode::Fixture),
            Err(Error::NotAFixture)
        ));
        assert!(expand_dimension(&CMatrix::identity(4, 4), ExpansionMode::GenericPad).is_err());
    }

    #[test]
    fn generic_pad_keeps_block() {
        let m = fixtures::p3();
        let e = expand_dimension(&m, ExpansionMode::GenericPad).unwrap();
        assert_eq!(e.matrix.view((0, 0), (3, 3)).into_owned(), m);
        assert_eq!(e.matrix[(3, 3)], linalg::ONE);
        assert_eq!(e.matrix[(0, 3)], linalg::ZERO);
    }
}
