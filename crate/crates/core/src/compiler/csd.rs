use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::optics::Jones;

/// `U = diag(l, l_prime) · S₄(θ₁, θ₂) · diag(r, r_prime)`.
#[derive(Debug, Clone)]
pub struct CsdFactors {
    pub l: Jones,
    pub l_prime: Jones,
    pub theta: [f64; 2],
    pub r: Jones,
    pub r_prime: Jones,
}

/// The interleaved cosine-sine mixer: modes 0 and 2 rotate by `θ₁`, modes 1
/// and 3 by `θ₂`. Off-pattern entries are exact zeros.
pub fn s4(theta1: f64, theta2: f64) -> CMatrix {
    let (s1, c1) = theta1.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    linalg::real_matrix(
        4,
        4,
        &[
            c1, 0., s1, 0., 0., c2, 0., s2, -s1, 0., c1, 0., 0., -s2, 0., c2,
        ],
    )
}

pub(crate) fn block_diag(a: &Jones, b: &Jones) -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m.view_mut((0, 0), (2, 2)).copy_from(a);
    m.view_mut((2, 2), (2, 2)).copy_from(b);
    m
}

impl CsdFactors {
    pub fn s4(&self) -> CMatrix {
        s4(self.theta[0], self.theta[1])
    }

    pub fn left(&self) -> CMatrix {
        block_diag(&self.l, &self.l_prime)
    }

    pub fn right(&self) -> CMatrix {
        block_diag(&self.r, &self.r_prime)
    }

    pub fn reassemble(&self) -> CMatrix {
        self.left() * self.s4() * self.right()
    }
}

fn block(u: &CMatrix, i: usize, j: usize) -> Jones {
    Matrix2::from_fn(|a, b| u[(i + a, j + b)])
}

/// 2+2 cosine-sine decomposition of a 4×4 unitary.
///
/// `A = L·C·R` comes from the SVD of the top-left block with cosines in
/// descending order. When both cosines coincide the left factor is the polar
/// factor of `A` and `R = I`. `L'` is read off `C_blk·R†`, completed to a
/// unitary where a sine vanishes, and `R'` then follows from the `B` and `D`
/// blocks. Both angles lie in `[0, π/2]`.
pub fn csd4(u: &CMatrix) -> Result<CsdFactors> {
    if u.shape() != (4, 4) {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: u.nrows(),
        });
    }
    if !linalg::is_finite(u) {
        return Err(Error::NonFinite);
    }
    let defect = linalg::unitarity_defect(u);
    if defect > 1e-10 {
        return Err(Error::NotUnitary(defect));
    }

    let a = block(u, 0, 0);
    let b = block(u, 0, 2);
    let c_blk = block(u, 2, 0);
    let d = block(u, 2, 2);

    let dec = a.svd(true, true);
    let (mut lu, mut rv) = (dec.u.expect("requested"), dec.v_t.expect("requested"));
    let mut sv = [dec.singular_values[0], dec.singular_values[1]];
    if sv[1] > sv[0] {
        lu.swap_columns(0, 1);
        rv.swap_rows(0, 1);
        sv.swap(0, 1);
    }
    let (l, r) = if sv[0] <= 1e-13 {
        (Jones::identity(), Jones::identity())
    } else if sv[0] - sv[1] <= 1e-13 {
        (lu * rv, Jones::identity())
    } else {
        (lu, rv)
    };

    let y0 = c_blk * r.adjoint();
    let s = [y0.column(0).norm(), y0.column(1).norm()];
    let theta = [s[0].atan2(sv[0]), s[1].atan2(sv[1])];

    let l_prime = if s[0].max(s[1]) <= 1e-14 {
        Jones::identity()
    } else {
        let k = if s[1] > s[0] { 1 } else { 0 };
        let other = 1 - k;
        let lead = -y0.column(k) / Complex64::new(s[k], 0.0);
        let mut comp = nalgebra::Vector2::new(-lead[1].conj(), lead[0].conj());
        if s[other] > 1e-14 {
            let overlap = comp.dotc(&(-y0.column(other)));
            if overlap.norm() > 0.0 {
                comp *= overlap / overlap.norm();
            }
        }
        let mut m = Jones::zeros();
        m.set_column(k, &lead);
        m.set_column(other, &comp);
        m
    };

    let lb = l.adjoint() * b;
    let ld = l_prime.adjoint() * d;
    let mut r_prime = Jones::zeros();
    for k in 0..2 {
        let (sk, ck) = theta[k].sin_cos();
        for j in 0..2 {
            r_prime[(k, j)] = lb[(k, j)] * sk + ld[(k, j)] * ck;
        }
    }

    Ok(CsdFactors {
        l,
        l_prime,
        theta,
        r,
        r_prime,
    })
}
