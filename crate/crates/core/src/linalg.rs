//! Dense complex matrix helpers shared by the spectral, compiler and simulator
//! modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Promotes a real matrix to a complex one.
pub fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Builds a complex matrix from row-major real entries.
pub fn real_matrix(n: usize, m: usize, rows: &[f64]) -> CMatrix {
    assert_eq!(rows.len(), n * m, "row-major data has the wrong length");
    CMatrix::from_fn(n, m, |i, j| Complex64::new(rows[i * m + j], 0.0))
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `min_φ ‖a − e^{iφ} b‖_F`.
///
/// The minimizing phase aligns `b` with `a`: `e^{iφ} = ⟨b, a⟩/|⟨b, a⟩|`.
pub fn phase_invariant_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let inner: Complex64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if inner.norm() > 0.0 {
        inner / inner.norm()
    } else {
        ONE
    };
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `‖U†U − I‖_F`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.ncols();
    frobenius(&(u.adjoint() * u - CMatrix::identity(n, n)))
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// Serves as the dense reference for `e^{−iHt}`; it never looks at an
/// eigendecomposition.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let one_norm = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if one_norm > 0.5 {
        (one_norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * Complex64::new(0.5f64.powi(squarings), 0.0);

    let mut result = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled * Complex64::new(1.0 / k as f64, 0.0);
        result += &term;
        if frobenius(&term) < 1e-18 * frobenius(&result) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `e^{−iHt}` from the dense exponential.
pub fn evolution_reference(h: &CMatrix, t: f64) -> CMatrix {
    expm(&(h * Complex64::new(0.0, -t)))
}

/// Haar-distributed random unitary (QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal divided out).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) / 2f64.sqrt()
    });
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-distributed random real orthogonal matrix.
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let (mut q, r) = g.qr().unpack();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// Multiplies column `j` of `m` by the phase that makes its largest-magnitude
/// entry real and positive. Returns the phase that was divided out.
pub(crate) fn canonical_column_phase(m: &mut CMatrix, j: usize) -> Complex64 {
    let mut best = ZERO;
    let mut best_norm = -1.0;
    for i in 0..m.nrows() {
        let z = m[(i, j)];
        // strict comparison with a small margin keeps the lowest index on ties
        if z.norm() > best_norm + 1e-12 {
            best = z;
            best_norm = z.norm();
        }
    }
    if best_norm <= 0.0 {
        return ONE;
    }
    let phase = best / best_norm;
    for i in 0..m.nrows() {
        m[(i, j)] /= phase;
    }
    phase
}

/// Serde adapter: complex matrices as row-major arrays of `[re, im]` pairs.
pub mod complex_matrix_serde {
    use super::CMatrix;
    use num_complex::Complex64;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| [m[(i, j)].re, m[(i, j)].im])
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        Ok(CMatrix::from_fn(nrows, ncols, |i, j| {
            Complex64::new(rows[i][j][0], rows[i][j][1])
        }))
    }
}

/// Serde adapter: complex vectors as arrays of `[re, im]` pairs.
pub mod complex_vec_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|z| [z.re, z.im])
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        Ok(Vec::<[f64; 2]>::deserialize(d)?
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect())
    }
}
