//! Small dense Hermitian linear algebra.
//!
//! Matrices here are tiny (at most [`MAX_DIM`] rows), so everything is
//! stored row-major in a flat `Vec` and solved with cyclic Jacobi sweeps.
//! The eigenvalue path is what production code uses to decide positive
//! semidefiniteness; [`principal_minors`] exists as an independent check.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::{StateTuple, StateVector};

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 16;

/// Largest dimension accepted by [`principal_minors`].
pub const MAX_MINOR_DIM: usize = 6;

/// Allowed deviation from exact Hermitian symmetry at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Default relative slack for [`is_psd`].
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

/// Eigenvalues below this are treated as zero when detecting rank.
pub const RANK_TOL: f64 = 1e-9;

const JACOBI_REL_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense `n x n` complex Hermitian matrix.
///
/// Entries are symmetrized on construction: the stored matrix is exactly
/// Hermitian and the diagonal is exactly real.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        if entries.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let mut data = entries;
        for i in 0..dim {
            for j in i..dim {
                let upper = data[i * dim + j];
                let lower = data[j * dim + i];
                let deviation = (upper - lower.conj()).norm();
                if deviation > HERMITIAN_TOL {
                    return Err(Error::NonHermitianInput {
                        row: i,
                        col: j,
                        deviation,
                    });
                }
                let avg = (upper + lower.conj()) * 0.5;
                if i == j {
                    data[i * dim + i] = Complex64::new(avg.re, 0.0);
                } else {
                    data[i * dim + j] = avg;
                    data[j * dim + i] = avg.conj();
                }
            }
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self::new(dim, entries)
    }

    /// Builds a matrix from its rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
        }
        Self::new(dim, rows.iter().flatten().copied().collect())
    }

    /// Builds a real symmetric matrix.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i].re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.data[i * self.dim + i].re)
            .collect()
    }

    pub fn max_diagonal(&self) -> f64 {
        self.diagonal()
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when every imaginary part is below [`HERMITIAN_TOL`].
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im.abs() < HERMITIAN_TOL)
    }

    /// Checks `|m_ii - 1| <= tol` for every `i`.
    pub fn check_unit_diagonal(&self, tol: f64) -> Result<()> {
        for (index, value) in self.diagonal().into_iter().enumerate() {
            if (value - 1.0).abs() > tol {
                return Err(Error::NotUnitDiagonal { index, value });
            }
        }
        Ok(())
    }

    /// Real parts with exact zeros in place of the imaginary parts.
    fn real_part(&self) -> Self {
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| Complex64::new(z.re, 0.0))
                .collect(),
        }
    }

    fn submatrix(&self, mask: usize) -> Vec<Complex64> {
        let idx: Vec<usize> = (0..self.dim).filter(|i| mask & (1 << i) != 0).collect();
        let mut out = Vec::with_capacity(idx.len() * idx.len());
        for &i in &idx {
            for &j in &idx {
                out.push(self.get(i, j));
            }
        }
        out
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.data[row * self.dim + col]
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HermitianMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigenvalues of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
}

/// Eigenvalues together with orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    /// `vectors[k]` is the eigenvector of `values[k]`.
    pub vectors: Vec<Vec<Complex64>>,
}

pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> EigenResult {
    let eigenvalues = eigh(m).values;
    let min_eigenvalue = eigenvalues[0];
    EigenResult {
        eigenvalues,
        min_eigenvalue,
    }
}

/// Cyclic Jacobi eigendecomposition.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies an ordinary real Jacobi rotation. A real input
/// therefore only ever sees real rotations and yields real eigenvectors.
pub fn eigh(m: &HermitianMatrix) -> Eigendecomposition {
    let n = m.dim;
    let mut a = m.data.clone();
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }

    let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = JACOBI_REL_TOL * norm;

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = off_diagonal_norm(&a, n);
        if off == 0.0 || off < threshold {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|row| v[row * n + k]).collect())
        .collect();
    Eigendecomposition { values, vectors }
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase_conj = (apq / g).conj();
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;

    let theta = (aqq - app) / (2.0 * g);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    // U = diag(1, e^{-i arg a_pq}) * [[c, s], [-s, c]] on the (p, q) plane.
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = phase_conj * (-s);
    let u_qq = phase_conj * c;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * u_pp + akq * u_qp;
        a[k * n + q] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[q * n + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * u_pp + vkq * u_qp;
        v[k * n + q] = vkp * u_pq + vkq * u_qq;
    }
}

/// True iff the smallest eigenvalue is at least `-tol * max(1, max diagonal)`.
pub fn is_psd(m: &HermitianMatrix, tol: f64) -> bool {
    let scale = m.max_diagonal().max(1.0);
    hermitian_eigenvalues(m).min_eigenvalue >= -tol * scale
}

/// Determinants of all nonempty principal submatrices.
///
/// Entry `k` holds the minor selected by the bitmask `k + 1`, so bit `i` of
/// the mask includes row and column `i`.
pub fn principal_minors(m: &HermitianMatrix) -> Result<Vec<f64>> {
    if m.dim > MAX_MINOR_DIM {
        return Err(Error::DimensionTooLarge {
            dim: m.dim,
            max: MAX_MINOR_DIM,
        });
    }
    Ok((1..1usize << m.dim)
        .map(|mask| {
            let sub = m.submatrix(mask);
            let k = mask.count_ones() as usize;
            determinant(sub, k).re
        })
        .collect())
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn determinant(mut a: Vec<Complex64>, n: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))
            .unwrap_or(col);
        if a[pivot * n + col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        let diag = a[col * n + col];
        det *= diag;
        for row in col + 1..n {
            let factor = a[row * n + col] / diag;
            for k in col..n {
                let sub = factor * a[col * n + k];
                a[row * n + k] -= sub;
            }
        }
    }
    det
}

/// Vectors `v_i` with `<v_i|v_j> = m_ij`, one per row of `m`.
///
/// Eigenvalues at or below `rank_tol` are dropped, so the ambient dimension
/// equals the detected rank. Each vector is renormalized to absorb the
/// dropped weight. Real input yields exactly real vectors.
pub(crate) fn psd_factor(m: &HermitianMatrix, rank_tol: f64) -> Vec<Vec<Complex64>> {
    let decomposition = if m.is_real() {
        eigh(&m.real_part())
    } else {
        eigh(m)
    };
    let kept: Vec<usize> = (0..m.dim)
        .filter(|&k| decomposition.values[k] > rank_tol)
        .collect();

    (0..m.dim)
        .map(|i| {
            let mut v: Vec<Complex64> = kept
                .iter()
                .map(|&k| decomposition.vectors[k][i].conj() * decomposition.values[k].sqrt())
                .collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.0 {
                v.iter_mut().for_each(|z| *z /= norm);
            }
            v
        })
        .collect()
}

/// Reconstructs a state tuple whose Gram matrix is `m`.
///
/// `m` must be PSD with unit diagonal (both within `1e-9`). The returned
/// states live in a space whose dimension is the numerical rank of `m`.
pub fn factor_states(m: &HermitianMatrix) -> Result<StateTuple> {
    m.check_unit_diagonal(RANK_TOL)?;
    let eig = hermitian_eigenvalues(m);
    if eig.min_eigenvalue < -DEFAULT_PSD_TOL * m.max_diagonal().max(1.0) {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min_eigenvalue,
        });
    }
    vectors_to_tuple(psd_factor(m, RANK_TOL))
}

pub(crate) fn vectors_to_tuple(vectors: Vec<Vec<Complex64>>) -> Result<StateTuple> {
    let states = vectors
        .into_iter()
        .map(StateVector::new)
        .collect::<Result<Vec<_>>>()?;
    StateTuple::new(states)
}
