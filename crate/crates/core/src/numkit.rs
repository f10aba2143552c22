//! Small dense linear algebra kernel.
//!
//! Everything here works on row-major `f64` storage and is sized for the
//! desk-scale dimensions used by the rest of the crate (at most 16 for
//! symmetric eigenproblems). The eigensolver is cyclic Jacobi, which is slow
//! asymptotically but accurate to a few ulps at these sizes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest dimension accepted by [`SymMatrix`].
pub const MAX_SYM_DIM: usize = 16;

/// Jacobi sweep cap before reporting non-convergence.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues in `[-PSD_TOLERANCE, 0)` are clamped to zero by [`psd_power`].
pub const PSD_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("symmetric matrix of dimension {0} exceeds the supported maximum {MAX_SYM_DIM}")]
    TooLarge(usize),
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("determinant {det:e} is not positive")]
    NonPositiveDeterminant { det: f64 },
}

/// Dense real matrix of arbitrary shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl GenMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{rows}x{cols} matrix from {} entries",
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self, LinalgError> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![1.0; n])
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in d.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn matmul(&self, other: &GenMatrix) -> Result<GenMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `‖self − other‖_max`.
    pub fn max_abs_diff(&self, other: &GenMatrix) -> f64 {
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Gram matrix `M Mᵀ`.
    pub fn gram(&self) -> SymMatrix {
        let n = self.rows;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v: f64 = self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b).sum();
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        SymMatrix { dim: n, data }
    }

    /// Determinant by LU elimination with partial pivoting.
    pub fn det(&self) -> Result<f64, LinalgError> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
                .unwrap();
            if a[pivot * n + col] == 0.0 {
                return Ok(0.0);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                if f != 0.0 {
                    for j in col..n {
                        a[r * n + j] -= f * a[col * n + j];
                    }
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<GenMatrix, LinalgError> {
        self.require_square()?;
        let n = self.rows;
        let scale = self.max_abs();
        if scale == 0.0 {
            return Err(LinalgError::Singular);
        }
        let mut a = self.data.clone();
        let mut inv = GenMatrix::identity(n).data;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
                .unwrap();
            if a[pivot * n + col].abs() <= 1e-14 * scale {
                return Err(LinalgError::Singular);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                    inv.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= p;
                inv[col * n + j] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f != 0.0 {
                    for j in 0..n {
                        a[r * n + j] -= f * a[col * n + j];
                        inv[r * n + j] -= f * inv[col * n + j];
                    }
                }
            }
        }
        Ok(GenMatrix { rows: n, cols: n, data: inv })
    }

    /// Solve `self · x = b` for square `self`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
        Ok(self.inverse()?.mul_vec(b))
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinalgError::DimensionMismatch(format!(
                "expected square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }
}

/// Symmetric matrix, stored densely and symmetrized on construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GenMatrix", into = "GenMatrix")]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl TryFrom<GenMatrix> for SymMatrix {
    type Error = LinalgError;

    fn try_from(m: GenMatrix) -> Result<Self, Self::Error> {
        SymMatrix::from_gen(&m)
    }
}

impl From<SymMatrix> for GenMatrix {
    fn from(s: SymMatrix) -> Self {
        s.to_gen()
    }
}

impl SymMatrix {
    /// Builds `(M + Mᵀ)/2` from row-major data so that `S[i][j] == S[j][i]`
    /// holds bit-for-bit.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if dim > MAX_SYM_DIM {
            return Err(LinalgError::TooLarge(dim));
        }
        let m = GenMatrix::new(dim, dim, data)?;
        let mut out = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = if i == j { m.get(i, i) } else { 0.5 * (m.get(i, j) + m.get(j, i)) };
                out[i * dim + j] = v;
                out[j * dim + i] = v;
            }
        }
        Ok(Self { dim, data: out })
    }

    pub fn from_gen(m: &GenMatrix) -> Result<Self, LinalgError> {
        m.require_square()?;
        Self::new(m.rows(), m.as_slice().to_vec())
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![1.0; n])
    }

    pub fn diag(d: &[f64]) -> Self {
        let g = GenMatrix::diag(d);
        Self { dim: d.len(), data: g.data }
    }

    pub fn zeros(n: usize) -> Self {
        Self { dim: n, data: vec![0.0; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Adds `w · u uᵀ` in place.
    pub fn add_outer(&mut self, w: f64, u: &[f64]) {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                self.data[i * n + j] += w * u[i] * u[j];
            }
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn to_gen(&self) -> GenMatrix {
        GenMatrix { rows: self.dim, cols: self.dim, data: self.data.clone() }
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Eigen-decomposition `S = Q Λ Qᵀ` with eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns.
    pub vectors: GenMatrix,
}

impl SymEigen {
    /// `Q f(Λ) Qᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v: f64 =
                    (0..n).map(|k| self.vectors.get(i, k) * fv[k] * self.vectors.get(j, k)).sum();
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        SymMatrix { dim: n, data }
    }
}

/// Cyclic Jacobi eigensolver.
pub fn sym_eig(s: &SymMatrix) -> Result<SymEigen, LinalgError> {
    let n = s.dim();
    let mut a = s.data.clone();
    let mut v = GenMatrix::identity(n).data;
    let threshold = 1e-14 * s.frobenius();
    let off = |a: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += a[i * n + j] * a[i * n + j];
                }
            }
        }
        acc.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { sweeps, residual: off(&a) });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - sn * akq;
                    a[k * n + q] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - sn * aqk;
                    a[q * n + k] = sn * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - sn * vkq;
                    v[k * n + q] = sn * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = GenMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, new_col, v[r * n + old_col]);
        }
    }
    Ok(SymEigen { values, vectors })
}

/// `S^p` for positive semidefinite `S` (positive definite when `p < 0`).
pub fn psd_power(s: &SymMatrix, p: f64) -> Result<SymMatrix, LinalgError> {
    let eig = sym_eig(s)?;
    let top = eig.values.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let tol = PSD_TOLERANCE * top.max(1.0);
    if let Some(&bad) = eig.values.iter().find(|&&l| l < -tol) {
        return Err(LinalgError::NotPsd { eigenvalue: bad });
    }
    if p < 0.0 && eig.values.iter().any(|&l| l <= 1e-14 * top || l <= 0.0) {
        return Err(LinalgError::Singular);
    }
    Ok(eig.reconstruct_with(|l| if l <= 0.0 { if p == 0.0 { 1.0 } else { 0.0 } } else { l.powf(p) }))
}

/// `det(M)^{-1/n} · M`, which has determinant one.
pub fn normalize_det_one(m: &GenMatrix) -> Result<GenMatrix, LinalgError> {
    let det = m.det()?;
    if !(det > 0.0) {
        return Err(LinalgError::NonPositiveDeterminant { det });
    }
    Ok(m.scale(det.powf(-1.0 / m.rows() as f64)))
}

/// Sum of singular values, via the eigenvalues of `MᵀM`.
pub fn schatten1(m: &GenMatrix) -> Result<f64, LinalgError> {
    let mtm = m.transpose().gram();
    let eig = sym_eig(&mtm)?;
    Ok(eig.values.iter().map(|&l| l.max(0.0).sqrt()).sum())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
