//! Dense real matrices for the small fixed sizes this model needs:
//! eigenvalues up to 6×6, linear solves up to 36×36, 2×2 and 4×4
//! determinants, Kronecker products.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::{Error, Result};

mod eigen;

pub use eigen::eigenvalues;

/// Largest row or column count a [`Mat`] may have.
pub const MAX_DIM: usize = 36;

/// Relative pivot threshold below which [`solve`] reports a singular system.
pub const PIVOT_EPS: f64 = 1e-14;

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 || rows > MAX_DIM || cols > MAX_DIM {
        return Err(Error::Dimension("rows and cols must be in 1..=36"));
    }
    Ok(())
}

impl Mat {
    /// Builds a matrix from row-major data. Entries must be finite.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_shape(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::Dimension("data length must equal rows * cols"));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Mat { rows, cols, data })
    }

    /// Builds a matrix from a slice of equal-length rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::Dimension("ragged rows"));
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Mat::new(rows.len(), cols, data)
    }

    /// All-zero matrix.
    ///
    /// # Panics
    /// If either dimension is outside `1..=MAX_DIM`.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        check_shape(rows, cols).expect("Mat::zeros shape");
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// n×n identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Mat::zeros(entries.len(), entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Matrix with entries `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// True for square matrices.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Whether every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Transpose.
    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Matrix product.
    pub fn matmul(&self, rhs: &Mat) -> Result<Mat> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension("matmul inner dimensions differ"));
        }
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension("matvec length differs from cols"));
        }
        Ok((0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Entrywise `self + rhs`.
    pub fn add(&self, rhs: &Mat) -> Result<Mat> {
        self.zip_with(rhs, |a, b| a + b)
    }

    /// Entrywise `self - rhs`.
    pub fn sub(&self, rhs: &Mat) -> Result<Mat> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Mat, f: impl Fn(f64, f64) -> f64) -> Result<Mat> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension("shapes differ"));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    /// `alpha * self`.
    pub fn scale(&self, alpha: f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| alpha * x).collect(),
        }
    }

    /// (A + Aᵀ)/2. Requires a square matrix.
    pub fn symmetrized(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Dimension("symmetrize needs a square matrix"));
        }
        Ok(Mat::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] + self[(j, i)])))
    }

    /// Copy of the block starting at (`r0`, `c0`) with the given shape.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<Mat> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(Error::Dimension("block out of range"));
        }
        check_shape(rows, cols)?;
        Ok(Mat::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)]))
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        self.data
            .chunks(self.cols)
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

/// √(Σ aᵢⱼ²).
pub fn frob_norm(a: &Mat) -> f64 {
    libm::sqrt(a.data.iter().map(|x| x * x).sum())
}

/// Kronecker product; the result must fit within `MAX_DIM`.
pub fn kron(a: &Mat, b: &Mat) -> Result<Mat> {
    let (rows, cols) = (a.rows * b.rows, a.cols * b.cols);
    check_shape(rows, cols)?;
    Ok(Mat::from_fn(rows, cols, |i, j| {
        a[(i / b.rows, j / b.cols)] * b[(i % b.rows, j % b.cols)]
    }))
}

/// Determinant: cofactor formula for 2×2, partial-pivot elimination
/// otherwise.
pub fn det(a: &Mat) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::Dimension("det needs a square matrix"));
    }
    let n = a.rows;
    match n {
        1 => return Ok(a[(0, 0)]),
        2 => return Ok(a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]),
        _ => {}
    }
    let mut m = a.data.clone();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| m[x * n + k].abs().total_cmp(&m[y * n + k].abs()))
            .unwrap_or(k);
        if m[p * n + k] == 0.0 {
            return Ok(0.0);
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = m[k * n + k];
        det *= pivot;
        for i in k + 1..n {
            let f = m[i * n + k] / pivot;
            if f != 0.0 {
                for j in k + 1..n {
                    m[i * n + j] -= f * m[k * n + j];
                }
            }
        }
    }
    Ok(det)
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
///
/// Reports [`Error::SingularSolve`] when a pivot is smaller than
/// `PIVOT_EPS·‖A‖∞`.
pub fn solve(a: &Mat, b: &[f64]) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::Dimension("solve needs a square matrix"));
    }
    let n = a.rows;
    if b.len() != n {
        return Err(Error::Dimension("rhs length differs from matrix size"));
    }
    let tiny = PIVOT_EPS * a.inf_norm();
    let mut m = a.data.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&r, &s| m[r * n + k].abs().total_cmp(&m[s * n + k].abs()))
            .unwrap_or(k);
        let pivot = m[p * n + k];
        if !(pivot.abs() >= tiny) || pivot == 0.0 {
            return Err(Error::SingularSolve);
        }
        if p != k {
            for j in k..n {
                m.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        for i in k + 1..n {
            let f = m[i * n + k] / pivot;
            if f == 0.0 {
                continue;
            }
            for j in k + 1..n {
                m[i * n + j] -= f * m[k * n + j];
            }
            x[i] -= f * x[k];
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| m[k * n + j] * x[j]).sum();
        x[k] = (x[k] - s) / m[k * n + k];
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSolve);
    }
    Ok(x)
}
