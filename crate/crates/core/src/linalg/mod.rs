//! Dense complex matrices and the factorizations built on them.
//!
//! Storage is row-major: entry `(i, j)` of an `n x n` matrix lives at
//! `data[i * n + j]`. Matrices are small (desk scale, `n <= 64`), so every
//! routine is a straightforward dense loop.

mod json;
mod lu;
mod schur;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub use json::MatrixJson;
pub use lu::{mat_inverse, solve, solve_upper_triangular};
pub use schur::{eigenvalues, schur_decompose, SchurForm};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix dimension must be positive")]
    EmptyMatrix,
    #[error("expected {expected} entries for the given dimension, got {got}")]
    InvalidData { expected: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular to tolerance (smallest singular value estimate {sigma_min:e}, floor {floor:e})")]
    Singular { sigma_min: f64, floor: f64 },
    #[error("QR iteration did not converge after {iterations} iterations on {matrix}")]
    NoConvergence {
        iterations: usize,
        matrix: Box<ComplexMatrix>,
    },
}

/// Dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if n == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        if data.len() != n * n {
            return Err(LinalgError::InvalidData {
                expected: n * n,
                got: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !z.is_finite()) {
            return Err(LinalgError::NonFinite {
                row: k / n,
                col: k % n,
            });
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, ONE)
    }

    /// `c * I`.
    pub fn scalar(n: usize, c: Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from rows; panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), n, "from_rows requires a square layout");
            data.extend_from_slice(row);
        }
        Self { n, data }
    }

    /// Real matrix from rows of `f64`.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn diag(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.is_finite())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    /// `self + c * I`.
    pub fn shift(&self, c: Complex64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] += c;
        }
        m
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance `||self - other||_F`; panics on dimension mismatch.
    pub fn dist_fro(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest modulus strictly below the diagonal.
    pub fn max_below_diag(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 1..self.n {
            for j in 0..i {
                m = m.max(self[(i, j)].norm());
            }
        }
        m
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.max_below_diag() == 0.0
    }

    /// Checked product; the `*` operator panics on mismatch instead.
    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        check_dims(self, other)?;
        Ok(mul_unchecked(self, other))
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Leading principal `k x k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        assert!(k <= self.n);
        Self::from_fn(k, |i, j| self[(i, j)])
    }

    /// Embeds `self` as the leading block of a larger matrix with given last
    /// column (above the corner) and corner entry: `[[self, col], [0, corner]]`.
    pub fn bordered(&self, col: &[Complex64], corner: Complex64) -> Self {
        assert_eq!(col.len(), self.n);
        let m = self.n + 1;
        Self::from_fn(m, |i, j| match (i < self.n, j < self.n) {
            (true, true) => self[(i, j)],
            (true, false) => col[i],
            (false, false) => corner,
            (false, true) => ZERO,
        })
    }

    /// `u * self * u^{-1}` with a precomputed inverse.
    pub fn similarity(&self, u: &Self, u_inv: &Self) -> Self {
        &(u * self) * u_inv
    }
}

fn check_dims(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<(), LinalgError> {
    if a.n != b.n {
        return Err(LinalgError::DimensionMismatch {
            left: a.n,
            right: b.n,
        });
    }
    Ok(())
}

fn mul_unchecked(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.n;
    let mut out = vec![ZERO; n * n];
    for i in 0..n {
        let row = &mut out[i * n..(i + 1) * n];
        for k in 0..n {
            let aik = a.data[i * n + k];
            if aik == ZERO {
                continue;
            }
            let brow = &b.data[k * n..(k + 1) * n];
            for (o, &bkj) in row.iter_mut().zip(brow) {
                *o += aik * bkj;
            }
        }
    }
    ComplexMatrix { n, data: out }
}

/// Checked matrix product.
pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    a.matmul(b)
}

/// `ab - ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    check_dims(a, b)?;
    Ok(&mul_unchecked(a, b) - &mul_unchecked(b, a))
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "matrix product dimension mismatch");
        mul_unchecked(self, rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "matrix sum dimension mismatch");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "matrix difference dimension mismatch");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|z| -z).collect(),
        }
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", crate::scalar::format_complex(self[(i, j)]))?;
            }
        }
        write!(f, "]")
    }
}
