//! Complex Schur decomposition `A = Q T Q*`.
//!
//! Householder reduction to upper Hessenberg form, then single-shift QR
//! iteration with Wilkinson shifts and Givens rotations. Eigenvalues are left
//! in whatever order the iteration deflates them.

use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError, ZERO};
use crate::config::Tolerances;

/// Total QR sweeps allowed per unit of dimension.
const ITERATIONS_PER_DIM: usize = 100;
/// An exceptional shift is used after this many sweeps without deflation.
const EXCEPTIONAL_EVERY: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SchurForm {
    /// Unitary factor.
    pub q: ComplexMatrix,
    /// Upper triangular factor; its diagonal holds the eigenvalues.
    pub t: ComplexMatrix,
    pub source_dim: usize,
}

impl SchurForm {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.t.diag()
    }

    /// `||q q* - I||_F`.
    pub fn unitarity_residual(&self) -> f64 {
        (&self.q * &self.q.conj_transpose()).dist_fro(&ComplexMatrix::identity(self.source_dim))
    }

    /// `||q t q* - a||_F`, absolute.
    pub fn reconstruction_residual(&self, a: &ComplexMatrix) -> f64 {
        self.reassemble(&self.t).dist_fro(a)
    }

    /// `q m q*` for a matrix `m` expressed in the Schur basis.
    pub fn reassemble(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.q * m) * &self.q.conj_transpose()
    }

    /// `q* m q`, the inverse of [`SchurForm::reassemble`].
    pub fn to_schur_basis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.q.conj_transpose() * m) * &self.q
    }
}

pub fn schur_decompose(a: &ComplexMatrix, tol: &Tolerances) -> Result<SchurForm, LinalgError> {
    let n = a.dim();
    if !a.is_finite() {
        let k = a.data().iter().position(|z| !z.is_finite()).unwrap_or(0);
        return Err(LinalgError::NonFinite {
            row: k / n,
            col: k % n,
        });
    }
    if a.is_upper_triangular() {
        return Ok(SchurForm {
            q: ComplexMatrix::identity(n),
            t: a.clone(),
            source_dim: n,
        });
    }

    let (mut h, mut q) = hessenberg(a);
    qr_iterate(&mut h, &mut q, tol).map_err(|iterations| LinalgError::NoConvergence {
        iterations,
        matrix: Box::new(a.clone()),
    })?;
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(SchurForm {
        q,
        t: h,
        source_dim: n,
    })
}

/// Eigenvalues as the diagonal of the Schur factor.
pub fn eigenvalues(a: &ComplexMatrix, tol: &Tolerances) -> Result<Vec<Complex64>, LinalgError> {
    Ok(schur_decompose(a, tol)?.eigenvalues())
}

fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.dim();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        let norm_x = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm_x;
        for i in k + 1..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for vi in v.iter_mut().take(n).skip(k + 1) {
            *vi /= vnorm;
        }

        // h <- (I - 2vv*) h
        for j in 0..n {
            let s: Complex64 = (k + 1..n).map(|i| v[i].conj() * h[(i, j)]).sum();
            for i in k + 1..n {
                h[(i, j)] -= v[i] * s * 2.0;
            }
        }
        // h <- h (I - 2vv*), q <- q (I - 2vv*)
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let s: Complex64 = (k + 1..n).map(|j| m[(i, j)] * v[j]).sum();
                for j in k + 1..n {
                    m[(i, j)] -= s * v[j].conj() * 2.0;
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

#[derive(Clone, Copy)]
struct Givens {
    c: Complex64,
    s: Complex64,
}

impl Givens {
    /// Rotation `G` with `G [a; b] = [r; 0]`.
    fn zeroing(a: Complex64, b: Complex64) -> Option<Self> {
        let r = a.norm().hypot(b.norm());
        if r == 0.0 || b == ZERO {
            return None;
        }
        Some(Self { c: a / r, s: b / r })
    }

    fn apply_left(&self, h: &mut ComplexMatrix, k: usize, cols: std::ops::Range<usize>) {
        for j in cols {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = self.c.conj() * x + self.s.conj() * y;
            h[(k + 1, j)] = -self.s * x + self.c * y;
        }
    }

    /// Multiplies columns `k, k+1` by `G*` on the right.
    fn apply_right(&self, m: &mut ComplexMatrix, k: usize, rows: std::ops::Range<usize>) {
        for i in rows {
            let x = m[(i, k)];
            let y = m[(i, k + 1)];
            m[(i, k)] = x * self.c + y * self.s;
            m[(i, k + 1)] = -x * self.s.conj() + y * self.c.conj();
        }
    }
}

/// Wilkinson shift: eigenvalue of the trailing 2x2 block closer to its last
/// diagonal entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Drives `h` (upper Hessenberg) to upper triangular form, accumulating the
/// rotations into `z`. Returns the iteration count on failure.
fn qr_iterate(h: &mut ComplexMatrix, z: &mut ComplexMatrix, tol: &Tolerances) -> Result<(), usize> {
    let n = h.dim();
    let cap = ITERATIONS_PER_DIM * n;
    let h_norm = h.norm_fro();
    let abs_floor = f64::EPSILON * 1e-3 * h_norm;
    let mut rotations: Vec<Option<Givens>> = vec![None; n];
    let mut iterations = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= (tol.deflation * local).max(abs_floor) {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if iterations >= cap {
            return Err(iterations);
        }
        iterations += 1;
        since_deflation += 1;

        let shift = if since_deflation % EXCEPTIONAL_EVERY == 0 {
            h[(hi, hi)] + Complex64::new(1.5 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        for k in lo..hi {
            rotations[k] = Givens::zeroing(h[(k, k)], h[(k + 1, k)]);
            if let Some(g) = rotations[k] {
                g.apply_left(h, k, k..n);
                h[(k + 1, k)] = ZERO;
            }
        }
        for k in lo..hi {
            if let Some(g) = rotations[k] {
                g.apply_right(h, k, 0..(k + 2).min(n));
                g.apply_right(z, k, 0..n);
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }
    Ok(())
}
