use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError, ZERO};
use crate::config::Tolerances;

struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

fn factorize(a: &ComplexMatrix) -> Result<Lu, LinalgError> {
    let n = a.dim();
    let mut lu = a.data().to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let (pivot_row, pivot_abs) = (col..n)
            .map(|r| (r, lu[r * n + col].norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_abs == 0.0 {
            return Err(LinalgError::Singular {
                sigma_min: 0.0,
                floor: 0.0,
            });
        }
        if pivot_row != col {
            for j in 0..n {
                lu.swap(col * n + j, pivot_row * n + j);
            }
            perm.swap(col, pivot_row);
        }
        let pivot = lu[col * n + col];
        for r in col + 1..n {
            let m = lu[r * n + col] / pivot;
            lu[r * n + col] = m;
            if m == ZERO {
                continue;
            }
            for j in col + 1..n {
                let t = lu[col * n + j];
                lu[r * n + j] -= m * t;
            }
        }
    }
    Ok(Lu { n, lu, perm })
}

impl Lu {
    fn solve_in_place(&self, b: &mut [Complex64]) {
        let n = self.n;
        let permuted: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        b.copy_from_slice(&permuted);
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.lu[i * n + k] * b[k];
            }
            b[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..n {
                s -= self.lu[i * n + k] * b[k];
            }
            b[i] = s / self.lu[i * n + i];
        }
    }

    fn solve_matrix(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        let mut col = vec![ZERO; n];
        for j in 0..n {
            for i in 0..n {
                col[i] = b[(i, j)];
            }
            self.solve_in_place(&mut col);
            for i in 0..n {
                out[(i, j)] = col[i];
            }
        }
        out
    }
}

/// Inverse by LU with partial pivoting.
///
/// Rejects the matrix when `1 / ||A^{-1}||_F`, a lower estimate of the
/// smallest singular value, falls below `inverse_floor * ||A||_F`.
pub fn mat_inverse(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix, LinalgError> {
    let n = a.dim();
    let floor = tol.inverse_floor * a.norm_fro();
    let lu = factorize(a).map_err(|_| LinalgError::Singular {
        sigma_min: 0.0,
        floor,
    })?;
    let inv = lu.solve_matrix(&ComplexMatrix::identity(n));
    let sigma_min = 1.0 / inv.norm_fro();
    if !inv.is_finite() || !(sigma_min >= floor) {
        return Err(LinalgError::Singular { sigma_min, floor });
    }
    Ok(inv)
}

/// Solves `A X = B`. Only exact zero pivots are rejected; callers that need a
/// conditioning guarantee go through [`mat_inverse`].
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    if a.dim() != b.dim() {
        return Err(LinalgError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(factorize(a)?.solve_matrix(b))
}

/// Solves `T X = B` for upper triangular `T` by back substitution.
pub fn solve_upper_triangular(
    t: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<ComplexMatrix, LinalgError> {
    let n = t.dim();
    if n != b.dim() {
        return Err(LinalgError::DimensionMismatch {
            left: n,
            right: b.dim(),
        });
    }
    if (0..n).any(|i| t[(i, i)] == ZERO) {
        return Err(LinalgError::Singular {
            sigma_min: 0.0,
            floor: 0.0,
        });
    }
    let mut x = ComplexMatrix::zeros(n);
    for j in 0..n {
        for i in (0..n).rev() {
            let mut s = b[(i, j)];
            for k in i + 1..n {
                s -= t[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = s / t[(i, i)];
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn inverse_examples() {
        let tol = Tolerances::default();
        let i = ComplexMatrix::identity(3);
        assert_eq!(mat_inverse(&i, &tol).unwrap(), i);

        let d = ComplexMatrix::from_diag(&[c(2.0), c(4.0)]);
        assert_eq!(
            mat_inverse(&d, &tol).unwrap(),
            ComplexMatrix::from_diag(&[c(0.5), c(0.25)])
        );

        let u = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        assert_eq!(
            mat_inverse(&u, &tol).unwrap(),
            ComplexMatrix::from_real_rows(&[[1.0, -1.0], [0.0, 1.0]])
        );
    }

    #[test]
    fn singular_and_nearly_singular_rejected() {
        let tol = Tolerances::default();
        let s = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(mat_inverse(&s, &tol), Err(LinalgError::Singular { .. })));
        let near = ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 1e-15]]);
        assert!(matches!(mat_inverse(&near, &tol), Err(LinalgError::Singular { .. })));
    }

    #[test]
    fn inverse_residual_small() {
        let tol = Tolerances::default();
        let a = ComplexMatrix::from_fn(5, |i, j| {
            Complex64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64)
        })
        .shift(c(4.0));
        let inv = mat_inverse(&a, &tol).unwrap();
        assert!((&a * &inv).dist_fro(&ComplexMatrix::identity(5)) < 1e-13);
    }

    #[test]
    fn triangular_solve_matches_general() {
        let t = ComplexMatrix::from_rows(&[
            [c(2.0), Complex64::new(1.0, 1.0), c(-1.0)],
            [c(0.0), Complex64::new(0.0, 3.0), c(0.5)],
            [c(0.0), c(0.0), c(-1.5)],
        ]);
        let b = ComplexMatrix::from_fn(3, |i, j| Complex64::new(i as f64, j as f64 + 1.0));
        let x1 = solve_upper_triangular(&t, &b).unwrap();
        let x2 = solve(&t, &b).unwrap();
        assert!(x1.dist_fro(&x2) < 1e-14);
        assert!((&t * &x1).dist_fro(&b) < 1e-14);
    }
}
