//! Scaling and squaring with the degree-13 diagonal Padé approximant.

use num_complex::Complex64;

use super::MatFunError;
use crate::config::Tolerances;
use crate::linalg::{solve, ComplexMatrix};

/// Largest 1-norm for which the unscaled degree-13 approximant is accurate
/// to double precision.
pub const THETA_13: f64 = 5.37;

const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Number of squarings used for a matrix of the given 1-norm.
pub fn squarings(norm_1: f64) -> u32 {
    if norm_1 <= THETA_13 {
        0
    } else {
        (norm_1 / THETA_13).log2().ceil().max(0.0) as u32
    }
}

pub fn mat_exp(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix, MatFunError> {
    let norm = a.norm_fro();
    if !(norm <= tol.exp_budget) {
        return Err(MatFunError::Overflow {
            norm,
            budget: tol.exp_budget,
        });
    }
    let n = a.dim();
    if n == 1 {
        return Ok(ComplexMatrix::from_diag(&[a[(0, 0)].exp()]));
    }

    let s = squarings(a.norm_1());
    let scaled = a.scale_real(0.5f64.powi(s as i32));
    let mut result = pade13(&scaled)?;
    for _ in 0..s {
        result = &result * &result;
    }
    if !result.is_finite() {
        return Err(MatFunError::Overflow {
            norm,
            budget: tol.exp_budget,
        });
    }
    Ok(result)
}

fn pade13(a: &ComplexMatrix) -> Result<ComplexMatrix, MatFunError> {
    let b = |k: usize| Complex64::new(PADE_13[k], 0.0);
    let n = a.dim();
    let id = ComplexMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let lincomb = |c6: usize, c4: usize, c2: usize| -> ComplexMatrix {
        &(&a6.scale(b(c6)) + &a4.scale(b(c4))) + &a2.scale(b(c2))
    };

    let inner_u = &(&a6 * &lincomb(13, 11, 9)) + &lincomb(7, 5, 3);
    let u = a * &(&inner_u + &id.scale(b(1)));
    let inner_v = &(&a6 * &lincomb(12, 10, 8)) + &lincomb(6, 4, 2);
    let v = &inner_v + &id.scale(b(0));

    Ok(solve(&(&v - &u), &(&v + &u))?)
}
