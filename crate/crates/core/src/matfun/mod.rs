//! Matrix functions: principal logarithm, exponential and `phi`.
//!
//! Logarithm and `phi` work on the Schur factor `T` of the input and map
//! back with `Q f(T) Q*`. The exponential is computed directly on the input.

mod expm;
mod hermite;
mod logm;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use expm::{mat_exp, squarings, THETA_13};
pub use hermite::{polynomial_rep, HermiteNode, PolynomialRep, MAX_HERMITE_ORDER};
pub use logm::{
    log_upper_triangular, log_with_cut_report, mat_log_principal, sqrt_upper_triangular, LogOutcome,
};

use crate::config::Tolerances;
use crate::linalg::{eigenvalues, schur_decompose, solve_upper_triangular, ComplexMatrix, LinalgError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatFunError {
    #[error("eigenvalue {} lies within {distance:e} of the branch cut ]-inf, 0]", crate::scalar::format_complex(*eigenvalue))]
    EigenvalueOnCut { eigenvalue: Complex64, distance: f64 },
    #[error("||a||_F = {norm} exceeds the exponential budget {budget}")]
    Overflow { norm: f64, budget: f64 },
    #[error("Hermite node of order {order} exceeds the cap {cap}")]
    IllConditionedInterpolation { order: usize, cap: usize },
    #[error("{what}")]
    NoConvergence { what: &'static str },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The functions a [`PolynomialRep`] can represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixFunction {
    Log,
    Exp,
    Phi,
}

impl MatrixFunction {
    pub fn apply(self, a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix, MatFunError> {
        match self {
            Self::Log => mat_log_principal(a, tol),
            Self::Exp => mat_exp(a, tol),
            Self::Phi => mat_phi(a, tol),
        }
    }
}

impl fmt::Display for MatrixFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Log => "log",
            Self::Exp => "exp",
            Self::Phi => "phi",
        })
    }
}

impl FromStr for MatrixFunction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "log" => Ok(Self::Log),
            "exp" => Ok(Self::Exp),
            "phi" => Ok(Self::Phi),
            other => Err(format!("unknown matrix function `{other}` (expected log, exp or phi)")),
        }
    }
}

/// Distance from `z` to the ray `]-inf, 0]`.
pub fn cut_distance(z: Complex64) -> f64 {
    if z.re <= 0.0 {
        z.im.abs()
    } else {
        z.norm()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutCheckReport {
    #[serde(serialize_with = "ser_complex_vec")]
    pub eigenvalues: Vec<Complex64>,
    pub min_cut_distance: f64,
    pub off_cut: bool,
}

fn ser_complex_vec<S: serde::Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&crate::scalar::format_complex(*z))?;
    }
    seq.end()
}

impl CutCheckReport {
    pub fn from_eigenvalues(eigenvalues: Vec<Complex64>, tol: &Tolerances) -> Self {
        let min_cut_distance = eigenvalues
            .iter()
            .map(|&z| cut_distance(z))
            .fold(f64::INFINITY, f64::min);
        Self {
            off_cut: min_cut_distance > tol.cut,
            eigenvalues,
            min_cut_distance,
        }
    }

    /// Off the cut but closer than the low-confidence threshold.
    pub fn low_confidence(&self, tol: &Tolerances) -> bool {
        self.off_cut && self.min_cut_distance < tol.low_confidence_cut
    }
}

/// Reports how far the spectrum of `a` is from `]-inf, 0]`.
pub fn check_spectrum_off_cut(
    a: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<CutCheckReport, LinalgError> {
    Ok(CutCheckReport::from_eigenvalues(eigenvalues(a, tol)?, tol))
}

/// `phi(a) = sum_k a^k / (k+1)!`, so that `a phi(a) = e^a - I`.
///
/// On the Schur factor `T`: when every eigenvalue has modulus above
/// `phi_solve_threshold`, solve `T X = e^T - I`; otherwise read `phi(T)` off
/// the top-right block of `exp([[T, I], [0, 0]])`.
pub fn mat_phi(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix, MatFunError> {
    let n = a.dim();
    let schur = schur_decompose(a, tol)?;
    let t = &schur.t;
    let min_modulus = t.diag().iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let phi_t = if min_modulus > tol.phi_solve_threshold {
        let e_minus_i = mat_exp(t, tol)?.shift(Complex64::new(-1.0, 0.0));
        solve_upper_triangular(t, &e_minus_i)?
    } else {
        let augmented = ComplexMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
            (true, true) => t[(i, j)],
            (true, false) if j - n == i => Complex64::new(1.0, 0.0),
            _ => Complex64::new(0.0, 0.0),
        });
        let e = mat_exp(&augmented, tol)?;
        ComplexMatrix::from_fn(n, |i, j| e[(i, j + n)])
    };
    Ok(schur.reassemble(&phi_t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::phi_scalar;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn cut_report_examples() {
        let t = tol();
        let r = check_spectrum_off_cut(&ComplexMatrix::from_diag(&[c(1.0, 0.0), c(2.0, 0.0)]), &t).unwrap();
        assert!(r.off_cut);
        assert_eq!(r.min_cut_distance, 1.0);

        let r = check_spectrum_off_cut(&ComplexMatrix::from_diag(&[c(-1.0, 0.0), c(2.0, 0.0)]), &t).unwrap();
        assert!(!r.off_cut);
        assert_eq!(r.min_cut_distance, 0.0);

        let r = check_spectrum_off_cut(&ComplexMatrix::from_diag(&[c(-1.0, 0.1)]), &t).unwrap();
        assert!(r.off_cut);
        assert!((r.min_cut_distance - 0.1).abs() < 1e-16);
    }

    #[test]
    fn low_confidence_flag() {
        let t = tol();
        let r = CutCheckReport::from_eigenvalues(vec![c(-3.0, 1e-8)], &t);
        assert!(r.off_cut && r.low_confidence(&t));
    }

    #[test]
    fn phi_of_zero_is_identity() {
        let p = mat_phi(&ComplexMatrix::zeros(3), &tol()).unwrap();
        assert!(p.dist_fro(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn phi_of_diagonal_is_scalar_phi() {
        let d = [c(0.0, 0.0), c(1.0, 2.0), c(-3.0, 0.5), c(0.05, 0.0)];
        let p = mat_phi(&ComplexMatrix::from_diag(&d), &tol()).unwrap();
        let expected = ComplexMatrix::from_diag(&d.map(phi_scalar));
        assert!(p.dist_fro(&expected) < 1e-14);
        // both branches
        let d2 = [c(1.0, 2.0), c(-3.0, 0.5)];
        let p2 = mat_phi(&ComplexMatrix::from_diag(&d2), &tol()).unwrap();
        assert!(p2.dist_fro(&ComplexMatrix::from_diag(&d2.map(phi_scalar))) < 1e-14);
    }

    #[test]
    fn phi_of_nilpotent_matches_series() {
        // series oracle: sum_k N^k / (k+1)! truncates after k = 1
        let n = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        let series = &ComplexMatrix::identity(2) + &n.scale_real(0.5);
        let p = mat_phi(&n, &tol()).unwrap();
        assert!(p.dist_fro(&series) < 1e-15);
        assert!(p.dist_fro(&ComplexMatrix::from_real_rows(&[[1.0, 0.5], [0.0, 1.0]])) < 1e-15);
    }

    #[test]
    fn function_names() {
        for f in [MatrixFunction::Log, MatrixFunction::Exp, MatrixFunction::Phi] {
            assert_eq!(f.to_string().parse::<MatrixFunction>().unwrap(), f);
        }
        assert!("sin".parse::<MatrixFunction>().is_err());
    }
}
