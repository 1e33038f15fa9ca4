//! Principal logarithm by inverse scaling and squaring on the Schur factor.

use super::{cut_distance, CutCheckReport, MatFunError};
use crate::config::Tolerances;
use crate::linalg::{schur_decompose, solve_upper_triangular, ComplexMatrix};

/// Square roots allowed before giving up on reaching `||T - I||_1 <= target`.
const MAX_SQRTS: u32 = 64;

/// 7-point Gauss-Legendre rule on `[0, 1]`; the quadrature of
/// `log(1 + x) = int_0^1 x / (1 + t x) dt` is the `[7/7]` Padé approximant.
const GAUSS_NODES: [f64; 7] = [
    0.025_446_043_828_620_757,
    0.129_234_407_200_302_78,
    0.297_077_424_311_301_4,
    0.5,
    0.702_922_575_688_698_6,
    0.870_765_592_799_697_2,
    0.974_553_956_171_379_2,
];
const GAUSS_WEIGHTS: [f64; 7] = [
    0.064_742_483_084_434_85,
    0.139_852_695_744_638_33,
    0.190_915_025_252_559_47,
    0.208_979_591_836_734_7,
    0.190_915_025_252_559_47,
    0.139_852_695_744_638_33,
    0.064_742_483_084_434_85,
];

pub fn mat_log_principal(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix, MatFunError> {
    let outcome = log_with_cut_report(a, tol)?;
    match outcome.log {
        Some(log) => Ok(log),
        None => {
            let eigenvalue = outcome
                .cut
                .eigenvalues
                .iter()
                .copied()
                .min_by(|x, y| cut_distance(*x).total_cmp(&cut_distance(*y)))
                .expect("nonempty spectrum");
            Err(MatFunError::EigenvalueOnCut {
                eigenvalue,
                distance: outcome.cut.min_cut_distance,
            })
        }
    }
}

/// Spectrum report of `a` together with its principal logarithm.
#[derive(Debug, Clone, PartialEq)]
pub struct LogOutcome {
    pub cut: CutCheckReport,
    /// `None` exactly when the spectrum touches the cut.
    pub log: Option<ComplexMatrix>,
}

/// One Schur decomposition serves both the cut check and the logarithm.
pub fn log_with_cut_report(a: &ComplexMatrix, tol: &Tolerances) -> Result<LogOutcome, MatFunError> {
    let schur = schur_decompose(a, tol)?;
    let cut = CutCheckReport::from_eigenvalues(schur.eigenvalues(), tol);
    if !cut.off_cut {
        return Ok(LogOutcome { cut, log: None });
    }
    let log_t = log_upper_triangular(&schur.t, tol)?;
    Ok(LogOutcome {
        cut,
        log: Some(schur.reassemble(&log_t)),
    })
}

/// Principal square root of an upper triangular matrix whose diagonal is off
/// the branch cut.
pub fn sqrt_upper_triangular(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.dim();
    let mut r = ComplexMatrix::zeros(n);
    for i in 0..n {
        r[(i, i)] = t[(i, i)].sqrt();
    }
    for d in 1..n {
        for i in 0..n - d {
            let j = i + d;
            let mut s = t[(i, j)];
            for k in i + 1..j {
                s -= r[(i, k)] * r[(k, j)];
            }
            r[(i, j)] = s / (r[(i, i)] + r[(j, j)]);
        }
    }
    r
}

/// Logarithm of an upper triangular matrix with spectrum off the cut.
pub fn log_upper_triangular(t: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix, MatFunError> {
    let n = t.dim();
    let id = ComplexMatrix::identity(n);
    let mut r = t.clone();
    let mut k = 0u32;
    while (&r - &id).norm_1() > tol.log_sqrt_target {
        if k == MAX_SQRTS {
            return Err(MatFunError::NoConvergence {
                what: "inverse scaling: square roots did not approach the identity",
            });
        }
        r = sqrt_upper_triangular(&r);
        k += 1;
    }
    let x = &r - &id;
    let mut acc = ComplexMatrix::zeros(n);
    for (&node, &weight) in GAUSS_NODES.iter().zip(&GAUSS_WEIGHTS) {
        let denom = &id + &x.scale_real(node);
        let term = solve_upper_triangular(&denom, &x)?;
        acc = &acc + &term.scale_real(weight);
    }
    let mut log_t = acc.scale_real(2f64.powi(k as i32));
    for i in 0..n {
        log_t[(i, i)] = t[(i, i)].ln();
    }
    Ok(log_t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::{E, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn gauss_rule_is_normalized() {
        let total: f64 = GAUSS_WEIGHTS.iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
        // exact for polynomials up to degree 13
        let m13: f64 = GAUSS_NODES.iter().zip(&GAUSS_WEIGHTS).map(|(x, w)| w * x.powi(13)).sum();
        assert!((m13 - 1.0 / 14.0).abs() < 1e-15);
    }

    #[test]
    fn identity_has_zero_log() {
        let l = mat_log_principal(&ComplexMatrix::identity(3), &tol()).unwrap();
        assert_eq!(l, ComplexMatrix::zeros(3));
    }

    #[test]
    fn diagonal_exponentials() {
        let x = ComplexMatrix::from_diag(&[c(E, 0.0), c(E * E, 0.0)]);
        let l = mat_log_principal(&x, &tol()).unwrap();
        assert!(l.dist_fro(&ComplexMatrix::from_diag(&[c(1.0, 0.0), c(2.0, 0.0)])) < 1e-15);
    }

    #[test]
    fn negative_eigenvalue_rejected() {
        let x = ComplexMatrix::from_diag(&[c(-1.0, 0.0), c(1.0, 0.0)]);
        match mat_log_principal(&x, &tol()) {
            Err(MatFunError::EigenvalueOnCut { eigenvalue, .. }) => assert_eq!(eigenvalue, c(-1.0, 0.0)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn triangular_sqrt_squares_back() {
        let t = ComplexMatrix::from_rows(&[
            [c(4.0, 1.0), c(1.0, -2.0), c(0.5, 0.0)],
            [c(0.0, 0.0), c(-3.0, 0.5), c(2.0, 2.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(0.1, -1.0)],
        ]);
        let r = sqrt_upper_triangular(&t);
        assert!((&r * &r).dist_fro(&t) < 1e-14 * t.norm_fro());
        for z in r.diag() {
            assert!(z.re > 0.0);
        }
    }

    #[test]
    fn rotation_by_nearly_pi() {
        let theta = 0.99 * PI;
        let x = ComplexMatrix::from_real_rows(&[[theta.cos(), -theta.sin()], [theta.sin(), theta.cos()]]);
        let l = mat_log_principal(&x, &tol()).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[[0.0, -theta], [theta, 0.0]]);
        assert!(l.dist_fro(&expected) < 1e-13);
    }

    // Reference computed with mpmath.logm at 50 digits (tests/oracle/gen_oracles.py).
    #[test]
    fn matches_high_precision_reference() {
        let x = ComplexMatrix::from_rows(&[
            [c(2.0, 0.5), c(1.0, 0.0), c(0.0, -1.0)],
            [c(-0.5, 0.0), c(-1.0, 1.5), c(0.5, 0.5)],
            [c(0.25, 0.0), c(0.0, 1.0), c(3.0, -2.0)],
        ]);
        let reference = ComplexMatrix::from_rows(&[
            [c(0.71233813253488659367, 0.19577598854541672785), c(0.20687790798783468642, -0.47565235522573638315), c(0.019451735143515966185, -0.34381256471231346503)],
            [c(-0.1637950387691580622, 0.29602163131111635505), c(0.40700935237303639615, 2.1186046931983660095), c(0.32865553229214456954, 0.056952905370762534427)],
            [c(0.14414859487632652973, 0.065219018561119710535), c(0.2695419958443894796, 0.50415997613639598643), c(1.296120164095703357, -0.63169408877721000329)],
        ]);
        let l = mat_log_principal(&x, &tol()).unwrap();
        assert!(l.dist_fro(&reference) < 1e-13 * reference.norm_fro(), "{}", l.dist_fro(&reference));
    }
}
