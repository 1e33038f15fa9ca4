//! Hermitian positive definite pairs.
//!
//! With `a = log x` and `b = log y` Hermitian, `e^(a+b)` is Hermitian, so
//! `e^(a+b) = e^a e^b` forces `e^a e^b = (e^a e^b)* = e^b e^a`, that is `xy = yx`.

use serde::Serialize;

use super::item3::exp_identity_residual;
use super::LawsError;
use crate::config::Tolerances;
use crate::linalg::{commutator, eigenvalues, ComplexMatrix};
use crate::matfun::{mat_exp, mat_log_principal};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop4Structure {
    /// `||log x - (log x)*||_F / ||log x||_F` (absolute when `log x = 0`).
    pub log_x_hermitian_residual: f64,
    pub log_y_hermitian_residual: f64,
    pub logs_hermitian: bool,
    /// `||e^(a+b) - e^a e^b||_F / ||e^a e^b||_F`.
    pub law_residual: f64,
    pub law_holds: bool,
    /// `||e^a e^b - e^b e^a||_F / ||e^a e^b||_F`.
    pub exp_commutator: f64,
    /// `||xy - yx||_F / (||x||_F ||y||_F)`.
    pub commutator: f64,
    /// The implications hold, or the law fails and they are vacuous.
    pub chain_passes: bool,
}

pub fn verify_prop4_structure(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<Prop4Structure, LawsError> {
    if x.dim() != y.dim() {
        return Err(crate::linalg::LinalgError::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        }
        .into());
    }
    for (name, m) in [("x", x), ("y", y)] {
        let skew = m.dist_fro(&m.conj_transpose());
        if skew > tol.hermitian * m.norm_fro().max(1.0) {
            return Err(LawsError::Precondition(format!("{name} is not Hermitian (||m - m*|| = {skew:e})")));
        }
        for z in eigenvalues(m, tol)? {
            if !(z.re > 0.0) {
                return Err(LawsError::Precondition(format!("{name} is not positive definite (eigenvalue {z})")));
            }
        }
    }
    let a = mat_log_principal(x, tol)?;
    let b = mat_log_principal(y, tol)?;
    let hermitian_residual = |m: &ComplexMatrix| {
        let d = m.dist_fro(&m.conj_transpose());
        let s = m.norm_fro();
        if s > 0.0 {
            d / s
        } else {
            d
        }
    };
    let log_x_hermitian_residual = hermitian_residual(&a);
    let log_y_hermitian_residual = hermitian_residual(&b);

    let law_residual = exp_identity_residual(&a, &b, tol)?;
    let law_holds = law_residual <= tol.law;
    let ea = mat_exp(&a, tol)?;
    let eb = mat_exp(&b, tol)?;
    let eab = &ea * &eb;
    let exp_commutator = eab.dist_fro(&(&eb * &ea)) / eab.norm_fro();
    let commutator = commutator(x, y)?.norm_fro() / (x.norm_fro() * y.norm_fro());
    let chain_passes =
        !law_holds || (exp_commutator <= 2.0 * tol.law && commutator <= tol.hermitian_chain);
    Ok(Prop4Structure {
        log_x_hermitian_residual,
        log_y_hermitian_residual,
        logs_hermitian: log_x_hermitian_residual <= tol.hermitian_chain
            && log_y_hermitian_residual <= tol.hermitian_chain,
        law_residual,
        law_holds,
        exp_commutator,
        commutator,
        chain_passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::random::{random_unitary, sample_hermitian_pd, trial_rng};
    use crate::Complex64;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn equal_pair_passes() {
        let x = sample_hermitian_pd(&mut trial_rng(1, 0), 3);
        let s = verify_prop4_structure(&x, &x, &tol()).unwrap();
        assert!(s.logs_hermitian && s.law_holds && s.chain_passes, "{s:?}");
    }

    #[test]
    fn commuting_pair_passes() {
        let q = random_unitary(&mut trial_rng(2, 0), 3);
        let diag = |d: [f64; 3]| {
            let d: Vec<Complex64> = d.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            crate::laws::random::hermitian_part(&(&(&q * &ComplexMatrix::from_diag(&d)) * &q.conj_transpose()))
        };
        let s = verify_prop4_structure(&diag([1.0, 2.0, 3.0]), &diag([0.5, 4.0, 1.5]), &tol()).unwrap();
        assert!(s.law_holds && s.chain_passes && s.commutator < 1e-12, "{s:?}");
    }

    #[test]
    fn noncommuting_pair_fails_vacuously() {
        let x = sample_hermitian_pd(&mut trial_rng(3, 0), 3);
        let y = sample_hermitian_pd(&mut trial_rng(3, 1), 3);
        let s = verify_prop4_structure(&x, &y, &tol()).unwrap();
        assert!(!s.law_holds && s.chain_passes && s.logs_hermitian, "{s:?}");
    }

    #[test]
    fn rejects_indefinite_and_non_hermitian() {
        let t = tol();
        let indefinite = ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]);
        assert!(verify_prop4_structure(&indefinite, &ComplexMatrix::identity(2), &t).is_err());
        let skew = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        assert!(verify_prop4_structure(&skew, &ComplexMatrix::identity(2), &t).is_err());
    }
}
