use rand::Rng;

use super::random::{interior_arg, random_similarity, trial_rng};
use super::LawsError;
use crate::config::Tolerances;
use crate::linalg::ComplexMatrix;
use crate::Complex64;

/// Paired eigenvalue arguments satisfy `|arg l_j + arg m_j| <= pi - ARG_MARGIN`.
pub const ARG_MARGIN: f64 = 0.2;
const MODULUS_RANGE: (f64, f64) = (0.5, 2.0);
const MIN_EIGEN_GAP: f64 = 0.05;
const MAX_ATTEMPTS: usize = 64;

/// Commuting pair `x = S diag(l) S^-1`, `y = S diag(m) S^-1` whose paired
/// eigenvalue arguments add up to strictly less than `pi` in modulus.
///
/// Both are polynomials in `x`, whose eigenvalues are distinct.
pub fn gen_commuting_arg_pair(
    seed: u64,
    n: usize,
    tol: &Tolerances,
) -> Result<(ComplexMatrix, ComplexMatrix), LawsError> {
    commuting_arg_pair_from(&mut trial_rng(seed, 0), n, tol)
}

pub fn commuting_arg_pair_from<R: Rng>(
    rng: &mut R,
    n: usize,
    tol: &Tolerances,
) -> Result<(ComplexMatrix, ComplexMatrix), LawsError> {
    if n == 0 {
        return Err(LawsError::Precondition("dimension must be positive".into()));
    }
    let exhausted = LawsError::GenerationExhausted {
        what: "commuting argument pair",
        attempts: MAX_ATTEMPTS,
    };
    let (lambdas, mus) = eigen_pairs(rng, n).ok_or(exhausted.clone())?;
    let (s, s_inv) = random_similarity(rng, n, tol).ok_or(exhausted)?;
    let x = ComplexMatrix::from_diag(&lambdas).similarity(&s, &s_inv);
    let y = ComplexMatrix::from_diag(&mus).similarity(&s, &s_inv);
    Ok((x, y))
}

fn eigen_pairs<R: Rng>(rng: &mut R, n: usize) -> Option<(Vec<Complex64>, Vec<Complex64>)> {
    let bound = std::f64::consts::PI - ARG_MARGIN;
    'attempt: for _ in 0..MAX_ATTEMPTS {
        let mut lambdas: Vec<Complex64> = Vec::with_capacity(n);
        let mut mus = Vec::with_capacity(n);
        for _ in 0..n {
            let theta = interior_arg(rng, ARG_MARGIN);
            let sum = interior_arg(rng, ARG_MARGIN);
            let psi = sum - theta;
            if psi.abs() > bound {
                continue 'attempt;
            }
            let modulus = |rng: &mut R| rng.gen_range(MODULUS_RANGE.0..=MODULUS_RANGE.1);
            let l = Complex64::from_polar(modulus(rng), theta);
            if lambdas.iter().any(|&p| (p - l).norm() < MIN_EIGEN_GAP) {
                continue 'attempt;
            }
            lambdas.push(l);
            mus.push(Complex64::from_polar(modulus(rng), psi));
        }
        return Some((lambdas, mus));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::{log_law_report, Verdict};
    use crate::linalg::{commutator, eigenvalues};
    use std::f64::consts::PI;

    #[test]
    fn pairs_commute_and_satisfy_the_law() {
        let tol = Tolerances::default();
        for seed in 0..30 {
            let n = 1 + (seed as usize % 4);
            let (x, y) = gen_commuting_arg_pair(seed, n, &tol).unwrap();
            let c = commutator(&x, &y).unwrap().norm_fro();
            assert!(c <= 1e-11 * x.norm_fro() * y.norm_fro(), "seed {seed}: {c}");
            let r = log_law_report(&x, &y, &tol).unwrap();
            assert_eq!(r.verdict, Verdict::LawHoldsCommuting, "seed {seed}: {r:?}");
        }
    }

    #[test]
    fn scalar_case_argument_sum() {
        let tol = Tolerances::default();
        for seed in 0..20 {
            let (x, y) = gen_commuting_arg_pair(seed, 1, &tol).unwrap();
            let s = x[(0, 0)].arg() + y[(0, 0)].arg();
            assert!(s.abs() < PI - 0.1);
        }
    }

    #[test]
    fn products_stay_off_the_cut() {
        let tol = Tolerances::default();
        let (x, y) = gen_commuting_arg_pair(99, 4, &tol).unwrap();
        for z in eigenvalues(&(&x * &y), &tol).unwrap() {
            assert!(z.arg().abs() < PI - 0.1);
        }
    }
}
