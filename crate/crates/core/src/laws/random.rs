//! Seeded random ensembles.
//!
//! Entries are uniform on the square `[-1, 1] x [-1, 1]`; samples are then
//! shifted and rescaled so their spectrum stays at least [`MIN_CUT_DISTANCE`]
//! from `]-inf, 0]` and their Frobenius norm lies in [`NORM_RANGE`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::Tolerances;
use crate::linalg::{eigenvalues, mat_inverse, ComplexMatrix};
use crate::matfun::cut_distance;

pub const MIN_CUT_DISTANCE: f64 = 0.1;
pub const NORM_RANGE: (f64, f64) = (0.5, 10.0);
/// Bound on `||S||_F ||S^-1||_F / n` for random similarities.
pub const MAX_CONDITION: f64 = 50.0;
const MAX_ATTEMPTS: usize = 256;

/// Independent stream for one trial of one run.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn unit_square<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// `r e^(i theta)` with `r` uniform in `[r_lo, r_hi]` and `|theta| <= max_arg`.
pub fn polar<R: Rng>(rng: &mut R, r_lo: f64, r_hi: f64, max_arg: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(r_lo..=r_hi), rng.gen_range(-max_arg..=max_arg))
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| unit_square(rng))
}

pub fn random_upper_triangular<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |i, j| if i <= j { unit_square(rng) } else { Complex64::new(0.0, 0.0) })
}

/// Unitary from modified Gram-Schmidt on the columns of a random matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let m = random_matrix(rng, n);
        let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| m[(i, j)]).collect()).collect();
        let mut ok = true;
        for j in 0..n {
            for k in 0..j {
                let dot: Complex64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let d = dot * cols[k][i];
                    cols[j][i] -= d;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-3 {
                ok = false;
                break;
            }
            for z in &mut cols[j] {
                *z /= norm;
            }
        }
        if ok {
            return ComplexMatrix::from_fn(n, |i, j| cols[j][i]);
        }
    }
}

/// Random similarity `S` and its inverse with bounded condition number.
pub fn random_similarity<R: Rng>(
    rng: &mut R,
    n: usize,
    tol: &Tolerances,
) -> Option<(ComplexMatrix, ComplexMatrix)> {
    for _ in 0..MAX_ATTEMPTS {
        let s = random_matrix(rng, n).shift(Complex64::new(1.5, 0.0));
        let Ok(s_inv) = mat_inverse(&s, tol) else {
            continue;
        };
        if s.norm_fro() * s_inv.norm_fro() <= MAX_CONDITION * n as f64 {
            return Some((s, s_inv));
        }
    }
    None
}

pub fn min_cut_distance(spectrum: &[Complex64]) -> f64 {
    spectrum.iter().map(|&z| cut_distance(z)).fold(f64::INFINITY, f64::min)
}

pub fn in_norm_range(m: &ComplexMatrix) -> bool {
    let f = m.norm_fro();
    NORM_RANGE.0 <= f && f <= NORM_RANGE.1
}

/// Dense sample in the standard envelope.
pub fn sample_dense<R: Rng>(rng: &mut R, n: usize, tol: &Tolerances) -> Option<ComplexMatrix> {
    sample_in_envelope(rng, n, tol, random_matrix)
}

/// Upper triangular sample in the standard envelope.
pub fn sample_upper_triangular<R: Rng>(rng: &mut R, n: usize, tol: &Tolerances) -> Option<ComplexMatrix> {
    sample_in_envelope(rng, n, tol, random_upper_triangular)
}

fn sample_in_envelope<R: Rng>(
    rng: &mut R,
    n: usize,
    tol: &Tolerances,
    draw: impl Fn(&mut R, usize) -> ComplexMatrix,
) -> Option<ComplexMatrix> {
    for _ in 0..MAX_ATTEMPTS {
        let m = draw(rng, n);
        let base = m.norm_fro();
        if base == 0.0 {
            continue;
        }
        let shift = rng.gen_range(0.0..=2.0) * base / (n as f64).sqrt();
        let shifted = m.shift(Complex64::new(shift, 0.0));
        let target = rng.gen_range(NORM_RANGE.0..=NORM_RANGE.1);
        let sample = shifted.scale_real(target / shifted.norm_fro());
        let Ok(spectrum) = eigenvalues(&sample, tol) else {
            continue;
        };
        if min_cut_distance(&spectrum) >= MIN_CUT_DISTANCE {
            return Some(sample);
        }
    }
    None
}

/// Hermitian positive definite `Q diag(d) Q*` in the standard envelope.
pub fn sample_hermitian_pd<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let q = random_unitary(rng, n);
    let hi = NORM_RANGE.1 / (n as f64).sqrt();
    let d: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(MIN_CUT_DISTANCE..=hi), 0.0))
        .collect();
    let mut x = hermitian_part(&(&(&q * &ComplexMatrix::from_diag(&d)) * &q.conj_transpose()));
    if x.norm_fro() < NORM_RANGE.0 {
        x = x.scale_real(NORM_RANGE.0 / x.norm_fro());
    }
    x
}

/// `(m + m*) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &m.conj_transpose()).scale_real(0.5)
}

/// Argument drawn uniformly from `[-(pi - margin), pi - margin]`.
pub fn interior_arg<R: Rng>(rng: &mut R, margin: f64) -> f64 {
    rng.gen_range(-(PI - margin)..=(PI - margin))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = (0..4).map(|_| trial_rng(7, 3).gen()).collect();
        let b: Vec<f64> = (0..4).map(|_| trial_rng(7, 3).gen()).collect();
        assert_eq!(a, b);
        let x: u64 = trial_rng(7, 3).gen();
        let y: u64 = trial_rng(7, 4).gen();
        assert_ne!(x, y);
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = trial_rng(1, 0);
        for n in 1..6 {
            let q = random_unitary(&mut rng, n);
            assert!((&q * &q.conj_transpose()).dist_fro(&ComplexMatrix::identity(n)) < 1e-13);
        }
    }

    #[test]
    fn envelope_samples_respect_bounds() {
        let tol = Tolerances::default();
        let mut rng = trial_rng(2, 0);
        for n in 1..5 {
            for _ in 0..20 {
                let m = sample_dense(&mut rng, n, &tol).unwrap();
                assert!(in_norm_range(&m));
                assert!(min_cut_distance(&eigenvalues(&m, &tol).unwrap()) >= MIN_CUT_DISTANCE);
                let t = sample_upper_triangular(&mut rng, n, &tol).unwrap();
                assert!(t.is_upper_triangular() && in_norm_range(&t));
            }
        }
    }

    #[test]
    fn hermitian_samples_are_positive() {
        let tol = Tolerances::default();
        let mut rng = trial_rng(3, 0);
        for n in 1..5 {
            let x = sample_hermitian_pd(&mut rng, n);
            assert_eq!(x, x.conj_transpose());
            for z in eigenvalues(&x, &tol).unwrap() {
                assert!(z.re >= MIN_CUT_DISTANCE * 0.999 && z.im.abs() < 1e-12);
            }
        }
    }
}
