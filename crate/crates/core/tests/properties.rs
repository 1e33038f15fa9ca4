use approx::assert_abs_diff_eq;
use matlog_core::laws::random::{random_matrix, random_upper_triangular, sample_dense, trial_rng, unit_square};
use matlog_core::linalg::{commutator, eigenvalues, mat_mul, schur_decompose};
use matlog_core::matfun::{mat_exp, mat_log_principal, mat_phi, polynomial_rep, MatrixFunction};
use matlog_core::scalar::{phi_scalar, winding_zero_count, Rectangle};
use matlog_core::{Complex64, ComplexMatrix, Tolerances};
use proptest::prelude::*;
use rand::Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Greedy nearest pairing; returns the largest matched distance.
fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut pool = b.to_vec();
    let mut worst = 0.0_f64;
    for z in a {
        let (k, d) = pool
            .iter()
            .enumerate()
            .map(|(k, w)| (k, (z - w).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        worst = worst.max(d);
        pool.swap_remove(k);
    }
    worst
}

fn off_cut_sample(seed: u64, n: usize) -> ComplexMatrix {
    (0..)
        .find_map(|trial| sample_dense(&mut trial_rng(seed, trial), n, &tol()))
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schur_factors_reconstruct(seed in any::<u64>(), n in 1usize..=8) {
        let a = random_matrix(&mut trial_rng(seed, 0), n).scale_real(3.0);
        let s = schur_decompose(&a, &tol()).unwrap();
        let qqh = &s.q * &s.q.conj_transpose();
        prop_assert!(qqh.dist_fro(&ComplexMatrix::identity(n)) <= 1e-12);
        let back = &(&s.q * &s.t) * &s.q.conj_transpose();
        prop_assert!(back.dist_fro(&a) <= 1e-11 * a.norm_fro());
        prop_assert!(s.t.is_upper_triangular());
        let eig_back = eigenvalues(&back, &tol()).unwrap();
        prop_assert!(multiset_distance(&eig_back, &s.t.diag()) <= 1e-9);
    }

    #[test]
    fn commutator_is_antisymmetric(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = trial_rng(seed, 0);
        let a = random_matrix(&mut rng, n);
        let b = random_matrix(&mut rng, n);
        let ab = commutator(&a, &b).unwrap();
        let ba = commutator(&b, &a).unwrap();
        prop_assert_eq!(ab, -&ba);
    }

    #[test]
    fn product_is_associative(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = trial_rng(seed, 0);
        let (a, b, c) = (random_matrix(&mut rng, n), random_matrix(&mut rng, n), random_matrix(&mut rng, n));
        let left = mat_mul(&mat_mul(&a, &b).unwrap(), &c).unwrap();
        let right = mat_mul(&a, &mat_mul(&b, &c).unwrap()).unwrap();
        prop_assert!(left.dist_fro(&right) <= 1e-12 * left.norm_fro().max(1.0));
    }

    #[test]
    fn log_roundtrip_strip_and_commutation(seed in any::<u64>(), n in 2usize..=6) {
        let x = off_cut_sample(seed, n);
        let l = mat_log_principal(&x, &tol()).unwrap();
        let back = mat_exp(&l, &tol()).unwrap();
        prop_assert!(back.dist_fro(&x) <= 1e-9 * x.norm_fro());
        for z in eigenvalues(&l, &tol()).unwrap() {
            prop_assert!(z.im.abs() <= std::f64::consts::PI - 1e-6, "{z}");
        }
        let comm = commutator(&x, &l).unwrap().norm_fro();
        prop_assert!(comm <= 1e-10 * x.norm_fro() * l.norm_fro().max(1.0));
    }

    #[test]
    fn phi_identity(seed in any::<u64>(), n in 1usize..=6, scale in 0.01f64..20.0) {
        let raw = random_matrix(&mut trial_rng(seed, 0), n);
        let a = raw.scale_real(scale / raw.norm_fro());
        let phi = mat_phi(&a, &tol()).unwrap();
        let ea = mat_exp(&a, &tol()).unwrap();
        let lhs = &a * &phi;
        let rhs = ea.shift(Complex64::new(-1.0, 0.0));
        prop_assert!(lhs.dist_fro(&rhs) <= 1e-10 * (1.0 + ea.norm_fro()));
    }

    #[test]
    fn bordered_exponential_closed_form(seed in any::<u64>(), m in 1usize..=4) {
        let mut rng = trial_rng(seed, 0);
        let a0 = random_upper_triangular(&mut rng, m).scale_real(2.0);
        let alpha = unit_square(&mut rng) * 2.0;
        let u: Vec<Complex64> = (0..m).map(|_| unit_square(&mut rng)).collect();
        let a = a0.bordered(&u, alpha);
        let a1 = a0.shift(-alpha);
        let e1 = mat_exp(&a1, &tol()).unwrap();
        let top = mat_phi(&a1, &tol()).unwrap().mul_vec(&u);
        let closed = e1
            .bordered(&top, Complex64::new(1.0, 0.0))
            .scale(alpha.exp());
        let direct = mat_exp(&a, &tol()).unwrap();
        prop_assert!(direct.dist_fro(&closed) <= 1e-10 * closed.norm_fro());
    }

    #[test]
    fn commuting_logs_give_commuting_matrices(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = trial_rng(seed, 0);
        let l1 = random_matrix(&mut rng, n);
        let c: Vec<Complex64> = (0..3).map(|_| unit_square(&mut rng)).collect();
        let l2 = &(&l1 * &l1).scale(c[2]) + &l1.scale(c[1]).shift(c[0]);
        prop_assume!(commutator(&l1, &l2).unwrap().norm_fro() <= 1e-12 * (1.0 + l1.norm_fro() * l2.norm_fro()));
        let x = mat_exp(&l1, &tol()).unwrap();
        let y = mat_exp(&l2, &tol()).unwrap();
        let comm = commutator(&x, &y).unwrap().norm_fro();
        prop_assert!(comm <= 1e-9 * x.norm_fro() * y.norm_fro());
    }

    #[test]
    fn hermite_polynomial_matches_matrix_function(seed in any::<u64>(), n in 2usize..=4) {
        let x = off_cut_sample(seed, n);
        for f in [MatrixFunction::Exp, MatrixFunction::Log, MatrixFunction::Phi] {
            let p = polynomial_rep(&x, f, &tol()).unwrap();
            prop_assert!(p.degree() < n);
            let direct = f.apply(&x, &tol()).unwrap();
            prop_assert!(p.evaluate().dist_fro(&direct) <= 1e-8 * direct.norm_fro().max(1.0), "{f}");
        }
    }

    #[test]
    fn census_is_additive_over_vertical_cuts(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let lambda = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let rect = Rectangle::new(-4.0, 4.0, -5.0, 5.0).unwrap();
        let cut = rng.gen_range(-3.0..3.0);
        let left = Rectangle::new(-4.0, cut, -5.0, 5.0).unwrap();
        let right = Rectangle::new(cut, 4.0, -5.0, 5.0).unwrap();
        let counts = (
            winding_zero_count(lambda, rect, &tol()),
            winding_zero_count(lambda, left, &tol()),
            winding_zero_count(lambda, right, &tol()),
        );
        // A zero on a shared edge aborts the census; such draws are skipped.
        if let (Ok(whole), Ok(l), Ok(r)) = counts {
            prop_assert_eq!(whole.count, l.count + r.count);
        }
    }
}

#[test]
fn scalar_phi_agrees_with_one_by_one_matrix() {
    for z in [Complex64::new(0.0, 0.0), Complex64::new(1e-9, 2e-9), Complex64::new(-3.0, 4.0)] {
        let m = mat_phi(&ComplexMatrix::from_diag(&[z]), &tol()).unwrap();
        assert_abs_diff_eq!((m[(0, 0)] - phi_scalar(z)).norm(), 0.0, epsilon = 1e-14);
    }
}

#[test]
fn log_of_rotation_has_principal_angle() {
    let t = 3.0_f64;
    let x = ComplexMatrix::from_real_rows(&[[t.cos(), -t.sin()], [t.sin(), t.cos()]]);
    let l = mat_log_principal(&x, &tol()).unwrap();
    assert_abs_diff_eq!(l[(0, 0)].norm(), 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(l[(0, 1)].re, -t, epsilon = 1e-13);
    assert_abs_diff_eq!(l[(1, 0)].re, t, epsilon = 1e-13);
}
