//! Block pairs `a = [[a0, u], [0, alpha]]`, `b = [[b0, v], [0, beta]]` with
//! commuting upper triangular `a0`, `b0`.
//!
//! With `a1 = a0 - alpha I`, `b1 = b0 - beta I` and `w = a1 v - b1 u`,
//! `e^(a+b) = e^a e^b` is equivalent to
//!
//! ```text
//! (phi(a1 + b1) - phi(a1)) u = (e^(a1) phi(b1) - phi(a1 + b1)) v
//! ```
//!
//! and implies `(phi(a1 + b1) - phi(a1)) w = 0` and `(phi(b1) - phi(-a1)) w = 0`.
//! At the last index `k` with `w_k != 0`, either `beta_k != 0` and
//! `phi(alpha_k + beta_k) = phi(alpha_k)`, or `alpha_k != 0`, `beta_k = 0` and
//! `phi(-alpha_k) = 1`.

use rand::Rng;
use serde::Serialize;

use super::item3::exp_identity_residual;
use super::random::{random_upper_triangular, unit_square};
use super::LawsError;
use crate::config::Tolerances;
use crate::linalg::{commutator, ComplexMatrix};
use crate::matfun::{mat_exp, mat_phi};
use crate::scalar::census::ser_complex;
use crate::scalar::phi_scalar;
use crate::Complex64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop3Instance {
    pub a0: ComplexMatrix,
    pub b0: ComplexMatrix,
    #[serde(serialize_with = "ser_complex")]
    pub alpha: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub beta: Complex64,
    #[serde(serialize_with = "ser_vec")]
    pub u_col: Vec<Complex64>,
    #[serde(serialize_with = "ser_vec")]
    pub v_col: Vec<Complex64>,
}

fn ser_vec<S: serde::Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&crate::scalar::format_complex(*z))?;
    }
    seq.end()
}

impl Prop3Instance {
    /// Validates shapes, triangularity and commutation of `a0`, `b0`.
    ///
    /// Commutation is judged relative to `max(1, ||a0|| ||b0||)`.
    pub fn new(
        a0: ComplexMatrix,
        b0: ComplexMatrix,
        alpha: Complex64,
        beta: Complex64,
        u_col: Vec<Complex64>,
        v_col: Vec<Complex64>,
    ) -> Result<Self, LawsError> {
        let m = a0.dim();
        if b0.dim() != m || u_col.len() != m || v_col.len() != m {
            return Err(LawsError::Precondition("block dimensions disagree".into()));
        }
        if !a0.is_upper_triangular() || !b0.is_upper_triangular() {
            return Err(LawsError::Precondition("a0 and b0 must be upper triangular".into()));
        }
        let comm = commutator(&a0, &b0)?.norm_fro();
        let scale = (a0.norm_fro() * b0.norm_fro()).max(1.0);
        if comm > 1e-12 * scale {
            return Err(LawsError::Precondition(format!("a0 and b0 do not commute: ||[a0, b0]|| = {comm:e}")));
        }
        Ok(Self {
            a0,
            b0,
            alpha,
            beta,
            u_col,
            v_col,
        })
    }

    pub fn a1(&self) -> ComplexMatrix {
        self.a0.shift(-self.alpha)
    }

    pub fn b1(&self) -> ComplexMatrix {
        self.b0.shift(-self.beta)
    }

    /// `a1 v - b1 u`.
    pub fn w(&self) -> Vec<Complex64> {
        let av = self.a1().mul_vec(&self.v_col);
        let bu = self.b1().mul_vec(&self.u_col);
        av.iter().zip(&bu).map(|(x, y)| x - y).collect()
    }

    /// 1-based index of the last entry of `w` above `floor` in modulus.
    pub fn pivot_k(&self, floor: f64) -> Option<usize> {
        self.w().iter().rposition(|z| z.norm() > floor).map(|i| i + 1)
    }

    pub fn a(&self) -> ComplexMatrix {
        self.a0.bordered(&self.u_col, self.alpha)
    }

    pub fn b(&self) -> ComplexMatrix {
        self.b0.bordered(&self.v_col, self.beta)
    }

    /// Diagonal of `a1`.
    pub fn alphas(&self) -> Vec<Complex64> {
        self.a1().diag()
    }

    /// Diagonal of `b1`.
    pub fn betas(&self) -> Vec<Complex64> {
        self.b1().diag()
    }

    pub fn dim(&self) -> usize {
        self.a0.dim() + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop3Verdict {
    pub identity_residual: f64,
    pub identity_holds: bool,
    pub cond6_residual: f64,
    pub cond6_holds: bool,
    pub cond7_residual: f64,
    pub cond7_holds: bool,
    pub cond8_residual: f64,
    pub cond8_holds: bool,
    /// Either residual falls in the borderline band.
    pub borderline: bool,
    pub w_norm: f64,
    pub pivot_k: Option<usize>,
    pub item4_at_pivot: bool,
    pub item5_at_pivot: bool,
    pub item4_any: bool,
    pub item5_any: bool,
}

impl Prop3Verdict {
    pub fn agrees(&self) -> bool {
        self.identity_holds == self.cond6_holds
    }

    /// Identity with a nonzero `w` forces item 4 or item 5 at the pivot.
    pub fn necessity_ok(&self) -> bool {
        !(self.identity_holds && self.pivot_k.is_some()) || self.item4_at_pivot || self.item5_at_pivot
    }
}

pub fn verify_prop3(inst: &Prop3Instance, tol: &Tolerances) -> Result<Prop3Verdict, LawsError> {
    let a1 = inst.a1();
    let b1 = inst.b1();
    let s = &a1 + &b1;
    let phi_a1 = mat_phi(&a1, tol)?;
    let phi_b1 = mat_phi(&b1, tol)?;
    let phi_s = mat_phi(&s, tol)?;
    let phi_neg_a1 = mat_phi(&-&a1, tol)?;
    let e_a1 = mat_exp(&a1, tol)?;
    let e_b1 = mat_exp(&b1, tol)?;

    let identity_residual = exp_identity_residual(&inst.a(), &inst.b(), tol)?;

    let u = &inst.u_col;
    let v = &inst.v_col;
    let sub = |x: Vec<Complex64>, y: Vec<Complex64>| -> Vec<Complex64> { x.iter().zip(&y).map(|(p, q)| p - q).collect() };
    let add = |x: Vec<Complex64>, y: Vec<Complex64>| -> Vec<Complex64> { x.iter().zip(&y).map(|(p, q)| p + q).collect() };
    let norm = |x: &[Complex64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    // normalized by the reduced block [[e^a1 e^b1, e^a1 phi(b1) v + phi(a1) u], [0, 1]]
    let e_phi_b1 = &e_a1 * &phi_b1;
    let top_right = add(e_phi_b1.mul_vec(v), phi_a1.mul_vec(u));
    let block_norm = ((&e_a1 * &e_b1).norm_fro().powi(2) + norm(&top_right).powi(2) + 1.0).sqrt();
    let lhs6 = (&phi_s - &phi_a1).mul_vec(u);
    let rhs6 = (&e_phi_b1 - &phi_s).mul_vec(v);
    let cond6_residual = norm(&sub(lhs6, rhs6)) / block_norm;

    let w = inst.w();
    let w_norm = norm(&w);
    let rel = |m: &ComplexMatrix| norm(&m.mul_vec(&w)) / (1.0 + m.norm_fro() * w_norm);
    let cond7_residual = rel(&(&phi_s - &phi_a1));
    let cond8_residual = rel(&(&phi_b1 - &phi_neg_a1));

    let pivot_k = inst.pivot_k(tol.pivot);
    let alphas = inst.alphas();
    let betas = inst.betas();
    let item4 = |i: usize| {
        let (al, be) = (alphas[i], betas[i]);
        let p = phi_scalar(al);
        be.norm() > tol.prop3_item && (phi_scalar(al + be) - p).norm() <= tol.prop3_item * p.norm().max(1.0)
    };
    let item5 = |i: usize| {
        let (al, be) = (alphas[i], betas[i]);
        al.norm() > tol.prop3_item
            && be.norm() <= tol.prop3_item
            && (phi_scalar(-al) - 1.0).norm() <= tol.prop3_item
    };
    let in_band = |r: f64| tol.borderline_lo <= r && r <= tol.borderline_hi;
    Ok(Prop3Verdict {
        identity_holds: identity_residual <= tol.law,
        cond6_holds: cond6_residual <= tol.law,
        cond7_holds: cond7_residual <= tol.law,
        cond8_holds: cond8_residual <= tol.law,
        borderline: in_band(identity_residual) || in_band(cond6_residual),
        identity_residual,
        cond6_residual,
        cond7_residual,
        cond8_residual,
        w_norm,
        pivot_k,
        item4_at_pivot: pivot_k.is_some_and(|k| item4(k - 1)),
        item5_at_pivot: pivot_k.is_some_and(|k| item5(k - 1)),
        item4_any: (0..alphas.len()).any(item4),
        item5_any: (0..alphas.len()).any(item5),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    /// `b0` a polynomial in a random triangular `a0`; random columns.
    Generic,
    /// `u = a1 z`, `v = b1 z`, so `w = 0` and the blocks commute.
    Commuting,
    /// An exceptional `2 x 2` pair placed on the first coordinate.
    Item4,
    /// `alpha_1 = -r` for a root `r` of `e^r = 1 + r`, `b1 = 0`.
    Item5,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 4] = [Self::Generic, Self::Commuting, Self::Item4, Self::Item5];
}

/// Random instance of dimension `n` (`n >= 2`).
///
/// `Item4` needs a companion pair `(u, v)` and `Item5` a root of
/// `e^r = 1 + r`; both are drawn from the supplied lists.
pub fn random_prop3_instance<R: Rng>(
    rng: &mut R,
    n: usize,
    kind: EnsembleKind,
    companion_pairs: &[(Complex64, Complex64)],
    u_roots: &[Complex64],
) -> Result<Prop3Instance, LawsError> {
    if n < 2 {
        return Err(LawsError::Precondition("block instances need n >= 2".into()));
    }
    let m = n - 1;
    let zero = Complex64::new(0.0, 0.0);
    let unit = |k: usize| -> Vec<Complex64> {
        (0..m).map(|i| if i == k { Complex64::new(1.0, 0.0) } else { zero }).collect()
    };
    let random_col = |rng: &mut R| -> Vec<Complex64> { (0..m).map(|_| unit_square(rng)).collect() };
    let alpha = unit_square(rng);
    let beta = unit_square(rng);
    match kind {
        EnsembleKind::Generic | EnsembleKind::Commuting => {
            let a0 = random_upper_triangular(rng, m);
            let (c0, c1, c2) = (unit_square(rng), unit_square(rng), unit_square(rng).scale(0.5));
            let b0 = (&(&a0 * &a0).scale(c2) + &a0.scale(c1)).shift(c0);
            let (u_col, v_col) = if kind == EnsembleKind::Generic {
                (random_col(rng), random_col(rng))
            } else {
                let z = random_col(rng);
                (a0.shift(-alpha).mul_vec(&z), b0.shift(-beta).mul_vec(&z))
            };
            Prop3Instance::new(a0, b0, alpha, beta, u_col, v_col)
        }
        EnsembleKind::Item4 => {
            let &(u, v) = pick(rng, companion_pairs, "companion pair")?;
            // first coordinate: a1 = -u, b1 = v, w_1 = -u; the rest is decoupled
            let mut a_diag: Vec<Complex64> = (0..m).map(|_| unit_square(rng)).collect();
            let mut b_diag: Vec<Complex64> = (0..m).map(|_| unit_square(rng)).collect();
            a_diag[0] = alpha - u;
            b_diag[0] = beta + v;
            Prop3Instance::new(
                ComplexMatrix::from_diag(&a_diag),
                ComplexMatrix::from_diag(&b_diag),
                alpha,
                beta,
                vec![zero; m],
                unit(0),
            )
        }
        EnsembleKind::Item5 => {
            let &r = pick(rng, u_roots, "root")?;
            let r = if rng.gen::<bool>() { r } else { r.conj() };
            let mut a0 = random_upper_triangular(rng, m);
            a0[(0, 0)] = alpha - r;
            Prop3Instance::new(
                a0,
                ComplexMatrix::scalar(m, beta),
                alpha,
                beta,
                random_col(rng),
                unit(0),
            )
        }
    }
}

fn pick<'a, R: Rng, T>(rng: &mut R, items: &'a [T], what: &str) -> Result<&'a T, LawsError> {
    if items.is_empty() {
        return Err(LawsError::Precondition(format!("no {what} supplied")));
    }
    Ok(&items[rng.gen_range(0..items.len())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::random::trial_rng;
    use crate::scalar::{companions, Rectangle};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn u1() -> Complex64 {
        c(2.088843015613043856, 7.4614892856542545569)
    }

    fn companion_pair() -> (Complex64, Complex64) {
        let band = Rectangle::new(-6.0, 10.0, 2.0 * PI, 4.0 * PI).unwrap();
        let p = companions(c(1.0, 0.5), band, 0.5, &tol()).unwrap()[0];
        (p.u, p.v)
    }

    #[test]
    fn item3_embedding() {
        let (u, v) = companion_pair();
        let (lambda, mu) = (c(0.2, 0.1), c(-0.1, 0.3));
        let inst = Prop3Instance::new(
            ComplexMatrix::from_diag(&[lambda]),
            ComplexMatrix::from_diag(&[mu + v]),
            lambda + u,
            mu,
            vec![c(0.0, 0.0)],
            vec![c(1.0, 0.0)],
        )
        .unwrap();
        assert!((inst.w()[0] + u).norm() < 1e-15);
        let verdict = verify_prop3(&inst, &tol()).unwrap();
        assert!(verdict.identity_holds && verdict.cond6_holds, "{verdict:?}");
        assert!(verdict.cond7_holds && verdict.cond8_holds, "{verdict:?}");
        assert_eq!(verdict.pivot_k, Some(1));
        assert!(verdict.item4_at_pivot && !verdict.item5_at_pivot);
        // phi(v - u) = phi(-u)
        assert!((phi_scalar(v - u) - phi_scalar(-u)).norm() < 1e-10);
    }

    #[test]
    fn zero_columns_commute() {
        let a0 = ComplexMatrix::from_rows(&[[c(1.0, 0.0), c(2.0, 1.0)], [c(0.0, 0.0), c(-0.5, 0.5)]]);
        let b0 = (&a0 * &a0).shift(c(0.3, 0.0));
        let inst = Prop3Instance::new(a0, b0, c(0.4, 0.0), c(0.0, -1.0), vec![c(0.0, 0.0); 2], vec![c(0.0, 0.0); 2]).unwrap();
        let verdict = verify_prop3(&inst, &tol()).unwrap();
        assert!(verdict.identity_holds && verdict.cond6_holds);
        assert_eq!(verdict.pivot_k, None);
        assert!(verdict.necessity_ok());
    }

    #[test]
    fn noncommuting_blocks_rejected() {
        let a0 = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 2.0]]);
        let b0 = ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 3.0]]);
        assert!(Prop3Instance::new(a0, b0, c(0.0, 0.0), c(0.0, 0.0), vec![c(0.0, 0.0); 2], vec![c(0.0, 0.0); 2]).is_err());
    }

    #[test]
    fn ensembles_behave_as_designed() {
        let t = tol();
        let pairs = [companion_pair()];
        let roots = [u1()];
        for (i, kind) in EnsembleKind::ALL.iter().cycle().take(24).enumerate() {
            let n = 3 + i % 3;
            let mut rng = trial_rng(5, i as u64);
            let inst = random_prop3_instance(&mut rng, n, *kind, &pairs, &roots).unwrap();
            let verdict = verify_prop3(&inst, &t).unwrap();
            assert!(verdict.agrees() && !verdict.borderline, "{kind:?}: {verdict:?}");
            assert!(verdict.necessity_ok(), "{kind:?}: {verdict:?}");
            match kind {
                EnsembleKind::Generic => assert!(!verdict.identity_holds),
                EnsembleKind::Commuting => assert!(verdict.identity_holds && verdict.pivot_k.is_none()),
                EnsembleKind::Item4 => assert!(verdict.identity_holds && verdict.item4_at_pivot),
                EnsembleKind::Item5 => assert!(verdict.identity_holds && verdict.item5_at_pivot),
            }
        }
    }
}
