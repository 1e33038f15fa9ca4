//! The exceptional noncommuting pairs with `e^(a+b) = e^a e^b`, and a
//! classifier for which necessary condition a given `2 x 2` pair meets.

use std::f64::consts::PI;

use serde::Serialize;

use super::LawsError;
use crate::config::Tolerances;
use crate::linalg::{commutator, eigenvalues, mat_inverse, ComplexMatrix};
use crate::matfun::mat_exp;
use crate::scalar::census::ser_complex;
use crate::scalar::{phi_scalar, CompanionPair};
use crate::Complex64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Item3Instance {
    #[serde(serialize_with = "ser_complex")]
    pub lambda: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub mu: Complex64,
    pub pair: CompanionPair,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<ComplexMatrix>,
    /// `||e^(a+b) - e^a e^b||_F / ||e^a e^b||_F`.
    pub identity_residual: f64,
    /// `||ab - ba||_F / (||a||_F ||b||_F)`.
    pub commutator_norm: f64,
    /// Off-diagonal entry of `e^a e^b` in the unconjugated frame, predicted
    /// in closed form as `phi(u) e^(lambda + mu)`.
    #[serde(serialize_with = "ser_complex")]
    pub closed_form_offdiag: Complex64,
}

/// `a = diag(lambda, lambda + u)`, `b = [[mu + v, 1], [0, mu]]`, optionally
/// conjugated by `S` as `S a S^-1`, `S b S^-1`.
pub fn gen_item3_pair(
    u: Complex64,
    v: Complex64,
    lambda: Complex64,
    mu: Complex64,
    conjugator: Option<&ComplexMatrix>,
    tol: &Tolerances,
) -> Result<Item3Instance, LawsError> {
    let pair = CompanionPair::new(u, v, tol)?;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut a = ComplexMatrix::from_rows(&[[lambda, zero], [zero, lambda + u]]);
    let mut b = ComplexMatrix::from_rows(&[[mu + v, one], [zero, mu]]);
    if let Some(s) = conjugator {
        if s.dim() != 2 {
            return Err(LawsError::Precondition("conjugator must be 2x2".into()));
        }
        let s_inv = mat_inverse(s, tol)?;
        a = a.similarity(s, &s_inv);
        b = b.similarity(s, &s_inv);
    }
    let identity_residual = exp_identity_residual(&a, &b, tol)?;
    let commutator_norm = commutator(&a, &b)?.norm_fro() / (a.norm_fro() * b.norm_fro());
    Ok(Item3Instance {
        lambda,
        mu,
        pair,
        a,
        b,
        conjugator: conjugator.cloned(),
        identity_residual,
        commutator_norm,
        closed_form_offdiag: pair.level * (lambda + mu).exp(),
    })
}

/// `||e^(a+b) - e^a e^b||_F / ||e^a e^b||_F`.
pub(crate) fn exp_identity_residual(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<f64, LawsError> {
    let sum = mat_exp(&(a + b), tol)?;
    let product = &mat_exp(a, tol)? * &mat_exp(b, tol)?;
    Ok(sum.dist_fro(&product) / product.norm_fro())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Membership {
    Member,
    NotMember,
    /// Outside the band covered by the supplied roots.
    UnknownBand,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop1Classification {
    pub applicable: bool,
    pub identity_residual: f64,
    pub commutator_norm: f64,
    /// `lambda_2 - lambda_1` from the spectrum of `a`.
    #[serde(serialize_with = "ser_complex")]
    pub lambda_gap: Complex64,
    /// `mu_2 - mu_1` from the spectrum of `b`.
    #[serde(serialize_with = "ser_complex")]
    pub mu_gap: Complex64,
    /// Both gaps lie in `2 pi i Z*`.
    pub item1: bool,
    /// Membership of `+lambda_gap, -lambda_gap, +mu_gap, -mu_gap` in the root set.
    pub item2_memberships: [Membership; 4],
    pub item2: bool,
    /// Sign choices `(s, t)` with `phi(s lambda_gap) = phi(t mu_gap) != 0`.
    pub item3_signs: Vec<(i8, i8)>,
    pub item3: bool,
    /// Simultaneous similarity to the canonical shapes is not checked.
    pub structural_check: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Reports which of the three necessary conditions a `2 x 2` pair with
/// `e^(a+b) = e^a e^b` and `ab != ba` satisfies.
///
/// `u_roots` should hold roots of `e^u = 1 + u` in the upper half plane;
/// their conjugates are added here.
pub fn classify_prop1(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    u_roots: &[Complex64],
    tol: &Tolerances,
) -> Result<Prop1Classification, LawsError> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(LawsError::Precondition("classification needs 2x2 matrices".into()));
    }
    let identity_residual = exp_identity_residual(a, b, tol).unwrap_or(f64::INFINITY);
    let commutator_norm = commutator(a, b)?.norm_fro() / (a.norm_fro() * b.norm_fro()).max(1.0);
    let la = eigenvalues(a, tol)?;
    let mb = eigenvalues(b, tol)?;
    let lambda_gap = la[1] - la[0];
    let mu_gap = mb[1] - mb[0];

    let mut out = Prop1Classification {
        applicable: true,
        identity_residual,
        commutator_norm,
        lambda_gap,
        mu_gap,
        item1: false,
        item2_memberships: [Membership::NotMember; 4],
        item2: false,
        item3_signs: Vec::new(),
        item3: false,
        structural_check: "PARTIAL",
        note: None,
    };
    if !(identity_residual <= tol.law) {
        out.applicable = false;
        out.note = Some(format!("e^(a+b) differs from e^a e^b by {identity_residual:e}"));
        return Ok(out);
    }
    if commutator_norm <= tol.commuting {
        out.applicable = false;
        out.note = Some("a and b commute".into());
        return Ok(out);
    }

    out.item1 = in_two_pi_i_z_star(lambda_gap, tol.classify) && in_two_pi_i_z_star(mu_gap, tol.classify);

    let band = u_roots.iter().map(|r| r.im.abs()).fold(0.0, f64::max);
    let candidates = [lambda_gap, -lambda_gap, mu_gap, -mu_gap];
    for (slot, &d) in out.item2_memberships.iter_mut().zip(&candidates) {
        let hit = u_roots
            .iter()
            .any(|&r| (d - r).norm() <= tol.classify_root || (d - r.conj()).norm() <= tol.classify_root);
        *slot = if hit {
            Membership::Member
        } else if d.im.abs() > band + 1.0 {
            Membership::UnknownBand
        } else {
            Membership::NotMember
        };
    }
    out.item2 = out.item2_memberships.contains(&Membership::Member);

    for s in [1i8, -1] {
        for t in [1i8, -1] {
            let u = lambda_gap * f64::from(s);
            let v = mu_gap * f64::from(t);
            if u.norm() <= tol.root_separation || v.norm() <= tol.root_separation {
                continue;
            }
            if (u - v).norm() <= tol.root_separation {
                continue;
            }
            let (pu, pv) = (phi_scalar(u), phi_scalar(v));
            if pu.norm() > tol.classify && (pu - pv).norm() <= tol.classify * pu.norm().max(1.0) {
                out.item3_signs.push((s, t));
            }
        }
    }
    out.item3 = !out.item3_signs.is_empty();
    Ok(out)
}

fn in_two_pi_i_z_star(d: Complex64, tol: f64) -> bool {
    let k = (d.im / (2.0 * PI)).round();
    k != 0.0 && (d - Complex64::new(0.0, 2.0 * PI * k)).norm() <= tol
}
