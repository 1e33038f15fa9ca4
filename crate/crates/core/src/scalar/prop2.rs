//! Two-zero census in a horizontal window of height `2 pi`.
//!
//! For `u` with `|Im u| < 2 pi`, `f(z) = e^z - phi(u) z - 1` vanishes at `0`
//! and at `u`. In the rectangle `[-r, r] x [-a, 2 pi - a]` containing both,
//! no third zero can appear: the census must come back exactly 2.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::census::ser_complex;
use super::{phi_scalar, winding_zero_count, Rectangle, ScalarError, ZeroCensus};
use crate::config::Tolerances;

/// Candidate offsets are `a = 2 pi k / WINDOW_STEPS` for `k = 1 .. WINDOW_STEPS - 1`.
const WINDOW_STEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop2Window {
    #[serde(serialize_with = "ser_complex")]
    pub u: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub lambda: Complex64,
    /// Window offset: the rectangle spans `Im in [-a, 2 pi - a]`.
    pub a: f64,
    pub r: f64,
    pub census: ZeroCensus,
    /// Offsets rejected for boundary interference before this one.
    pub rejected_offsets: usize,
    pub pass: bool,
}

pub fn verify_prop2_window(u: Complex64, tol: &Tolerances) -> Result<Prop2Window, ScalarError> {
    if !(u.im.abs() < 2.0 * PI) {
        return Err(ScalarError::Precondition(format!(
            "|Im u| = {} is not below 2 pi",
            u.im.abs()
        )));
    }
    if !(u.norm() >= 0.5) {
        return Err(ScalarError::Precondition(format!(
            "|u| = {} is below 0.5",
            u.norm()
        )));
    }
    let lambda = phi_scalar(u);
    let r = 10f64.max(u.re.abs() + 5.0);
    let mut rejected = 0;
    for k in 1..WINDOW_STEPS {
        let a = 2.0 * PI * k as f64 / WINDOW_STEPS as f64;
        if !(-a < u.im && u.im < 2.0 * PI - a) {
            continue;
        }
        let rect = Rectangle::new(-r, r, -a, 2.0 * PI - a)?;
        match winding_zero_count(lambda, rect, tol) {
            Ok(census) if census.boundary_min_abs > tol.window_clearance => {
                return Ok(Prop2Window {
                    u,
                    lambda,
                    a,
                    r,
                    pass: census.count == 2,
                    census,
                    rejected_offsets: rejected,
                });
            }
            Ok(_) | Err(ScalarError::BoundaryTooClose { .. }) => rejected += 1,
            Err(e) => return Err(e),
        }
    }
    Err(ScalarError::NoValidWindow { u })
}
