//! Argument-principle zero counts over rectangles.
//!
//! The boundary is walked counterclockwise and the phase of `f` is unwrapped
//! sample by sample. A boundary segment is accepted only when both of its
//! halves move the phase by less than `pi/2` and the two half-steps add up to
//! the whole step, so no full turn can hide between samples.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{exp_linear, Rectangle, ScalarError};
use crate::config::Tolerances;

/// Initial uniform samples per edge before adaptive bisection.
const INITIAL_SAMPLES_PER_EDGE: usize = 32;
const MAX_DEPTH: u32 = 40;

/// Zero count of `f(z) = e^z - lambda z - 1` inside a rectangle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCensus {
    #[serde(serialize_with = "crate::scalar::census::ser_complex")]
    pub lambda: Complex64,
    pub rect: Rectangle,
    pub count: usize,
    pub boundary_min_abs: f64,
    pub segments: usize,
}

pub(crate) fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&super::format_complex(*z))
}

/// Raw result of a winding computation for an arbitrary function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winding {
    pub count: usize,
    pub min_abs: f64,
    pub segments: usize,
}

/// Counts zeros of `e^z - lambda z - 1` inside `rect`, with multiplicity.
pub fn winding_zero_count(
    lambda: Complex64,
    rect: Rectangle,
    tol: &Tolerances,
) -> Result<ZeroCensus, ScalarError> {
    let w = winding_number(|z| exp_linear(lambda, z).0, rect, tol.census_floor)?;
    Ok(ZeroCensus {
        lambda,
        rect,
        count: w.count,
        boundary_min_abs: w.min_abs,
        segments: w.segments,
    })
}

struct Walker<'a, F> {
    f: &'a F,
    rect: Rectangle,
    floor: f64,
    min_abs: f64,
    total_phase: f64,
    segments: usize,
}

impl<F: Fn(Complex64) -> Complex64> Walker<'_, F> {
    fn eval(&mut self, z: Complex64) -> Result<Complex64, ScalarError> {
        let v = (self.f)(z);
        let a = v.norm();
        if !(a > self.floor) {
            let delta = 1e-3 * self.rect.width().min(self.rect.height());
            return Err(ScalarError::BoundaryTooClose {
                rect: self.rect,
                at: z,
                min_abs: a,
                floor: self.floor,
                suggestion: self.rect.inflate(delta),
            });
        }
        self.min_abs = self.min_abs.min(a);
        Ok(v)
    }

    fn segment(
        &mut self,
        za: Complex64,
        fa: Complex64,
        zb: Complex64,
        fb: Complex64,
        depth: u32,
    ) -> Result<(), ScalarError> {
        let zm = (za + zb) * 0.5;
        let fm = self.eval(zm)?;
        let d1 = (fm / fa).arg();
        let d2 = (fb / fm).arg();
        let whole = (fb / fa).arg();
        if d1.abs() < PI / 2.0 && d2.abs() < PI / 2.0 && (d1 + d2 - whole).abs() < 1e-9 {
            self.total_phase += d1 + d2;
            self.segments += 2;
            return Ok(());
        }
        if depth >= MAX_DEPTH {
            return Err(ScalarError::SubdivisionLimit { at: zm });
        }
        self.segment(za, fa, zm, fm, depth + 1)?;
        self.segment(zm, fm, zb, fb, depth + 1)
    }
}

/// Winding number of `f` around 0 along the counterclockwise boundary.
pub fn winding_number<F: Fn(Complex64) -> Complex64>(
    f: F,
    rect: Rectangle,
    floor: f64,
) -> Result<Winding, ScalarError> {
    let corners = [
        Complex64::new(rect.re_min, rect.im_min),
        Complex64::new(rect.re_max, rect.im_min),
        Complex64::new(rect.re_max, rect.im_max),
        Complex64::new(rect.re_min, rect.im_max),
    ];
    let mut w = Walker {
        f: &f,
        rect,
        floor,
        min_abs: f64::INFINITY,
        total_phase: 0.0,
        segments: 0,
    };
    for edge in 0..4 {
        let (start, end) = (corners[edge], corners[(edge + 1) % 4]);
        let mut z_prev = start;
        let mut f_prev = w.eval(start)?;
        for k in 1..=INITIAL_SAMPLES_PER_EDGE {
            let t = k as f64 / INITIAL_SAMPLES_PER_EDGE as f64;
            let z = if k == INITIAL_SAMPLES_PER_EDGE {
                end
            } else {
                start + (end - start) * t
            };
            let fz = w.eval(z)?;
            w.segment(z_prev, f_prev, z, fz, 0)?;
            z_prev = z;
            f_prev = fz;
        }
    }
    let raw = w.total_phase / (2.0 * PI);
    let rounded = raw.round();
    if (raw - rounded).abs() > 1e-3 || rounded < 0.0 {
        return Err(ScalarError::NonIntegralWinding { raw });
    }
    Ok(Winding {
        count: rounded as usize,
        min_abs: w.min_abs,
        segments: w.segments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn rect(a: f64, b: f64, c: f64, d: f64) -> Rectangle {
        Rectangle::new(a, b, c, d).unwrap()
    }

    #[test]
    fn single_zero_of_exp_minus_one() {
        let census = winding_zero_count(Complex64::new(0.0, 0.0), rect(-1.0, 1.0, -1.0, 1.0), &tol()).unwrap();
        assert_eq!(census.count, 1);
        assert!(census.boundary_min_abs > tol().census_floor);
        assert!(census.segments >= 4 * INITIAL_SAMPLES_PER_EDGE);
    }

    #[test]
    fn three_zeros_of_exp_minus_one() {
        let census = winding_zero_count(Complex64::new(0.0, 0.0), rect(-1.0, 1.0, -7.0, 7.0), &tol()).unwrap();
        assert_eq!(census.count, 3);
    }

    #[test]
    fn double_zero_counts_twice() {
        // e^z - z - 1 has a double zero at the origin
        let census = winding_zero_count(Complex64::new(1.0, 0.0), rect(-1.0, 1.0, -1.0, 1.0), &tol()).unwrap();
        assert_eq!(census.count, 2);
    }

    #[test]
    fn polynomial_winding() {
        let f = |z: Complex64| (z - 0.3) * (z + Complex64::new(0.0, 0.5)) * (z - 5.0);
        let w = winding_number(f, rect(-2.0, 2.0, -2.0, 2.0), 1e-10).unwrap();
        assert_eq!(w.count, 2);
    }

    #[test]
    fn zero_on_boundary_is_reported() {
        let err = winding_zero_count(Complex64::new(0.0, 0.0), rect(0.0, 1.0, -1.0, 1.0), &tol()).unwrap_err();
        match err {
            ScalarError::BoundaryTooClose { suggestion, .. } => {
                assert!(suggestion.re_min < 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn partition_additivity() {
        // fixed lambda, split [-6, 6] x [-3, 12] at Im = 4.1 (clear of zeros)
        let lambda = Complex64::new(0.4, -0.7);
        let whole = winding_zero_count(lambda, rect(-6.0, 6.0, -3.0, 12.0), &tol()).unwrap();
        let lower = winding_zero_count(lambda, rect(-6.0, 6.0, -3.0, 4.1), &tol()).unwrap();
        let upper = winding_zero_count(lambda, rect(-6.0, 6.0, 4.1, 12.0), &tol()).unwrap();
        assert_eq!(whole.count, lower.count + upper.count);
        assert!(whole.count >= 2);
    }
}
