//! Scalar complex analysis around `phi(z) = (e^z - 1)/z`.
//!
//! Everything here revolves around the one-parameter family
//! `f_lambda(z) = e^z - lambda z - 1`:
//!
//! - its zeros for `lambda = 1` are `0` and the set `{u != 0 : e^u = 1 + u}`;
//! - for `lambda = phi(u)` its nonzero zeros are exactly the `v` with
//!   `phi(v) = phi(u)`, the companions of `u`;
//! - its zero count in a rectangle is an integer winding number, computed in
//!   [`census`] by phase accumulation along the boundary.

pub mod census;
pub mod prop2;
pub mod roots;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use census::{winding_zero_count, ZeroCensus};
pub use prop2::{verify_prop2_window, Prop2Window};
pub use roots::{
    companions, default_u_band, first_u_roots, scan_u_set, solve_u_set, CompanionPair, USetScan,
};

use crate::config::Tolerances;

/// Newton iterations before a seed is abandoned.
pub const NEWTON_MAX_STEPS: usize = 50;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("invalid rectangle: need re_min < re_max and im_min < im_max, got {0}")]
    InvalidRectangle(Rectangle),
    #[error("|f| = {min_abs:e} at {} on the boundary of {rect} is below the floor {floor:e}; try {suggestion}", format_complex(*at))]
    BoundaryTooClose {
        rect: Rectangle,
        at: Complex64,
        min_abs: f64,
        floor: f64,
        suggestion: Rectangle,
    },
    #[error("winding sum {raw} is not within 1e-3 of an integer")]
    NonIntegralWinding { raw: f64 },
    #[error("boundary subdivision exceeded the depth limit near {}", format_complex(*at))]
    SubdivisionLimit { at: Complex64 },
    #[error("search band {0} comes within 0.5 of the origin")]
    BandTouchesOrigin(Rectangle),
    #[error("winding census counts {census} zeros in {rect} but Newton found {found}")]
    CensusMismatch {
        rect: Rectangle,
        census: usize,
        found: usize,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no window offset clears the boundary for u = {}", format_complex(*u))]
    NoValidWindow { u: Complex64 },
    #[error("cannot parse complex literal `{0}`")]
    ParseComplex(String),
}

/// Axis-aligned rectangle in the complex plane.
///
/// Serialized as `{"re": [lo, hi], "im": [lo, hi]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RectangleJson", into = "RectangleJson")]
pub struct Rectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

#[derive(Serialize, Deserialize)]
struct RectangleJson {
    re: [f64; 2],
    im: [f64; 2],
}

impl TryFrom<RectangleJson> for Rectangle {
    type Error = ScalarError;

    fn try_from(r: RectangleJson) -> Result<Self, ScalarError> {
        Rectangle::new(r.re[0], r.re[1], r.im[0], r.im[1])
    }
}

impl From<Rectangle> for RectangleJson {
    fn from(r: Rectangle) -> Self {
        RectangleJson {
            re: [r.re_min, r.re_max],
            im: [r.im_min, r.im_max],
        }
    }
}

impl Rectangle {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self, ScalarError> {
        let r = Self {
            re_min,
            re_max,
            im_min,
            im_max,
        };
        let finite = [re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite());
        if !finite || re_min >= re_max || im_min >= im_max {
            return Err(ScalarError::InvalidRectangle(r));
        }
        Ok(r)
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (self.re_min..=self.re_max).contains(&z.re) && (self.im_min..=self.im_max).contains(&z.im)
    }

    /// Euclidean distance from `z` to the closed rectangle (zero inside).
    pub fn distance_to(&self, z: Complex64) -> f64 {
        let dx = (self.re_min - z.re).max(z.re - self.re_max).max(0.0);
        let dy = (self.im_min - z.im).max(z.im - self.im_max).max(0.0);
        dx.hypot(dy)
    }

    /// Same rectangle grown by `delta` on every side.
    pub fn inflate(&self, delta: f64) -> Self {
        Self {
            re_min: self.re_min - delta,
            re_max: self.re_max + delta,
            im_min: self.im_min - delta,
            im_max: self.im_max + delta,
        }
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}] x [{}, {}]",
            self.re_min, self.re_max, self.im_min, self.im_max
        )
    }
}

/// `e^z - 1` without cancellation near the origin.
pub fn exp_m1(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let half = (z.im * 0.5).sin();
    Complex64::new(z.re.exp_m1() * c - 2.0 * half * half, z.re.exp() * s)
}

/// `phi(z) = (e^z - 1)/z`, with `phi(0) = 1`.
pub fn phi_scalar(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        // Taylor terms through z^5; the next one is below 1e-21 here.
        let mut acc = Complex64::new(1.0 / 720.0, 0.0);
        for m in (1..=5).rev() {
            acc = acc * z + 1.0 / factorial(m) as f64;
        }
        acc
    } else {
        exp_m1(z) / z
    }
}

fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

/// `f_lambda(z) = e^z - lambda z - 1` and its derivative.
#[inline]
pub fn exp_linear(lambda: Complex64, z: Complex64) -> (Complex64, Complex64) {
    let e = z.exp();
    (exp_m1(z) - lambda * z, e - lambda)
}

/// Newton's method from `z0`; `None` when the iteration diverges or stalls.
pub fn newton(
    f: impl Fn(Complex64) -> (Complex64, Complex64),
    z0: Complex64,
    tol: &Tolerances,
) -> Option<Complex64> {
    let mut z = z0;
    for _ in 0..NEWTON_MAX_STEPS {
        let (v, d) = f(z);
        if d == Complex64::new(0.0, 0.0) {
            return None;
        }
        let step = v / d;
        if !step.is_finite() {
            return None;
        }
        z -= step;
        if step.norm() < tol.newton_step * (1.0 + z.norm()) {
            return Some(z);
        }
    }
    None
}

/// Renders `a+bi` with shortest round-trip precision.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

/// Parses `[+-]D` or `[+-]D[+-]Di` where `D` is a plain decimal (`12`, `1.5`,
/// `.5`, `3.`). No whitespace, no exponent.
pub fn parse_complex(s: &str) -> Result<Complex64, ScalarError> {
    let err = || ScalarError::ParseComplex(s.to_string());
    let bytes = s.as_bytes();
    let mut i = 0;
    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
        i += 1;
    }
    let re_end = i + decimal_len(&bytes[i..]).ok_or_else(err)?;
    let re: f64 = s[..re_end].parse().map_err(|_| err())?;
    if re_end == bytes.len() {
        return Ok(Complex64::new(re, 0.0));
    }
    let rest = &s[re_end..];
    let sign = match rest.as_bytes()[0] {
        b'+' => 1.0,
        b'-' => -1.0,
        _ => return Err(err()),
    };
    let body = rest[1..].strip_suffix('i').ok_or_else(err)?;
    if decimal_len(body.as_bytes()) != Some(body.len()) {
        return Err(err());
    }
    let im: f64 = body.parse().map_err(|_| err())?;
    Ok(Complex64::new(re, sign * im))
}

/// Length of the leading decimal literal, if any.
fn decimal_len(b: &[u8]) -> Option<usize> {
    let int = b.iter().take_while(|c| c.is_ascii_digit()).count();
    let mut len = int;
    let mut frac = 0;
    if b.get(len) == Some(&b'.') {
        frac = b[len + 1..].iter().take_while(|c| c.is_ascii_digit()).count();
        len += 1 + frac;
    }
    (int + frac > 0).then_some(len)
}
