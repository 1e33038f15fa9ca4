//! Roots of `e^u = 1 + u` and level-set companions of `phi`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::census::{ser_complex, winding_number};
use super::{exp_linear, newton, phi_scalar, Rectangle, ScalarError};
use crate::config::Tolerances;

/// Cell edge length for the root scan.
const CELL_SIZE: f64 = 1.0;
/// Fractional offsets tried for the interior grid lines when a cell edge
/// passes too close to a root.
const GRID_JITTER: [f64; 5] = [0.0, 0.0137, -0.0291, 0.0419, -0.0533];
/// Seeds per axis tried inside a cell, in order, until Newton matches the census.
const SEED_GRIDS: [usize; 3] = [1, 3, 6];

/// Distinct nonzero roots of `e^u = 1 + u` in a band, checked against the
/// winding census of `e^z - 1 - z` over the same band.
#[derive(Debug, Clone, PartialEq)]
pub struct USetScan {
    pub band: Rectangle,
    /// Sorted by `|Im|`, then real part, then imaginary part.
    pub roots: Vec<Complex64>,
    pub band_census: usize,
}

impl USetScan {
    pub fn residual(root: Complex64) -> f64 {
        exp_linear(Complex64::new(1.0, 0.0), root).0.norm()
    }
}

/// Finds every root of `e^u = 1 + u` inside `band`.
///
/// The band is cut into unit cells. Each cell with a nonzero winding count
/// is searched with Newton until the number of distinct roots found equals
/// the count; the total must also equal the census of the whole band.
pub fn scan_u_set(band: Rectangle, tol: &Tolerances) -> Result<USetScan, ScalarError> {
    if band.distance_to(Complex64::new(0.0, 0.0)) < 0.5 {
        return Err(ScalarError::BandTouchesOrigin(band));
    }
    let f = |z: Complex64| exp_linear(Complex64::new(1.0, 0.0), z).0;
    let band_census = winding_number(f, band, tol.census_floor)?.count;

    let nx = (band.width() / CELL_SIZE).ceil().max(1.0) as usize;
    let ny = (band.height() / CELL_SIZE).ceil().max(1.0) as usize;

    let mut last_err = None;
    for jitter in GRID_JITTER {
        let cells = grid_cells(band, nx, ny, jitter);
        let per_cell: Result<Vec<Vec<Complex64>>, ScalarError> = cells
            .par_iter()
            .map(|&cell| roots_in_cell(cell, tol))
            .collect();
        match per_cell {
            Ok(found) => {
                let mut roots: Vec<Complex64> = found.into_iter().flatten().collect();
                sort_roots(&mut roots);
                roots.dedup_by(|a, b| (*a - *b).norm() <= tol.root_separation);
                if roots.len() != band_census {
                    return Err(ScalarError::CensusMismatch {
                        rect: band,
                        census: band_census,
                        found: roots.len(),
                    });
                }
                return Ok(USetScan {
                    band,
                    roots,
                    band_census,
                });
            }
            Err(e @ ScalarError::BoundaryTooClose { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one jitter attempted"))
}

/// The first `count` roots of `e^u = 1 + u` in `band`, ordered by `|Im|`.
pub fn solve_u_set(
    count: usize,
    band: Rectangle,
    tol: &Tolerances,
) -> Result<Vec<Complex64>, ScalarError> {
    let mut scan = scan_u_set(band, tol)?;
    scan.roots.truncate(count);
    Ok(scan.roots)
}

/// Upper band that holds at least the first `count` roots of `e^u = 1 + u`.
///
/// The `k`-th root sits near `Im u = 2 pi (k + 1/4)` with `Re u` close to
/// `ln |Im u|`, and the band stays clear of the origin.
pub fn default_u_band(count: usize) -> Rectangle {
    let im_max = 2.0 * std::f64::consts::PI * (count as f64 + 1.0);
    Rectangle {
        re_min: -2.0,
        re_max: 4.0 + im_max.ln(),
        im_min: 1.0,
        im_max,
    }
}

/// The first `count` roots in the upper half plane.
pub fn first_u_roots(count: usize, tol: &Tolerances) -> Result<Vec<Complex64>, ScalarError> {
    let roots = solve_u_set(count, default_u_band(count), tol)?;
    if roots.len() < count {
        return Err(ScalarError::Precondition(format!(
            "default band holds only {} roots",
            roots.len()
        )));
    }
    Ok(roots)
}

fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| {
        a.im.abs()
            .total_cmp(&b.im.abs())
            .then(a.re.total_cmp(&b.re))
            .then(a.im.total_cmp(&b.im))
    });
}

fn grid_cells(band: Rectangle, nx: usize, ny: usize, jitter: f64) -> Vec<Rectangle> {
    let lines = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        let step = (hi - lo) / n as f64;
        (0..=n)
            .map(|k| match k {
                0 => lo,
                k if k == n => hi,
                k => lo + (k as f64 + jitter) * step,
            })
            .collect()
    };
    let xs = lines(band.re_min, band.re_max, nx);
    let ys = lines(band.im_min, band.im_max, ny);
    let mut cells = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            cells.push(Rectangle {
                re_min: xs[i],
                re_max: xs[i + 1],
                im_min: ys[j],
                im_max: ys[j + 1],
            });
        }
    }
    cells
}

fn roots_in_cell(cell: Rectangle, tol: &Tolerances) -> Result<Vec<Complex64>, ScalarError> {
    let one = Complex64::new(1.0, 0.0);
    let census = winding_number(|z| exp_linear(one, z).0, cell, tol.census_floor)?.count;
    if census == 0 {
        return Ok(Vec::new());
    }
    let mut found: Vec<Complex64> = Vec::new();
    for per_axis in SEED_GRIDS {
        for sy in 0..per_axis {
            for sx in 0..per_axis {
                let seed = Complex64::new(
                    cell.re_min + cell.width() * (sx as f64 + 0.5) / per_axis as f64,
                    cell.im_min + cell.height() * (sy as f64 + 0.5) / per_axis as f64,
                );
                let Some(root) = newton(|z| exp_linear(one, z), seed, tol) else {
                    continue;
                };
                if cell.contains(root)
                    && USetScan::residual(root) <= tol.root_residual
                    && found.iter().all(|r| (r - root).norm() > tol.root_separation)
                {
                    found.push(root);
                }
            }
        }
        if found.len() == census {
            return Ok(found);
        }
    }
    Err(ScalarError::CensusMismatch {
        rect: cell,
        census,
        found: found.len(),
    })
}

/// A pair `u != v` of nonzero numbers with `phi(u) = phi(v) != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompanionPair {
    #[serde(serialize_with = "ser_complex")]
    pub u: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub v: Complex64,
    /// Common value `phi(u) = phi(v)`.
    #[serde(serialize_with = "ser_complex")]
    pub level: Complex64,
    /// `|phi(v) - phi(u)|`.
    pub residual: f64,
}

impl CompanionPair {
    /// Validates a candidate pair against the companion conditions.
    pub fn new(u: Complex64, v: Complex64, tol: &Tolerances) -> Result<Self, ScalarError> {
        let pu = phi_scalar(u);
        let pv = phi_scalar(v);
        let residual = (pu - pv).norm();
        let sep = tol.root_separation;
        if u.norm() <= sep || v.norm() <= sep {
            return Err(ScalarError::Precondition("u and v must be nonzero".into()));
        }
        if (u - v).norm() <= sep {
            return Err(ScalarError::Precondition("u and v must be distinct".into()));
        }
        if pu.norm() <= tol.companion_level {
            return Err(ScalarError::Precondition("phi(u) must be nonzero".into()));
        }
        if residual > tol.companion_level * pu.norm().max(1.0) {
            return Err(ScalarError::Precondition(format!(
                "phi(u) and phi(v) differ by {residual:e}"
            )));
        }
        Ok(Self {
            u,
            v,
            level: pu,
            residual,
        })
    }
}

/// All companions `v` of `u` inside `band`, found by Newton on
/// `e^v - phi(u) v - 1` from a regular seed grid with spacing `grid_step`.
///
/// Results are de-duplicated and sorted by imaginary then real part.
pub fn companions(
    u: Complex64,
    band: Rectangle,
    grid_step: f64,
    tol: &Tolerances,
) -> Result<Vec<CompanionPair>, ScalarError> {
    let level = phi_scalar(u);
    if u.norm() <= tol.root_separation || level.norm() <= tol.companion_level {
        return Err(ScalarError::Precondition(
            "companions need u != 0 and phi(u) != 0".into(),
        ));
    }
    if !(grid_step > 0.0) {
        return Err(ScalarError::Precondition("grid step must be positive".into()));
    }
    let nx = (band.width() / grid_step).ceil().max(1.0) as usize;
    let ny = (band.height() / grid_step).ceil().max(1.0) as usize;
    let seeds: Vec<Complex64> = (0..ny)
        .flat_map(|j| {
            (0..nx).map(move |i| {
                Complex64::new(
                    (band.re_min + (i as f64 + 0.5) * grid_step).min(band.re_max),
                    (band.im_min + (j as f64 + 0.5) * grid_step).min(band.im_max),
                )
            })
        })
        .collect();

    let mut found: Vec<Complex64> = seeds
        .par_iter()
        .filter_map(|&seed| newton(|z| exp_linear(level, z), seed, tol))
        .filter(|&v| band.contains(v))
        .collect();
    found.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));

    let mut pairs: Vec<CompanionPair> = Vec::new();
    for v in found {
        if pairs.iter().any(|p| (p.v - v).norm() <= tol.root_separation) {
            continue;
        }
        if let Ok(pair) = CompanionPair::new(u, v, tol) {
            pairs.push(pair);
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn band_near_origin_rejected() {
        let band = Rectangle::new(-1.0, 5.0, 0.2, 10.0).unwrap();
        assert!(matches!(
            scan_u_set(band, &tol()),
            Err(ScalarError::BandTouchesOrigin(_))
        ));
    }

    #[test]
    fn low_band_has_no_roots() {
        let band = Rectangle::new(-5.0, 20.0, 1.0, 2.0 * PI).unwrap();
        let scan = scan_u_set(band, &tol()).unwrap();
        assert!(scan.roots.is_empty());
        assert_eq!(scan.band_census, 0);
    }

    #[test]
    fn conjugate_symmetry() {
        let upper = solve_u_set(3, Rectangle::new(-2.0, 20.0, 1.0, 25.0).unwrap(), &tol()).unwrap();
        let lower = solve_u_set(3, Rectangle::new(-2.0, 20.0, -25.0, -1.0).unwrap(), &tol()).unwrap();
        assert_eq!(upper.len(), 3);
        for (a, b) in upper.iter().zip(&lower) {
            assert!((a.conj() - b).norm() < 1e-12);
        }
    }

    #[test]
    fn companion_pair_validation() {
        let t = tol();
        assert!(CompanionPair::new(c(1.0, 1.0), c(1.0, 1.0), &t).is_err());
        assert!(CompanionPair::new(c(0.0, 0.0), c(1.0, 1.0), &t).is_err());
        assert!(CompanionPair::new(c(1.0, 0.0), c(2.0, 0.0), &t).is_err());
    }

    #[test]
    fn seed_at_u_is_filtered() {
        // a band hugging u itself contains only u and must come back empty
        let u = c(1.0, 0.5);
        let band = Rectangle::new(0.5, 1.5, 0.0, 1.0).unwrap();
        assert!(companions(u, band, 0.25, &tol()).unwrap().is_empty());
    }
}
