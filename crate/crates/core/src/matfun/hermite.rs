//! Polynomial representation of `f(a)` by confluent Hermite interpolation.
//!
//! Eigenvalues closer than `hermite_cluster` are merged into one node whose
//! interpolation order starts at the cluster size. Orders are then lowered
//! while the product `prod_c (a - z_c I)^(j_c)` stays numerically zero, so
//! the interpolating polynomial follows the minimal polynomial of `a` when
//! it can (for example `a = I` gives a constant).

use num_complex::Complex64;
use serde::Serialize;

use super::{cut_distance, MatFunError, MatrixFunction};
use crate::config::Tolerances;
use crate::linalg::{eigenvalues, ComplexMatrix, ONE, ZERO};

/// Highest confluent order accepted at a single node.
pub const MAX_HERMITE_ORDER: usize = 16;

/// Relative size below which the annihilating product counts as zero.
const ANNIHILATION_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HermiteNode {
    #[serde(serialize_with = "crate::scalar::census::ser_complex")]
    pub center: Complex64,
    /// Eigenvalues merged into this node.
    pub multiplicity: usize,
    /// Interpolation order actually used (`1 <= order <= multiplicity`).
    pub order: usize,
}

/// `p(z) = sum_k coefficients[k] z^k` with `p(base) ~ f(base)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolynomialRep {
    pub function: MatrixFunction,
    #[serde(serialize_with = "ser_coefficients")]
    pub coefficients: Vec<Complex64>,
    pub base: ComplexMatrix,
    pub nodes: Vec<HermiteNode>,
}

fn ser_coefficients<S: serde::Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&crate::scalar::format_complex(*z))?;
    }
    seq.end()
}

impl PolynomialRep {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// Scalar evaluation by Horner's rule.
    pub fn eval_scalar(&self, z: Complex64) -> Complex64 {
        self.coefficients.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// `p(base)` by Horner's rule.
    pub fn evaluate(&self) -> ComplexMatrix {
        self.evaluate_at(&self.base)
    }

    pub fn evaluate_at(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let n = m.dim();
        let mut acc = ComplexMatrix::zeros(n);
        for &c in self.coefficients.iter().rev() {
            acc = (&acc * m).shift(c);
        }
        acc
    }
}

pub fn polynomial_rep(
    a: &ComplexMatrix,
    f: MatrixFunction,
    tol: &Tolerances,
) -> Result<PolynomialRep, MatFunError> {
    let eigs = eigenvalues(a, tol)?;
    if f == MatrixFunction::Log {
        for &lambda in &eigs {
            let distance = cut_distance(lambda);
            if distance <= tol.cut {
                return Err(MatFunError::EigenvalueOnCut {
                    eigenvalue: lambda,
                    distance,
                });
            }
        }
    }

    let mut nodes = cluster(&eigs, tol.hermite_cluster);
    if let Some(node) = nodes.iter().find(|n| n.multiplicity > MAX_HERMITE_ORDER) {
        return Err(MatFunError::IllConditionedInterpolation {
            order: node.multiplicity,
            cap: MAX_HERMITE_ORDER,
        });
    }
    reduce_orders(a, &mut nodes);

    let points: Vec<Complex64> = nodes
        .iter()
        .flat_map(|node| std::iter::repeat(node.center).take(node.order))
        .collect();
    let newton = divided_differences(&points, f);
    Ok(PolynomialRep {
        function: f,
        coefficients: newton_to_monomial(&newton, &points),
        base: a.clone(),
        nodes,
    })
}

/// Single-linkage clusters of radius `radius`, centred at their mean.
fn cluster(eigs: &[Complex64], radius: f64) -> Vec<HermiteNode> {
    let m = eigs.len();
    let mut label: Vec<usize> = (0..m).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..m {
        for j in i + 1..m {
            if (eigs[i] - eigs[j]).norm() <= radius {
                let (ri, rj) = (root(&mut label, i), root(&mut label, j));
                label[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut nodes: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..m {
        let r = root(&mut label, i);
        match nodes.iter_mut().find(|(id, _, _)| *id == r) {
            Some((_, sum, count)) => {
                *sum += eigs[i];
                *count += 1;
            }
            None => nodes.push((r, eigs[i], 1)),
        }
    }
    nodes
        .into_iter()
        .map(|(_, sum, count)| HermiteNode {
            center: sum / count as f64,
            multiplicity: count,
            order: count,
        })
        .collect()
}

/// Lowers node orders greedily while `prod_c (a - z_c I)^(j_c)` stays zero.
fn reduce_orders(a: &ComplexMatrix, nodes: &mut [HermiteNode]) {
    let scale = a.norm_fro().max(1.0);
    let annihilates = |nodes: &[HermiteNode]| {
        let mut p = ComplexMatrix::identity(a.dim());
        let mut degree = 0;
        for node in nodes {
            let shifted = a.shift(-node.center);
            for _ in 0..node.order {
                p = &p * &shifted;
                degree += 1;
            }
        }
        p.norm_fro() <= ANNIHILATION_REL * scale.powi(degree)
    };
    for i in 0..nodes.len() {
        while nodes[i].order > 1 {
            nodes[i].order -= 1;
            if !annihilates(nodes) {
                nodes[i].order += 1;
                break;
            }
        }
    }
}

/// Newton-form coefficients `f[z_0, ..., z_k]`; repeated points must be adjacent.
fn divided_differences(points: &[Complex64], f: MatrixFunction) -> Vec<Complex64> {
    let m = points.len();
    // column k of the table, overwritten in place: table[i] = f[z_i .. z_{i+k}]
    let mut table: Vec<Complex64> = points.iter().map(|&z| taylor_coefficient(f, z, 0)).collect();
    let mut newton = vec![table[0]];
    for k in 1..m {
        for i in 0..m - k {
            let (zi, zk) = (points[i], points[i + k]);
            table[i] = if zi == zk {
                taylor_coefficient(f, zi, k)
            } else {
                (table[i + 1] - table[i]) / (zk - zi)
            };
        }
        newton.push(table[0]);
    }
    newton
}

/// `f^(k)(z) / k!`.
fn taylor_coefficient(f: MatrixFunction, z: Complex64, k: usize) -> Complex64 {
    match f {
        MatrixFunction::Exp => z.exp() / factorial(k),
        MatrixFunction::Log if k == 0 => z.ln(),
        MatrixFunction::Log => {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            Complex64::new(sign / k as f64, 0.0) / z.powi(k as i32)
        }
        MatrixFunction::Phi => phi_moment(z, k) / factorial(k),
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `I_k(z) = int_0^1 t^k e^(t z) dt`, the `k`-th derivative of `phi`.
fn phi_moment(z: Complex64, k: usize) -> Complex64 {
    let r = z.norm();
    if r < 2.0 + k as f64 {
        // sum_n z^n / (n! (n + k + 1))
        let mut term = ONE; // z^n / n!
        let mut sum = ZERO;
        for n in 0..400 {
            let contribution = term / (n + k + 1) as f64;
            sum += contribution;
            if n as f64 > r && contribution.norm() <= 1e-17 * sum.norm() {
                break;
            }
            term = term * z / (n + 1) as f64;
        }
        sum
    } else {
        // I_j = (e^z - j I_{j-1}) / z; stable once |z| exceeds j
        let ez = z.exp();
        let mut moment = crate::scalar::phi_scalar(z);
        for j in 1..=k {
            moment = (ez - moment * j as f64) / z;
        }
        moment
    }
}

fn newton_to_monomial(newton: &[Complex64], points: &[Complex64]) -> Vec<Complex64> {
    let mut poly: Vec<Complex64> = Vec::with_capacity(newton.len());
    for k in (0..newton.len()).rev() {
        // poly <- poly * (z - z_k) + c_k
        let mut next = vec![ZERO; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * points[k];
        }
        next[0] += newton[k];
        poly = next;
    }
    while poly.len() > 1 && *poly.last().unwrap() == ZERO {
        poly.pop();
    }
    poly
}
