//! Almost-unitary matrices: defect, repair, truncation and error buildup.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{dot, l2_norm, ComplexMatrix};
use crate::error::{Error, Result};

/// Tolerance for a matrix to count as unitary.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Constant in the repair distance bound `|A - U| < 4.91 q sqrt(s)`.
pub const REPAIR_CONSTANT: f64 = 4.91;

/// `|I - A A^dagger|_max`.
pub fn defect(a: &ComplexMatrix) -> f64 {
    let s = a.dim();
    let mut worst = 0.0f64;
    for i in 0..s {
        for j in i..s {
            let mut g = dot(a.row(i), a.row(j));
            if i == j {
                g -= 1.0;
            }
            worst = worst.max(g.norm());
        }
    }
    worst
}

pub fn is_unitary(a: &ComplexMatrix) -> bool {
    defect(a) <= UNITARY_TOLERANCE
}

/// `4.91 q sqrt(s)`.
pub fn repair_bound(s: usize, q: f64) -> f64 {
    REPAIR_CONSTANT * q * (s as f64).sqrt()
}

fn normalize(row: &mut [Complex64]) {
    let norm = l2_norm(row);
    row.iter_mut().for_each(|z| *z /= norm);
}

/// One classical Gram-Schmidt sweep: row `i` loses its projections onto
/// the already orthonormal rows `0..i`, all computed from the original
/// row, then is renormalized.
fn cgs_sweep(m: &mut ComplexMatrix) {
    let s = m.dim();
    for i in 0..s {
        let original = m.row(i).to_vec();
        let coeffs: Vec<Complex64> = (0..i).map(|j| dot(&original, m.row(j))).collect();
        let mut row = original;
        for (j, c) in coeffs.into_iter().enumerate() {
            for (k, z) in row.iter_mut().enumerate() {
                *z -= c * m[(j, k)];
            }
        }
        normalize(&mut row);
        m.row_mut(i).copy_from_slice(&row);
    }
}

/// Turns a `q`-almost-unitary matrix into a nearby unitary one by row
/// normalization followed by classical Gram-Schmidt with renormalization.
/// A second sweep runs only if rounding left the result measurably
/// non-unitary.
pub fn repair_to_unitary(a: &ComplexMatrix, q: f64) -> Result<ComplexMatrix> {
    let s = a.dim();
    if s < 2 {
        return Err(Error::Precondition(format!("dimension {s} below 2")));
    }
    if !(q > 0.0 && q <= 1.0 / (4.0 * s as f64)) {
        return Err(Error::Precondition(format!(
            "q = {q} outside (0, 1/(4s)] = (0, {}]",
            1.0 / (4.0 * s as f64)
        )));
    }
    let d = defect(a);
    if d >= q {
        return Err(Error::Precondition(format!(
            "matrix defect {d} is not below q = {q}"
        )));
    }
    let mut u = a.clone();
    for i in 0..s {
        normalize(u.row_mut(i));
    }
    cgs_sweep(&mut u);
    if !is_unitary(&u) {
        cgs_sweep(&mut u);
    }
    Ok(u)
}

/// Certificate that a matrix is `q`-almost-unitary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlmostUnitaryCert {
    /// Guaranteed bound `2 delta sqrt(s) + delta^2 s`.
    pub q: f64,
    /// Measured defect of the matrix.
    pub defect: f64,
}

impl AlmostUnitaryCert {
    pub fn holds(&self) -> bool {
        self.defect <= self.q
    }
}

/// `2 delta sqrt(s) + delta^2 s`.
pub fn truncation_bound(s: usize, delta: f64) -> f64 {
    let s = s as f64;
    2.0 * delta * s.sqrt() + delta * delta * s
}

/// Rounds every real and imaginary part of `u` to the nearest multiple of
/// `delta`.
pub fn truncate_matrix(u: &ComplexMatrix, delta: f64) -> (ComplexMatrix, AlmostUnitaryCert) {
    let round = |x: f64| (x / delta).round() * delta;
    let mut v = u.clone();
    for z in v.entries_mut() {
        *z = Complex64::new(round(z.re), round(z.im));
    }
    let cert = AlmostUnitaryCert {
        q: truncation_bound(u.dim(), delta),
        defect: defect(&v),
    };
    (v, cert)
}

/// `2T / [sqrt(s) (2c - T)]`: the `L_2` drift of a product of `T`
/// matrices each within `1/(c s)` of a unitary.
pub fn propagation_bound(s: usize, t: usize, c: f64) -> Result<f64> {
    let t = t as f64;
    if c <= t / 2.0 {
        return Err(Error::Precondition(format!(
            "c = {c} not above T/2 = {}",
            t / 2.0
        )));
    }
    Ok(2.0 * t / ((s as f64).sqrt() * (2.0 * c - t)))
}

/// `|| U_1 ... U_T v - U^_1 ... U^_T v ||_2`.
pub fn check_propagation(
    exact: &[ComplexMatrix],
    approx: &[ComplexMatrix],
    v: &[Complex64],
) -> Result<f64> {
    if exact.len() != approx.len() {
        return Err(Error::DimensionMismatch {
            expected: exact.len(),
            got: approx.len(),
        });
    }
    let mut a = v.to_vec();
    let mut b = v.to_vec();
    for (u, w) in exact.iter().zip(approx).rev() {
        a = u.apply(&a)?;
        b = w.apply(&b)?;
    }
    let diff: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    Ok(l2_norm(&diff))
}
