//! Small complex linear-algebra helpers shared by every module.
//!
//! Points of `C^n` are column vectors; the Hermitian product is linear in
//! the first slot: `<z, w> = sum_j z_j conj(w_j)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CVec = DVector<Complex64>;
pub type CMat = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `<z, w> = sum_j z_j conj(w_j)`.
pub fn inner(z: &CVec, w: &CVec) -> Complex64 {
    z.iter().zip(w.iter()).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sq(z: &CVec) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum()
}

pub fn norm(z: &CVec) -> f64 {
    norm_sq(z).sqrt()
}

pub fn cvec(entries: &[Complex64]) -> CVec {
    CVec::from_column_slice(entries)
}

/// Builds a vector from real parts only.
pub fn rvec(entries: &[f64]) -> CVec {
    CVec::from_iterator(entries.len(), entries.iter().map(|&x| Complex64::new(x, 0.0)))
}

pub fn unit(n: usize, j: usize) -> CVec {
    let mut e = CVec::zeros(n);
    e[j] = ONE;
    e
}

/// Relative difference with a unit floor on the reference magnitude.
///
/// Values handled here are derivatives of maps bounded by one, so the
/// natural absolute scale is one; below it the measure is absolute.
pub fn rel_gap(x: &CVec, reference: &CVec) -> f64 {
    norm(&(x - reference)) / norm(reference).max(1.0)
}

pub fn rel_gap_scalar(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs().max(1.0)
}

/// Relative difference measured against the larger of the two magnitudes.
pub fn rel_diff(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

pub fn is_finite(z: &CVec) -> bool {
    z.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// `[re, im]` pairs, the wire form used by reports.
pub fn to_pairs(z: &CVec) -> Vec<[f64; 2]> {
    z.iter().map(|c| [c.re, c.im]).collect()
}

pub fn from_pairs(pairs: &[[f64; 2]]) -> CVec {
    CVec::from_iterator(pairs.len(), pairs.iter().map(|p| Complex64::new(p[0], p[1])))
}
