//! Bergman metric and automorphisms of the unit ball, plus constructors for
//! the maps that attain or asymptotically attain the estimates.

use std::ops::Deref;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holomap::{ClosedForm, HoloMap};
use crate::linalg::{inner, is_finite, norm, norm_sq, CMat, CVec, ONE, ZERO};
use crate::multiindex::MultiIndex;

/// A point strictly inside the unit ball of `C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPoint(CVec);

impl BallPoint {
    pub fn new(coords: CVec) -> Result<Self> {
        let r = norm(&coords);
        if !is_finite(&coords) || r >= 1.0 {
            return Err(Error::OutsideBall { norm: r });
        }
        Ok(BallPoint(coords))
    }

    pub fn origin(n: usize) -> Self {
        BallPoint(CVec::zeros(n))
    }

    pub fn from_slice(coords: &[Complex64]) -> Result<Self> {
        BallPoint::new(CVec::from_column_slice(coords))
    }

    pub fn coords(&self) -> &CVec {
        &self.0
    }

    pub fn into_inner(self) -> CVec {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    /// Whether all coordinates but the first vanish.
    pub fn on_first_axis(&self) -> bool {
        self.0.iter().skip(1).all(|c| *c == ZERO)
    }
}

impl Deref for BallPoint {
    type Target = CVec;
    fn deref(&self) -> &CVec {
        &self.0
    }
}

/// A tangent direction in `C^n` with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction(CVec);

impl Direction {
    pub fn new(coords: CVec) -> Result<Self> {
        if !is_finite(&coords) {
            return Err(Error::Parse("direction has non-finite entries".into()));
        }
        Ok(Direction(coords))
    }

    /// Same as [`Direction::new`] but rejects the zero vector.
    pub fn nonzero(coords: CVec) -> Result<Self> {
        let d = Direction::new(coords)?;
        if d.is_zero() {
            return Err(Error::ZeroDirection);
        }
        Ok(d)
    }

    pub fn coords(&self) -> &CVec {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == ZERO)
    }
}

impl Deref for Direction {
    type Target = CVec;
    fn deref(&self) -> &CVec {
        &self.0
    }
}

/// `H_z(beta, beta) = [(1 - |z|^2)|beta|^2 + |<beta, z>|^2] / (1 - |z|^2)^2`.
pub fn bergman_metric(z: &BallPoint, beta: &CVec) -> f64 {
    let s = 1.0 - norm_sq(z);
    (s * norm_sq(beta) + inner(beta, z).norm_sqr()) / (s * s)
}

/// Where to evaluate the derivative of an automorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JacobianAt {
    Origin,
    Center,
}

/// The involutive automorphism exchanging `0` and `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism {
    a: BallPoint,
}

impl Automorphism {
    pub fn new(a: BallPoint) -> Self {
        Automorphism { a }
    }

    pub fn center(&self) -> &BallPoint {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Orthogonal projection onto the complex line through `a` (zero when `a = 0`).
    pub fn projection(&self) -> CMat {
        let a = self.a.coords();
        let aa = norm_sq(a);
        if aa == 0.0 {
            return CMat::zeros(a.len(), a.len());
        }
        a * a.adjoint() / Complex64::new(aa, 0.0)
    }

    /// `phi_a(w)` on raw coordinates; the caller guarantees `|w| < 1`.
    pub(crate) fn apply_raw(&self, w: &CVec) -> CVec {
        let a = self.a.coords();
        let aa = norm_sq(a);
        let wa = inner(w, a);
        let s = (1.0 - aa).sqrt();
        let p = if aa == 0.0 {
            CVec::zeros(a.len())
        } else {
            a * (wa / aa)
        };
        let q = w - &p;
        (a - p - q * Complex64::new(s, 0.0)) / (ONE - wa)
    }

    pub fn apply(&self, w: &BallPoint) -> Result<BallPoint> {
        check_dim(self.dim(), w.dim())?;
        Ok(BallPoint(self.apply_raw(w)))
    }

    /// `phi_a'(0) = -(1-|a|^2) P_a - (1-|a|^2)^{1/2} Q_a`, or
    /// `phi_a'(a) = -P_a/(1-|a|^2) - Q_a/(1-|a|^2)^{1/2}`.
    pub fn jacobian(&self, at: JacobianAt) -> CMat {
        let n = self.dim();
        let p = self.projection();
        let q = CMat::identity(n, n) - &p;
        let t = 1.0 - norm_sq(&self.a);
        let (cp, cq) = match at {
            JacobianAt::Origin => (t, t.sqrt()),
            JacobianAt::Center => (1.0 / t, 1.0 / t.sqrt()),
        };
        -(p * Complex64::new(cp, 0.0)) - q * Complex64::new(cq, 0.0)
    }
}

pub fn moebius_apply(a: &Automorphism, w: &BallPoint) -> Result<BallPoint> {
    a.apply(w)
}

pub fn moebius_jacobian(a: &Automorphism, at: JacobianAt) -> CMat {
    a.jacobian(at)
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Left side minus right side of the equality condition for the origin
/// extremal map: `|<a_v, a0>|^2 + (1-|a0|^2)|a_v|^2 - S(v)(1-|a0|^2)^2`.
pub fn origin_equality_residual(a0: &CVec, av: &CVec, v: &MultiIndex) -> Result<f64> {
    let s = v.sharpness_factor()?;
    let t = 1.0 - norm_sq(a0);
    Ok(inner(av, a0).norm_sqr() + t * norm_sq(av) - s * t * t)
}

/// The coefficient `a_v = t * u` on the ray of the unit vector `u` that
/// attains equality in the origin estimate for the given `a0` and `v`.
pub fn extremal_origin_coefficient(a0: &BallPoint, u: &CVec, v: &MultiIndex) -> Result<CVec> {
    check_dim(a0.dim(), u.len())?;
    let un = norm(u);
    if un == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let u = u / Complex64::new(un, 0.0);
    let s = v.sharpness_factor()?;
    let t0 = 1.0 - norm_sq(a0);
    let scale = t0 * s.sqrt() / (inner(&u, a0).norm_sqr() + t0).sqrt();
    Ok(u * Complex64::new(scale, 0.0))
}

/// `f(z) = a0 + a_v z^v / (1 + <a_v, a0> z^v / (1 - |a0|^2))`.
///
/// The parameters must satisfy the equality condition to `1e-12`; only
/// then is the map guaranteed to send the ball into the ball.
pub fn extremal_origin_map(a0: &BallPoint, av: &CVec, v: &MultiIndex) -> Result<HoloMap> {
    check_dim(a0.dim(), av.len())?;
    if v.is_zero() {
        return Err(Error::ZeroMultiIndex);
    }
    let residual = origin_equality_residual(a0, av, v)?;
    if residual.abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "origin equality condition off by {residual:e}"
        )));
    }
    Ok(HoloMap::Family(ClosedForm::ExtremalOrigin {
        a0: a0.coords().clone(),
        av: av.clone(),
        v: v.clone(),
    }))
}

/// Derivative at `xi` that makes the first-order map through `(xi, w0)`
/// extremal: `J = phi_{w0}'(0) U phi_xi'(xi)` for an isometry `U`.
pub fn extremal_k1_jacobian(xi: &BallPoint, w0: &BallPoint, isometry: &CMat) -> Result<CMat> {
    let (m, n) = isometry.shape();
    check_dim(n, xi.dim())?;
    check_dim(m, w0.dim())?;
    let outer = Automorphism::new(w0.clone()).jacobian(JacobianAt::Origin);
    let inner_jac = Automorphism::new(xi.clone()).jacobian(JacobianAt::Center);
    Ok(outer * isometry * inner_jac)
}

/// `F'(0) = phi_{w0}'(w0) J phi_xi'(0)`, whose isometry characterizes equality
/// in the first-order estimate.
pub fn induced_origin_jacobian(xi: &BallPoint, w0: &BallPoint, jac: &CMat) -> CMat {
    let outer = Automorphism::new(w0.clone()).jacobian(JacobianAt::Center);
    let inner_jac = Automorphism::new(xi.clone()).jacobian(JacobianAt::Origin);
    outer * jac * inner_jac
}

/// The map through `f(xi) = w0` with `f'(xi) = J` attaining equality at first order:
///
/// `f(z) = w0 + [ (1 - <z,xi>)/(1-|xi|^2) + w0^H J (z - xi)/(1-|w0|^2) ]^{-1} J (z - xi)`.
pub fn extremal_k1_map(xi: &BallPoint, w0: &BallPoint, jac: &CMat) -> Result<HoloMap> {
    let (m, n) = jac.shape();
    check_dim(n, xi.dim())?;
    check_dim(m, w0.dim())?;
    if n > m {
        return Err(Error::Precondition(format!(
            "domain dimension {n} exceeds codomain dimension {m}"
        )));
    }
    let f0 = induced_origin_jacobian(xi, w0, jac);
    let gram = f0.adjoint() * &f0;
    let defect = (gram - DMatrix::<Complex64>::identity(n, n))
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if defect > 1e-10 {
        return Err(Error::Precondition(format!(
            "induced derivative at the origin is not an isometry (defect {defect:e})"
        )));
    }
    Ok(HoloMap::Family(ClosedForm::ExtremalK1 {
        xi: xi.clone(),
        w0: w0.coords().clone(),
        jac: jac.clone(),
    }))
}

/// Parameters for the asymptotic-sharpness families.
#[derive(Clone, Debug, PartialEq)]
pub enum SharpnessParams {
    /// Disk-to-ball family: `xi` in the punctured disk, `w` in the punctured ball.
    Disk { xi: Complex64, w: CVec },
    /// Lifted power of a disk automorphism: `xi` on the first axis, `|w| < 1`.
    Power {
        v: MultiIndex,
        xi: BallPoint,
        w: Complex64,
    },
    /// First-coordinate disk automorphism: `xi` on the first axis, nonzero.
    Axis { xi: BallPoint, w: Complex64 },
}

/// The three families used to show asymptotic sharpness.
///
/// * `Disk`: `f_w(z) = g_w(-e^{-i arg xi} (xi - z)/(1 - conj(xi) z))`,
///   `g_w(z) = (w/|w|)(|w| - z)/(1 - |w| z)`.
/// * `Power`: `f = g o phi_xi`, `g(z) = (w - c z^v)/(1 - conj(w) c z^v)`,
///   `c = sqrt(S(v))`.
/// * `Axis`: `f = g o phi_xi`, `g(z) = (w + e^{-i theta} z_1)/(1 + conj(w) e^{-i theta} z_1)`,
///   `theta = arg xi_1 - arg w`.
pub fn sharpness_family(params: SharpnessParams) -> Result<HoloMap> {
    let family = match params {
        SharpnessParams::Disk { xi, w } => {
            if xi == ZERO || xi.norm() >= 1.0 {
                return Err(Error::Domain(format!("need 0 < |xi| < 1, got {}", xi.norm())));
            }
            let wn = norm(&w);
            if !is_finite(&w) || wn == 0.0 || wn >= 1.0 {
                return Err(Error::Domain(format!("need 0 < |w| < 1, got {wn}")));
            }
            ClosedForm::SharpDisk { xi, w }
        }
        SharpnessParams::Power { v, xi, w } => {
            check_dim(v.dim(), xi.dim())?;
            if v.is_zero() {
                return Err(Error::ZeroMultiIndex);
            }
            if !xi.on_first_axis() {
                return Err(Error::OffAxis);
            }
            if !(w.norm() < 1.0) {
                return Err(Error::Domain(format!("need |w| < 1, got {}", w.norm())));
            }
            ClosedForm::SharpPower { v, xi, w }
        }
        SharpnessParams::Axis { xi, w } => {
            if !xi.on_first_axis() {
                return Err(Error::OffAxis);
            }
            if xi.norm() == 0.0 {
                return Err(Error::Domain("need xi != 0".into()));
            }
            if w == ZERO || !(w.norm() < 1.0) {
                return Err(Error::Domain(format!("need 0 < |w| < 1, got {}", w.norm())));
            }
            ClosedForm::SharpAxis { xi, w }
        }
    };
    Ok(HoloMap::Family(family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cvec, rvec, unit};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bp(v: &[Complex64]) -> BallPoint {
        BallPoint::from_slice(v).unwrap()
    }

    fn max_entry(m: &CMat) -> f64 {
        m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn ball_point_rejects_boundary() {
        assert!(BallPoint::new(rvec(&[0.6, 0.8])).is_err());
        assert!(BallPoint::new(rvec(&[0.6, 0.79])).is_ok());
    }

    #[test]
    fn metric_examples() {
        let beta = cvec(&[c(0.3, -1.0), c(2.0, 0.5)]);
        let h0 = bergman_metric(&BallPoint::origin(2), &beta);
        assert!((h0 - norm_sq(&beta)).abs() < 1e-15);
        let z = bp(&[c(0.5, 0.0), ZERO]);
        assert!((bergman_metric(&z, &unit(2, 0)) - 16.0 / 9.0).abs() < 1e-15);
        assert!((bergman_metric(&z, &unit(2, 1)) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn moebius_examples() {
        let a = bp(&[c(0.3, 0.1), c(-0.2, 0.4)]);
        let phi = Automorphism::new(a.clone());
        let at0 = phi.apply(&BallPoint::origin(2)).unwrap();
        assert!(norm(&(at0.coords() - a.coords())) < 1e-15);
        let ata = phi.apply(&a).unwrap();
        assert!(norm(&ata) < 1e-15);

        let w = bp(&[c(0.1, 0.7), c(0.2, -0.3)]);
        let id = Automorphism::new(BallPoint::origin(2));
        let minus = id.apply(&w).unwrap();
        assert!(norm(&(minus.coords() + w.coords())) < 1e-15);

        let back = phi.apply(&phi.apply(&w).unwrap()).unwrap();
        assert!(norm(&(back.coords() - w.coords())) < 1e-12);
        assert!(phi.apply(&w).unwrap().norm() < 1.0);
    }

    #[test]
    fn jacobian_at_zero_parameter_is_minus_identity() {
        let id = Automorphism::new(BallPoint::origin(3));
        for at in [JacobianAt::Origin, JacobianAt::Center] {
            let j = id.jacobian(at);
            assert!(max_entry(&(j + CMat::identity(3, 3))) < 1e-15);
        }
    }

    #[test]
    fn jacobians_are_mutually_inverse() {
        let phi = Automorphism::new(bp(&[c(0.5, -0.2), c(0.1, 0.3), c(0.0, 0.4)]));
        let prod = phi.jacobian(JacobianAt::Origin) * phi.jacobian(JacobianAt::Center);
        assert!(max_entry(&(prod - CMat::identity(3, 3))) < 1e-12);
    }

    #[test]
    fn jacobian_matches_central_differences() {
        // holomorphic, so the complex derivative is the real directional derivative
        let phi = Automorphism::new(bp(&[c(0.4, 0.2), c(-0.3, 0.1)]));
        let j0 = phi.jacobian(JacobianAt::Origin);
        let h = 1e-5;
        for col in 0..2 {
            let e = unit(2, col) * c(h, 0.0);
            let plus = phi.apply_raw(&e);
            let minus = phi.apply_raw(&(-e.clone()));
            let fd = (plus - minus) / c(2.0 * h, 0.0);
            for row in 0..2 {
                assert!((fd[row] - j0[(row, col)]).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn extremal_origin_coefficient_hits_equality() {
        let a0 = bp(&[c(0.3, 0.2), c(-0.1, 0.4)]);
        let u = cvec(&[c(1.0, 1.0), c(0.5, -2.0)]);
        let v = MultiIndex::new(vec![2, 1]);
        let av = extremal_origin_coefficient(&a0, &u, &v).unwrap();
        assert!(origin_equality_residual(&a0, &av, &v).unwrap().abs() < 1e-14);
        assert!(extremal_origin_map(&a0, &av, &v).is_ok());
        let off = &av * c(1.01, 0.0);
        assert!(matches!(
            extremal_origin_map(&a0, &off, &v),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn extremal_k1_rejects_non_isometry() {
        let xi = bp(&[c(0.2, 0.0), c(0.0, 0.3)]);
        let w0 = bp(&[c(0.1, 0.1), ZERO]);
        let u = CMat::identity(2, 2);
        let j = extremal_k1_jacobian(&xi, &w0, &u).unwrap();
        assert!(extremal_k1_map(&xi, &w0, &j).is_ok());
        assert!(extremal_k1_map(&xi, &w0, &(j * c(0.9, 0.0))).is_err());
        let wide = CMat::identity(1, 2);
        assert!(extremal_k1_map(&xi, &bp(&[c(0.1, 0.0)]), &wide).is_err());
    }

    #[test]
    fn sharpness_family_domains() {
        let w = cvec(&[c(0.5, 0.0)]);
        assert!(sharpness_family(SharpnessParams::Disk { xi: ZERO, w: w.clone() }).is_err());
        assert!(sharpness_family(SharpnessParams::Disk { xi: c(0.5, 0.0), w }).is_ok());
        let off = bp(&[c(0.1, 0.0), c(0.1, 0.0)]);
        assert_eq!(
            sharpness_family(SharpnessParams::Axis { xi: off, w: c(0.5, 0.0) }),
            Err(Error::OffAxis)
        );
        assert!(sharpness_family(SharpnessParams::Axis {
            xi: BallPoint::origin(2),
            w: c(0.5, 0.0)
        })
        .is_err());
        assert!(sharpness_family(SharpnessParams::Power {
            v: MultiIndex::new(vec![1, 1]),
            xi: BallPoint::origin(2),
            w: c(0.5, 0.0)
        })
        .is_ok());
    }
}
