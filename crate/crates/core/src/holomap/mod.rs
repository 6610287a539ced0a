//! Holomorphic maps between unit balls: polynomial tables, closed-form
//! families, and compositions with ball automorphisms.

mod coefficients;
mod poly;

pub use coefficients::{coefficient_checks, extremal_direction, CoefficientReport, Residual};
pub use poly::{random_polymap, random_polymap_with, PolyMap};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{check_dim, Automorphism, BallPoint, Direction};
use crate::linalg::{inner, norm, norm_sq, CMat, CVec, ONE};
use crate::multiindex::MultiIndex;

/// Closed-form members of the map class. These are only ever evaluated
/// pointwise; derivatives come from the quadrature engine.
#[derive(Clone, Debug, PartialEq)]
pub enum ClosedForm {
    /// A ball automorphism `phi_a`, `n = m`.
    Automorphism(Automorphism),
    /// `a0 + a_v z^v / (1 + <a_v, a0> z^v / (1 - |a0|^2))`.
    ExtremalOrigin { a0: CVec, av: CVec, v: MultiIndex },
    /// First-order extremal map through `f(xi) = w0` with `f'(xi) = jac`.
    ExtremalK1 { xi: BallPoint, w0: CVec, jac: CMat },
    /// Disk-to-ball sharpness family, `n = 1`.
    SharpDisk { xi: Complex64, w: CVec },
    /// Power sharpness family, `m = 1`.
    SharpPower {
        v: MultiIndex,
        xi: BallPoint,
        w: Complex64,
    },
    /// First-axis sharpness family, `m = 1`.
    SharpAxis { xi: BallPoint, w: Complex64 },
}

impl ClosedForm {
    fn dims(&self) -> (usize, usize) {
        match self {
            ClosedForm::Automorphism(a) => (a.dim(), a.dim()),
            ClosedForm::ExtremalOrigin { a0, v, .. } => (v.dim(), a0.len()),
            ClosedForm::ExtremalK1 { jac, .. } => (jac.ncols(), jac.nrows()),
            ClosedForm::SharpDisk { w, .. } => (1, w.len()),
            ClosedForm::SharpPower { xi, .. } | ClosedForm::SharpAxis { xi, .. } => (xi.dim(), 1),
        }
    }

    fn label(&self) -> String {
        match self {
            ClosedForm::Automorphism(_) => "automorphism".into(),
            ClosedForm::ExtremalOrigin { v, .. } => format!("extremal-origin v={v}"),
            ClosedForm::ExtremalK1 { .. } => "extremal-k1".into(),
            ClosedForm::SharpDisk { .. } => "sharp-disk".into(),
            ClosedForm::SharpPower { v, .. } => format!("sharp-power v={v}"),
            ClosedForm::SharpAxis { .. } => "sharp-axis".into(),
        }
    }

    fn eval_raw(&self, z: &CVec) -> Result<CVec> {
        match self {
            ClosedForm::Automorphism(phi) => Ok(phi.apply_raw(z)),
            ClosedForm::ExtremalOrigin { a0, av, v } => {
                let zv = v.monomial(z.as_slice());
                let c = inner(av, a0) / (1.0 - norm_sq(a0));
                Ok(a0 + av * (zv / (ONE + c * zv)))
            }
            ClosedForm::ExtremalK1 { xi, w0, jac } => {
                let d = z - xi.coords();
                let jd = jac * d;
                let denom = (ONE - inner(z, xi)) / (1.0 - norm_sq(xi))
                    + inner(&jd, w0) / (1.0 - norm_sq(w0));
                if denom.norm() <= 1e-12 {
                    return Err(Error::Precondition(
                        "extremal map denominator vanished inside the ball".into(),
                    ));
                }
                Ok(w0 + jd / denom)
            }
            ClosedForm::SharpDisk { xi, w } => {
                let rot = Complex64::from_polar(1.0, -xi.arg());
                let zeta = -rot * (xi - z[0]) / (ONE - xi.conj() * z[0]);
                let wn = norm(w);
                Ok(w * ((wn - zeta) / (wn * (ONE - wn * zeta))))
            }
            ClosedForm::SharpPower { v, xi, w } => {
                let p = Automorphism::new(xi.clone()).apply_raw(z);
                let c = v.sharpness_factor()?.sqrt();
                let u = v.monomial(p.as_slice()) * c;
                Ok(CVec::from_element(1, (w - u) / (ONE - w.conj() * u)))
            }
            ClosedForm::SharpAxis { xi, w } => {
                let p = Automorphism::new(xi.clone()).apply_raw(z);
                let theta = xi[0].arg() - w.arg();
                let u = Complex64::from_polar(1.0, -theta) * p[0];
                Ok(CVec::from_element(1, (w + u) / (ONE + w.conj() * u)))
            }
        }
    }
}

/// A holomorphic map from the unit ball of `C^n` into the unit ball of `C^m`.
#[derive(Clone, Debug, PartialEq)]
pub enum HoloMap {
    Poly(PolyMap),
    Family(ClosedForm),
    /// `phi_a o inner`.
    Composed {
        outer: Automorphism,
        inner: Box<HoloMap>,
    },
}

impl HoloMap {
    pub fn domain_dim(&self) -> usize {
        match self {
            HoloMap::Poly(p) => p.domain_dim(),
            HoloMap::Family(c) => c.dims().0,
            HoloMap::Composed { inner, .. } => inner.domain_dim(),
        }
    }

    pub fn codomain_dim(&self) -> usize {
        match self {
            HoloMap::Poly(p) => p.codomain_dim(),
            HoloMap::Family(c) => c.dims().1,
            HoloMap::Composed { outer, .. } => outer.dim(),
        }
    }

    /// Short identifier used in reports.
    pub fn label(&self) -> String {
        match self {
            HoloMap::Poly(p) => format!("poly deg={}", p.degree()),
            HoloMap::Family(c) => c.label(),
            HoloMap::Composed { inner, .. } => format!("automorphism o {}", inner.label()),
        }
    }

    pub fn as_poly(&self) -> Option<&PolyMap> {
        match self {
            HoloMap::Poly(p) => Some(p),
            _ => None,
        }
    }

    pub fn eval(&self, z: &BallPoint) -> Result<CVec> {
        check_dim(self.domain_dim(), z.dim())?;
        self.eval_raw(z)
    }

    /// Evaluation without the ball check on `z`; used on quadrature nodes
    /// that are already known to lie inside the ball.
    pub(crate) fn eval_raw(&self, z: &CVec) -> Result<CVec> {
        match self {
            HoloMap::Poly(p) => Ok(p.eval_raw(z.as_slice())),
            HoloMap::Family(c) => c.eval_raw(z),
            HoloMap::Composed { outer, inner } => {
                let w = inner.eval_raw(z)?;
                let r = norm(&w);
                if !(r < 1.0) {
                    return Err(Error::OutsideBall { norm: r });
                }
                Ok(outer.apply_raw(&w))
            }
        }
    }
}

impl From<PolyMap> for HoloMap {
    fn from(p: PolyMap) -> Self {
        HoloMap::Poly(p)
    }
}

pub fn eval(f: &HoloMap, z: &BallPoint) -> Result<CVec> {
    f.eval(z)
}

/// `phi_a o f`.
pub fn compose_ball_automorphism(a: &BallPoint, f: HoloMap) -> Result<HoloMap> {
    check_dim(f.codomain_dim(), a.dim())?;
    Ok(HoloMap::Composed {
        outer: Automorphism::new(a.clone()),
        inner: Box::new(f),
    })
}

/// `lambda -> f(z + lambda beta)` on the disk `|lambda| < radius`, where
/// `radius` is the largest radius keeping `z + lambda beta` inside the ball.
#[derive(Clone, Debug)]
pub struct LineMap<'a> {
    base: &'a HoloMap,
    z: CVec,
    beta: CVec,
    radius: f64,
}

impl<'a> LineMap<'a> {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn codomain_dim(&self) -> usize {
        self.base.codomain_dim()
    }

    pub fn eval(&self, lambda: Complex64) -> Result<CVec> {
        if !(lambda.norm() < self.radius) {
            return Err(Error::Domain(format!(
                "|lambda| = {} outside the line disk of radius {}",
                lambda.norm(),
                self.radius
            )));
        }
        self.base.eval_raw(&(&self.z + &self.beta * lambda))
    }
}

pub fn restrict_to_line<'a>(f: &'a HoloMap, z: &BallPoint, beta: &Direction) -> Result<LineMap<'a>> {
    check_dim(f.domain_dim(), z.dim())?;
    check_dim(z.dim(), beta.len())?;
    let b = beta.norm();
    if b == 0.0 {
        return Err(Error::ZeroDirection);
    }
    // |z + lambda beta|^2 < 1 is the disk |lambda |beta| + eta| < sigma
    let eta = inner(z, beta).norm() / b;
    let sigma = (1.0 - norm_sq(z) + eta * eta).sqrt();
    Ok(LineMap {
        base: f,
        z: z.coords().clone(),
        beta: beta.coords().clone(),
        radius: (sigma - eta) / b,
    })
}
