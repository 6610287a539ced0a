//! Right-hand sides of the Schwarz-Pick estimates, the recurring quadratic
//! left-hand form, and single-point checks that pair the two.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cauchy::Jet;
use crate::error::{Error, Result};
use crate::geometry::{bergman_metric, BallPoint, Direction};
use crate::holomap::HoloMap;
use crate::linalg::{inner, norm, norm_sq, to_pairs, CVec};
use crate::multiindex::{binomial, factorial, MultiIndex};

/// Identifiers of the checked inequalities, as they appear in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum InequalityId {
    /// `|f^(k)(z)| <= k!(1+|z|)^{k-1}(1-|f(z)|^2)/(1-|z|^2)^k` for a scalar map of the disk.
    #[serde(rename = "1.1")]
    ModulusDisk,
    /// The older partial-derivative estimate with the `n^{|v|/2}|v|! C(n+|v|-1, n-1)` constant.
    #[serde(rename = "1.2")]
    PartialBaseline,
    /// `H_{f(z)}(f'(z) beta, f'(z) beta) <= H_z(beta, beta)`.
    #[serde(rename = "1.3")]
    FirstOrder,
    /// The Frechet-derivative estimate of order `k`.
    #[serde(rename = "1.4")]
    Frechet,
    /// Homogeneous Taylor polynomial at the origin against `(1-|a0|^2)^2`.
    #[serde(rename = "3.1")]
    OriginDirectional,
    /// Single Taylor coefficient at the origin.
    #[serde(rename = "3.2")]
    OriginCoefficient,
    /// Quadratic form of `f^(k)` for maps of the disk.
    #[serde(rename = "4.1")]
    DiskQuadratic,
    /// Quadratic form of a partial derivative.
    #[serde(rename = "5.1")]
    PartialQuadratic,
    /// Modulus of a partial derivative of a scalar map.
    #[serde(rename = "5.2")]
    PartialModulus,
    /// Quadratic form of a partial derivative at a point of the first axis.
    #[serde(rename = "5.3")]
    RadialQuadratic,
}

impl InequalityId {
    pub const ALL: [InequalityId; 10] = [
        InequalityId::ModulusDisk,
        InequalityId::PartialBaseline,
        InequalityId::FirstOrder,
        InequalityId::Frechet,
        InequalityId::OriginDirectional,
        InequalityId::OriginCoefficient,
        InequalityId::DiskQuadratic,
        InequalityId::PartialQuadratic,
        InequalityId::PartialModulus,
        InequalityId::RadialQuadratic,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            InequalityId::ModulusDisk => "1.1",
            InequalityId::PartialBaseline => "1.2",
            InequalityId::FirstOrder => "1.3",
            InequalityId::Frechet => "1.4",
            InequalityId::OriginDirectional => "3.1",
            InequalityId::OriginCoefficient => "3.2",
            InequalityId::DiskQuadratic => "4.1",
            InequalityId::PartialQuadratic => "5.1",
            InequalityId::PartialModulus => "5.2",
            InequalityId::RadialQuadratic => "5.3",
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        InequalityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown inequality id {s:?}")))
    }
}

/// Where a bound was evaluated.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundContext {
    pub map: String,
    pub z: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub v: Option<MultiIndex>,
    /// Output coordinate used by the scalar estimates.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub component: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub id: InequalityId,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub ratio: f64,
    pub context: BoundContext,
}

impl BoundReport {
    pub fn new(id: InequalityId, lhs: f64, rhs: f64, context: BoundContext) -> Self {
        let ratio = if lhs == 0.0 && rhs == 0.0 { 0.0 } else { lhs / rhs };
        BoundReport {
            id,
            lhs,
            rhs,
            slack: rhs - lhs,
            ratio,
            context,
        }
    }
}

/// `|<D, w>|^2 + (1 - |w|^2)|D|^2`.
pub fn lhs_quadratic(d: &CVec, w: &CVec) -> f64 {
    inner(d, w).norm_sqr() + (1.0 - norm_sq(w)) * norm_sq(d)
}

/// The factor `1 + |<beta,z>| / ((1-|z|^2)|beta|^2 + |<beta,z>|^2)^{1/2}`.
pub fn direction_factor(z: &BallPoint, beta: &Direction) -> f64 {
    let t = inner(beta, z).norm();
    if t == 0.0 {
        return 1.0;
    }
    let s = ((1.0 - z.norm().powi(2)) * beta.norm().powi(2) + t * t).sqrt();
    1.0 + t / s
}

/// `k!^2 (direction factor)^{2(k-1)} H_z(beta, beta)^k`.
pub fn rhs_main(k: u32, z: &BallPoint, beta: &Direction) -> f64 {
    let h = bergman_metric(z, beta);
    factorial(k).powi(2) * direction_factor(z, beta).powi(2 * (k as i32 - 1)) * h.powi(k as i32)
}

/// `[k!(1-|f|^2)(1+|z|)^{k-1}/(1-|z|^2)^k]^2` for `|z|` the modulus of a disk point.
pub fn rhs_disk(k: u32, z_norm: f64, fz_norm: f64) -> f64 {
    let r = factorial(k) * (1.0 - fz_norm * fz_norm) * (1.0 + z_norm).powi(k as i32 - 1)
        / (1.0 - z_norm * z_norm).powi(k as i32);
    r * r
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialBounds {
    /// `S [v!(1+|z|)^{|v|-1}(1-|f|^2)/(1-|z|^2)^{|v|}]^2`.
    pub squared: f64,
    /// Square root of `squared`, the bound on `|d^v f|` for scalar maps.
    pub modulus: f64,
    /// `n^{|v|/2}|v|! C(n+|v|-1, n-1)(1-|f|^2)(1+|z|)^{|v|-1}/(1-|z|^2)^{|v|}`.
    pub baseline: f64,
}

pub fn rhs_partial(v: &MultiIndex, z_norm: f64, fz_norm: f64) -> Result<PartialBounds> {
    if v.is_zero() {
        return Err(Error::ZeroMultiIndex);
    }
    let k = v.degree();
    let n = v.dim() as u32;
    let common = (1.0 - fz_norm * fz_norm) * (1.0 + z_norm).powi(k as i32 - 1)
        / (1.0 - z_norm * z_norm).powi(k as i32);
    let modulus = v.sharpness_factor()?.sqrt() * v.factorial() * common;
    let baseline = (n as f64).powf(k as f64 / 2.0) * factorial(k) * binomial(n + k - 1, n - 1) * common;
    Ok(PartialBounds {
        squared: modulus * modulus,
        modulus,
        baseline,
    })
}

/// Terms of `(1+r)^{|v|-1}` of degree at most `v_1`.
pub fn radial_mu(v: &MultiIndex, r: f64) -> f64 {
    let k = v.degree();
    let v1 = v.entries().first().copied().unwrap_or(0);
    (0..=v1.min(k.saturating_sub(1)))
        .map(|l| binomial(k - 1, l) * r.powi(l as i32))
        .sum()
}

/// `S [v! mu(z)(1-|f|^2)/(1-|z|^2)^{(v_1+|v|)/2}]^2` for `z` on the first axis.
pub fn rhs_radial(v: &MultiIndex, z: &BallPoint, fz_norm: f64) -> Result<f64> {
    if v.is_zero() {
        return Err(Error::ZeroMultiIndex);
    }
    if !z.on_first_axis() {
        return Err(Error::OffAxis);
    }
    let r = z.norm();
    let v1 = v.entries()[0] as f64;
    let k = v.degree() as f64;
    let m = v.factorial() * radial_mu(v, r) * (1.0 - fz_norm * fz_norm)
        / (1.0 - r * r).powf((v1 + k) / 2.0);
    Ok(v.sharpness_factor()? * m * m)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OriginBounds {
    /// `(1-|a0|^2)^2`.
    pub directional: f64,
    /// `S (1-|a0|^2)^2`.
    pub coefficient: f64,
}

pub fn rhs_origin(v: &MultiIndex, a0_norm: f64) -> Result<OriginBounds> {
    let base = (1.0 - a0_norm * a0_norm).powi(2);
    Ok(OriginBounds {
        directional: base,
        coefficient: v.sharpness_factor()? * base,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum AjVariant {
    /// `k`-th derivative of `g o phi` for a disk automorphism `phi` moving `xi` to 0.
    Disk,
    /// `d^v` of `g(phi(z_1), z'/...)` at a point of the first axis.
    Radial(MultiIndex),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AjTerms {
    /// First index of `moduli`: 1 for the disk variant, 0 for the radial one.
    pub first: u32,
    pub moduli: Vec<f64>,
    pub sum: f64,
    pub closed_form: f64,
}

/// Moduli of the coefficients `A_j` in the expansion of a high derivative of
/// a composition with a disk automorphism, with their sum and its closed form.
pub fn aj_coefficients(k: u32, xi: Complex64, variant: &AjVariant) -> Result<AjTerms> {
    let r = xi.norm();
    if !(r < 1.0) {
        return Err(Error::OutsideBall { norm: r });
    }
    let denom = 1.0 - r * r;
    match variant {
        AjVariant::Disk => {
            if k == 0 {
                return Err(Error::Domain("order must be at least 1".into()));
            }
            let moduli: Vec<f64> = (1..=k)
                .map(|j| {
                    factorial(k) * factorial(k - 1) / (factorial(k - j) * factorial(j - 1))
                        * r.powi((k - j) as i32)
                        / denom.powi(k as i32)
                })
                .collect();
            Ok(AjTerms {
                first: 1,
                sum: moduli.iter().sum(),
                moduli,
                closed_form: factorial(k) * (1.0 + r).powi(k as i32 - 1) / denom.powi(k as i32),
            })
        }
        AjVariant::Radial(v) => {
            if v.is_zero() {
                return Err(Error::ZeroMultiIndex);
            }
            let total = v.degree();
            let v1 = v.entries()[0];
            let rest = total - v1;
            let scale = denom.powf((v1 + total) as f64 / 2.0);
            let moduli: Vec<f64> = (0..=v1)
                .map(|j| {
                    if j + rest == 0 {
                        return 0.0;
                    }
                    v.factorial() * factorial(total - 1)
                        / (factorial(v1 - j) * factorial(j + rest - 1))
                        * r.powi((v1 - j) as i32)
                        / scale
                })
                .collect();
            Ok(AjTerms {
                first: 0,
                sum: moduli.iter().sum(),
                moduli,
                closed_form: v.factorial() * radial_mu(v, r) / scale,
            })
        }
    }
}

/// One inequality to evaluate at a jet's base point.
#[derive(Clone, Debug, PartialEq)]
pub enum Check {
    ModulusDisk { k: u32 },
    PartialBaseline { v: MultiIndex },
    FirstOrder { beta: Direction },
    Frechet { beta: Direction, k: u32 },
    /// `beta` must be a unit vector; evaluated at the origin.
    OriginDirectional { beta: Direction, k: u32 },
    /// Evaluated at the origin.
    OriginCoefficient { v: MultiIndex },
    DiskQuadratic { k: u32 },
    PartialQuadratic { v: MultiIndex },
    PartialModulus { v: MultiIndex },
    RadialQuadratic { v: MultiIndex },
}

impl Check {
    pub fn id(&self) -> InequalityId {
        match self {
            Check::ModulusDisk { .. } => InequalityId::ModulusDisk,
            Check::PartialBaseline { .. } => InequalityId::PartialBaseline,
            Check::FirstOrder { .. } => InequalityId::FirstOrder,
            Check::Frechet { .. } => InequalityId::Frechet,
            Check::OriginDirectional { .. } => InequalityId::OriginDirectional,
            Check::OriginCoefficient { .. } => InequalityId::OriginCoefficient,
            Check::DiskQuadratic { .. } => InequalityId::DiskQuadratic,
            Check::PartialQuadratic { .. } => InequalityId::PartialQuadratic,
            Check::PartialModulus { .. } => InequalityId::PartialModulus,
            Check::RadialQuadratic { .. } => InequalityId::RadialQuadratic,
        }
    }

    fn at_origin(&self) -> bool {
        matches!(self, Check::OriginDirectional { .. } | Check::OriginCoefficient { .. })
    }
}

/// Evaluates `check` for `f` at `z`.
pub fn check_inequality(f: &HoloMap, z: &BallPoint, check: &Check) -> Result<BoundReport> {
    let jet = Jet::new(f, z)?;
    check_with_jet(&jet, check, &f.label())
}

/// Evaluates `check` from precomputed derivatives.
pub fn check_with_jet(jet: &Jet, check: &Check, label: &str) -> Result<BoundReport> {
    let z = jet.point();
    let fz = jet.value();
    let n = z.dim();
    if check.at_origin() && z.norm() != 0.0 {
        return Err(Error::Precondition("origin checks need a jet at the origin".into()));
    }
    let fz_norm = norm(fz);
    let mut ctx = BoundContext {
        map: label.to_string(),
        z: to_pairs(z),
        ..Default::default()
    };
    let scalar = |d: &CVec| (d[0], fz[0].norm());
    let report = match check {
        Check::ModulusDisk { k } => {
            require_disk(n)?;
            ctx.k = Some(*k);
            ctx.component = Some(0);
            let d = jet.partial(&MultiIndex::new(vec![*k]))?;
            let (d0, f0) = scalar(&d);
            BoundReport::new(check.id(), d0.norm(), rhs_disk(*k, z.norm(), f0).sqrt(), ctx)
        }
        Check::PartialBaseline { v } => {
            ctx.v = Some(v.clone());
            ctx.component = Some(0);
            let (d0, f0) = scalar(&jet.partial(v)?);
            let b = rhs_partial(v, z.norm(), f0)?;
            BoundReport::new(check.id(), d0.norm(), b.baseline, ctx)
        }
        Check::FirstOrder { beta } => {
            ctx.beta = Some(to_pairs(beta));
            ctx.k = Some(1);
            let d = jet.first(beta)?;
            let w = BallPoint::new(fz.clone())?;
            BoundReport::new(check.id(), bergman_metric(&w, &d), bergman_metric(z, beta), ctx)
        }
        Check::Frechet { beta, k } => {
            ctx.beta = Some(to_pairs(beta));
            ctx.k = Some(*k);
            let d = jet.frechet(beta, *k)?.value;
            let w = BallPoint::new(fz.clone())?;
            BoundReport::new(check.id(), bergman_metric(&w, &d), rhs_main(*k, z, beta), ctx)
        }
        Check::OriginDirectional { beta, k } => {
            if (beta.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::NotUnitDirection { norm: beta.norm() });
            }
            ctx.beta = Some(to_pairs(beta));
            ctx.k = Some(*k);
            let d = jet.frechet(beta, *k)?.value / Complex64::new(factorial(*k), 0.0);
            let b = rhs_origin(&MultiIndex::axis(n, 0, (*k).max(1)), fz_norm)?;
            BoundReport::new(check.id(), lhs_quadratic(&d, fz), b.directional, ctx)
        }
        Check::OriginCoefficient { v } => {
            ctx.v = Some(v.clone());
            let a = jet.partial(v)? / Complex64::new(v.factorial(), 0.0);
            let b = rhs_origin(v, fz_norm)?;
            BoundReport::new(check.id(), lhs_quadratic(&a, fz), b.coefficient, ctx)
        }
        Check::DiskQuadratic { k } => {
            require_disk(n)?;
            ctx.k = Some(*k);
            let d = jet.partial(&MultiIndex::new(vec![*k]))?;
            BoundReport::new(check.id(), lhs_quadratic(&d, fz), rhs_disk(*k, z.norm(), fz_norm), ctx)
        }
        Check::PartialQuadratic { v } => {
            ctx.v = Some(v.clone());
            let d = jet.partial(v)?;
            let b = rhs_partial(v, z.norm(), fz_norm)?;
            BoundReport::new(check.id(), lhs_quadratic(&d, fz), b.squared, ctx)
        }
        Check::PartialModulus { v } => {
            ctx.v = Some(v.clone());
            ctx.component = Some(0);
            let (d0, f0) = scalar(&jet.partial(v)?);
            let b = rhs_partial(v, z.norm(), f0)?;
            BoundReport::new(check.id(), d0.norm(), b.modulus, ctx)
        }
        Check::RadialQuadratic { v } => {
            ctx.v = Some(v.clone());
            let rhs = rhs_radial(v, z, fz_norm)?;
            let d = jet.partial(v)?;
            BoundReport::new(check.id(), lhs_quadratic(&d, fz), rhs, ctx)
        }
    };
    Ok(report)
}

fn require_disk(n: usize) -> Result<()> {
    if n != 1 {
        return Err(Error::Domain(format!(
            "disk estimates need a one-variable map, got n = {n}"
        )));
    }
    Ok(())
}
