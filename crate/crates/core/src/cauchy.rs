//! Derivatives of holomorphic maps by the Cauchy integral formula.
//!
//! On a torus `|w_j| = r_j` around `z` the trapezoid rule with `N` nodes per
//! circle turns
//!
//! ```text
//! d^v f(z) = v! / (2 pi i)^n  oint f(z + w) / w^{v + 1} dw
//! ```
//!
//! into a discrete Fourier coefficient of the sampled values. For analytic
//! integrands the error decays geometrically in `N`; for polynomials of
//! degree below `N` it is exact up to rounding.
//!
//! The Frechet derivative `D_k(f, z, beta)` is assembled twice: once as the
//! weighted multi-index sum of torus partials, once as the `k`-th derivative
//! of the line restriction `lambda -> f(z + lambda beta)` on a single circle.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_dim, BallPoint, Direction};
use crate::holomap::{restrict_to_line, HoloMap, PolyMap};
use crate::linalg::{rel_gap, to_pairs, CVec, ZERO};
use crate::multiindex::{factorial, MultiIndex};

pub const DEFAULT_NODES: usize = 64;
pub const BOUNDARY_NODES: usize = 128;
/// Beyond this radius the default spec switches to [`BOUNDARY_NODES`].
pub const BOUNDARY_RADIUS: f64 = 0.95;
/// Largest relative gap tolerated between the two Frechet routes.
pub const FRECHET_ROUTE_TOL: f64 = 1e-9;

/// Radii and node count of the quadrature torus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub radii: Vec<f64>,
    pub nodes: usize,
}

impl QuadratureSpec {
    pub fn new(radii: Vec<f64>, nodes: usize) -> Result<Self> {
        if !nodes.is_power_of_two() {
            return Err(Error::NodesNotPowerOfTwo(nodes));
        }
        if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(Error::Config("radii must be positive and finite".into()));
        }
        Ok(QuadratureSpec { radii, nodes })
    }

    /// Uniform radii `0.5 (1 - |z|) / sqrt(n)`; 64 nodes, 128 past `|z| = 0.95`.
    pub fn default_at(z: &BallPoint) -> Self {
        let n = z.dim();
        let r = 0.5 * (1.0 - z.norm()) / (n as f64).sqrt();
        let nodes = if z.norm() > BOUNDARY_RADIUS {
            BOUNDARY_NODES
        } else {
            DEFAULT_NODES
        };
        QuadratureSpec {
            radii: vec![r; n],
            nodes,
        }
    }

    pub fn with_nodes(mut self, nodes: usize) -> Result<Self> {
        if !nodes.is_power_of_two() {
            return Err(Error::NodesNotPowerOfTwo(nodes));
        }
        self.nodes = nodes;
        Ok(self)
    }

    /// Highest derivative order this node count resolves (`N >= 2 k + 2`).
    pub fn max_order(&self) -> u32 {
        (self.nodes.saturating_sub(2) / 2) as u32
    }

    pub fn check_order(&self, order: u32) -> Result<()> {
        if self.nodes < 2 * order as usize + 2 {
            return Err(Error::TooFewNodes {
                nodes: self.nodes,
                order,
            });
        }
        Ok(())
    }

    /// `sum_j (|z_j| + r_j)^2 < 1`.
    pub fn check_torus(&self, z: &CVec) -> Result<()> {
        check_dim(z.len(), self.radii.len())?;
        let extent: f64 = z
            .iter()
            .zip(&self.radii)
            .map(|(c, r)| (c.norm() + r).powi(2))
            .sum();
        if !(extent < 1.0) {
            return Err(Error::TorusOutsideBall { extent });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactPoly,
    Quadrature,
    FrechetSum,
    FrechetLine,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivativeOrder {
    Partial(MultiIndex),
    Directional { k: u32, beta: Vec<[f64; 2]> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeResult {
    pub value: CVec,
    pub order: DerivativeOrder,
    pub method: Method,
    /// Relative gap between the two Frechet routes, when both were run.
    pub route_gap: Option<f64>,
}

fn roots_of_unity(nodes: usize) -> Vec<Complex64> {
    (0..nodes)
        .map(|t| Complex64::from_polar(1.0, 2.0 * PI * t as f64 / nodes as f64))
        .collect()
}

/// Samples of a map on a quadrature torus, from which every partial
/// derivative up to the resolvable order is read off.
#[derive(Clone, Debug)]
pub struct TorusJet {
    n: usize,
    m: usize,
    spec: QuadratureSpec,
    /// `f(z)` evaluated directly.
    value: CVec,
    /// `N^n` blocks of `f - f(z)`, first coordinate varying fastest.
    samples: Vec<Complex64>,
}

impl TorusJet {
    pub fn sample(f: &HoloMap, z: &BallPoint, spec: &QuadratureSpec) -> Result<Self> {
        let n = f.domain_dim();
        let m = f.codomain_dim();
        check_dim(n, z.dim())?;
        spec.check_torus(z)?;
        let nodes = spec.nodes;
        let roots = roots_of_unity(nodes);
        let total = nodes.pow(n as u32);
        let center = f.eval(z)?;
        let mut samples = Vec::with_capacity(total * m);
        let mut idx = vec![0usize; n];
        let mut point = z.coords().clone();
        for _ in 0..total {
            for j in 0..n {
                point[j] = z[j] + roots[idx[j]] * spec.radii[j];
            }
            let fz = f.eval_raw(&point)? - &center;
            samples.extend(fz.iter());
            for j in 0..n {
                idx[j] += 1;
                if idx[j] < nodes {
                    break;
                }
                idx[j] = 0;
            }
        }
        Ok(TorusJet {
            n,
            m,
            spec: spec.clone(),
            value: center,
            samples,
        })
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    pub fn value(&self) -> &CVec {
        &self.value
    }

    /// Taylor coefficient of the map at the torus center.
    pub fn coefficient(&self, alpha: &MultiIndex) -> Result<CVec> {
        check_dim(self.n, alpha.dim())?;
        self.spec.check_order(alpha.degree())?;
        if alpha.is_zero() {
            return Ok(self.value.clone());
        }
        let nodes = self.spec.nodes;
        let conj_roots: Vec<Complex64> = roots_of_unity(nodes).iter().map(|c| c.conj()).collect();
        // contract one circle at a time; the first coordinate varies fastest
        let mut buf: Vec<Complex64> = self.samples.clone();
        for &a in alpha.entries() {
            let step = a as usize % nodes;
            let stride = self.m;
            let mut out = Vec::with_capacity(buf.len() / nodes);
            for block in buf.chunks_exact(nodes * stride) {
                for comp in 0..stride {
                    let mut acc = ZERO;
                    for l in 0..nodes {
                        acc += block[l * stride + comp] * conj_roots[(l * step) % nodes];
                    }
                    out.push(acc / nodes as f64);
                }
            }
            buf = out;
        }
        let acc = buf;
        let scale: f64 = alpha
                .entries()
                .iter()
                .zip(&self.spec.radii)
                .map(|(&a, r)| r.powi(a as i32))
                .product::<f64>();
        Ok(CVec::from_iterator(self.m, acc.into_iter().map(|a| a / scale)))
    }

    pub fn partial(&self, alpha: &MultiIndex) -> Result<CVec> {
        Ok(self.coefficient(alpha)? * Complex64::new(alpha.factorial(), 0.0))
    }

    /// `D_k = sum_{|alpha| = k} (k!/alpha!) d^alpha f beta^alpha`.
    pub fn frechet(&self, beta: &CVec, k: u32) -> Result<CVec> {
        check_dim(self.n, beta.len())?;
        let mut out = CVec::zeros(self.m);
        for alpha in MultiIndex::enumerate(self.n, k) {
            let weight = alpha.multinomial_weight_f64();
            let coef = alpha.monomial(beta.as_slice()) * weight;
            out.axpy(coef, &self.partial(&alpha)?, Complex64::new(1.0, 0.0));
        }
        Ok(out)
    }

    /// Jacobian `f'(z)` as an `m x n` matrix.
    pub fn jacobian(&self) -> Result<crate::linalg::CMat> {
        let mut j = crate::linalg::CMat::zeros(self.m, self.n);
        for col in 0..self.n {
            j.set_column(col, &self.partial(&MultiIndex::axis(self.n, col, 1))?);
        }
        Ok(j)
    }
}

/// Samples of `lambda -> f(z + lambda beta)` on the circle of radius half
/// the line-disk radius.
#[derive(Clone, Debug)]
pub struct LineJet {
    nodes: usize,
    radius: f64,
    center: CVec,
    /// `f(z + lambda beta) - f(z)` on the circle.
    samples: Vec<CVec>,
}

impl LineJet {
    pub fn sample(f: &HoloMap, z: &BallPoint, beta: &Direction, nodes: usize) -> Result<Self> {
        if !nodes.is_power_of_two() {
            return Err(Error::NodesNotPowerOfTwo(nodes));
        }
        let line = restrict_to_line(f, z, beta)?;
        let radius = 0.5 * line.radius();
        let center = f.eval(z)?;
        let samples = roots_of_unity(nodes)
            .into_iter()
            .map(|w| line.eval(w * radius).map(|fw| fw - &center))
            .collect::<Result<Vec<_>>>()?;
        Ok(LineJet {
            nodes,
            radius,
            center,
            samples,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `d^k/dlambda^k f(z + lambda beta)` at `lambda = 0`.
    pub fn derivative(&self, k: u32) -> Result<CVec> {
        if self.nodes < 2 * k as usize + 2 {
            return Err(Error::TooFewNodes {
                nodes: self.nodes,
                order: k,
            });
        }
        if k == 0 {
            return Ok(self.center.clone());
        }
        let m = self.center.len();
        let mut acc = CVec::zeros(m);
        for (t, s) in self.samples.iter().enumerate() {
            let phase = Complex64::from_polar(
                1.0,
                -2.0 * PI * ((k as usize * t) % self.nodes) as f64 / self.nodes as f64,
            );
            acc.axpy(phase, s, Complex64::new(1.0, 0.0));
        }
        let scale = factorial(k) / (self.nodes as f64 * self.radius.powi(k as i32));
        Ok(acc * Complex64::new(scale, 0.0))
    }
}

/// `d^{|v|} f / dz^v` at `z` by torus quadrature.
pub fn partial_derivative(
    f: &HoloMap,
    z: &BallPoint,
    v: &MultiIndex,
    spec: &QuadratureSpec,
) -> Result<DerivativeResult> {
    spec.check_order(v.degree())?;
    let jet = TorusJet::sample(f, z, spec)?;
    Ok(DerivativeResult {
        value: jet.partial(v)?,
        order: DerivativeOrder::Partial(v.clone()),
        method: Method::Quadrature,
        route_gap: None,
    })
}

/// Exact partial derivative of a polynomial map.
pub fn exact_partial(f: &PolyMap, z: &BallPoint, v: &MultiIndex) -> Result<DerivativeResult> {
    check_dim(f.domain_dim(), z.dim())?;
    Ok(DerivativeResult {
        value: f.partial(v)?.eval_raw(z.as_slice()),
        order: DerivativeOrder::Partial(v.clone()),
        method: Method::ExactPoly,
        route_gap: None,
    })
}

/// Taylor coefficient `a_v = d^v f(0) / v!`.
pub fn taylor_coefficient(f: &HoloMap, v: &MultiIndex, spec: &QuadratureSpec) -> Result<CVec> {
    let origin = BallPoint::origin(f.domain_dim());
    let d = partial_derivative(f, &origin, v, spec)?;
    Ok(d.value / Complex64::new(v.factorial(), 0.0))
}

/// `D_k(f, z, beta)` computed by both routes; returns the multi-index sum
/// and records the relative gap to the line route.
pub fn frechet_derivative(
    f: &HoloMap,
    z: &BallPoint,
    beta: &Direction,
    k: u32,
    spec: &QuadratureSpec,
) -> Result<DerivativeResult> {
    if beta.is_zero() {
        return Err(Error::ZeroDirection);
    }
    spec.check_order(k)?;
    let jet = TorusJet::sample(f, z, spec)?;
    let line = LineJet::sample(f, z, beta, spec.nodes)?;
    frechet_from_jets(&jet, &line, beta, k)
}

/// Both Frechet routes from precomputed samples.
pub fn frechet_from_jets(
    jet: &TorusJet,
    line: &LineJet,
    beta: &Direction,
    k: u32,
) -> Result<DerivativeResult> {
    let by_sum = jet.frechet(beta, k)?;
    let by_line = line.derivative(k)?;
    let gap = rel_gap(&by_sum, &by_line);
    if !(gap <= FRECHET_ROUTE_TOL) {
        return Err(Error::RouteDisagreement { gap });
    }
    Ok(DerivativeResult {
        value: by_sum,
        order: DerivativeOrder::Directional {
            k,
            beta: to_pairs(beta),
        },
        method: Method::FrechetSum,
        route_gap: Some(gap),
    })
}

/// Derivatives of one map at one point: exact for polynomial tables,
/// torus quadrature otherwise.
#[derive(Clone, Debug)]
pub struct Jet {
    z: BallPoint,
    value: CVec,
    source: JetSource,
}

#[derive(Clone, Debug)]
enum JetSource {
    Exact(PolyMap),
    Quadrature { map: HoloMap, torus: TorusJet },
}

impl Jet {
    /// Exact differentiation for polynomial maps, default quadrature otherwise.
    pub fn new(f: &HoloMap, z: &BallPoint) -> Result<Self> {
        match f.as_poly() {
            Some(p) => Jet::exact(p, z),
            None => Jet::quadrature(f, z, &QuadratureSpec::default_at(z)),
        }
    }

    pub fn exact(p: &PolyMap, z: &BallPoint) -> Result<Self> {
        check_dim(p.domain_dim(), z.dim())?;
        Ok(Jet {
            z: z.clone(),
            value: p.eval_raw(z.as_slice()),
            source: JetSource::Exact(p.clone()),
        })
    }

    pub fn quadrature(f: &HoloMap, z: &BallPoint, spec: &QuadratureSpec) -> Result<Self> {
        let torus = TorusJet::sample(f, z, spec)?;
        Ok(Jet {
            z: z.clone(),
            value: torus.value().clone(),
            source: JetSource::Quadrature {
                map: f.clone(),
                torus,
            },
        })
    }

    pub fn point(&self) -> &BallPoint {
        &self.z
    }

    /// `f(z)`.
    pub fn value(&self) -> &CVec {
        &self.value
    }

    pub fn method(&self) -> Method {
        match self.source {
            JetSource::Exact(_) => Method::ExactPoly,
            JetSource::Quadrature { .. } => Method::Quadrature,
        }
    }

    pub fn partial(&self, v: &MultiIndex) -> Result<CVec> {
        match &self.source {
            JetSource::Exact(p) => Ok(p.partial(v)?.eval_raw(self.z.as_slice())),
            JetSource::Quadrature { torus, .. } => torus.partial(v),
        }
    }

    /// `f'(z) beta`.
    pub fn first(&self, beta: &CVec) -> Result<CVec> {
        check_dim(self.z.dim(), beta.len())?;
        let n = self.z.dim();
        let mut out = CVec::zeros(self.value.len());
        for j in 0..n {
            out.axpy(beta[j], &self.partial(&MultiIndex::axis(n, j, 1))?, Complex64::new(1.0, 0.0));
        }
        Ok(out)
    }

    /// `D_k(f, z, beta)`. Under quadrature both routes are run and must agree.
    pub fn frechet(&self, beta: &Direction, k: u32) -> Result<DerivativeResult> {
        if beta.is_zero() {
            return Err(Error::ZeroDirection);
        }
        match &self.source {
            JetSource::Exact(p) => {
                check_dim(p.domain_dim(), beta.len())?;
                let mut out = CVec::zeros(p.codomain_dim());
                for alpha in MultiIndex::enumerate(p.domain_dim(), k) {
                    let coef = alpha.monomial(beta.as_slice()) * alpha.multinomial_weight_f64();
                    out.axpy(coef, &self.partial(&alpha)?, Complex64::new(1.0, 0.0));
                }
                Ok(DerivativeResult {
                    value: out,
                    order: DerivativeOrder::Directional {
                        k,
                        beta: to_pairs(beta),
                    },
                    method: Method::ExactPoly,
                    route_gap: None,
                })
            }
            JetSource::Quadrature { map, torus } => {
                torus.spec().check_order(k)?;
                let line = LineJet::sample(map, &self.z, beta, torus.spec().nodes)?;
                frechet_from_jets(torus, &line, beta, k)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Automorphism;
    use crate::holomap::random_polymap;
    use crate::linalg::{cvec, norm, rvec, unit};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn poly(n: usize, terms: &[(&[u32], f64)]) -> HoloMap {
        PolyMap::from_terms(n, 1, terms.iter().map(|(a, x)| (mi(a), rvec(&[*x]))))
            .unwrap()
            .into()
    }

    #[test]
    fn spec_validation() {
        assert_eq!(QuadratureSpec::new(vec![0.1], 48), Err(Error::NodesNotPowerOfTwo(48)));
        assert!(QuadratureSpec::new(vec![0.0], 64).is_err());
        let s = QuadratureSpec::new(vec![0.3, 0.3], 8).unwrap();
        assert!(s.check_order(3).is_ok());
        assert_eq!(s.check_order(4), Err(Error::TooFewNodes { nodes: 8, order: 4 }));
        assert!(matches!(
            s.check_torus(&rvec(&[0.5, 0.5])),
            Err(Error::TorusOutsideBall { .. })
        ));
        let z = BallPoint::new(rvec(&[0.96, 0.0])).unwrap();
        assert_eq!(QuadratureSpec::default_at(&z).nodes, BOUNDARY_NODES);
        assert!(QuadratureSpec::default_at(&z).check_torus(&z).is_ok());
    }

    #[test]
    fn partial_examples() {
        let cube = poly(1, &[(&[3], 1.0)]);
        let z = BallPoint::new(rvec(&[0.5])).unwrap();
        let d = partial_derivative(&cube, &z, &mi(&[1]), &QuadratureSpec::default_at(&z)).unwrap();
        assert!((d.value[0] - c(0.75, 0.0)).norm() < 1e-13);
        assert_eq!(d.method, Method::Quadrature);

        let prod = poly(2, &[(&[1, 1], 1.0)]);
        let z = BallPoint::new(cvec(&[c(0.2, 0.3), c(-0.4, 0.1)])).unwrap();
        let d = partial_derivative(&prod, &z, &mi(&[1, 1]), &QuadratureSpec::default_at(&z)).unwrap();
        assert!((d.value[0] - c(1.0, 0.0)).norm() < 1e-12);

        let off_form = poly(2, &[(&[1, 0], 1.0), (&[0, 2], 1.0 / 3.0)]);
        let o = BallPoint::origin(2);
        let d = partial_derivative(&off_form, &o, &mi(&[0, 2]), &QuadratureSpec::default_at(&o)).unwrap();
        assert!((d.value[0] - c(2.0 / 3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn taylor_coefficient_of_constant_vanishes() {
        let f: HoloMap = PolyMap::constant(2, cvec(&[c(0.3, 0.4)])).into();
        let spec = QuadratureSpec::default_at(&BallPoint::origin(2));
        let a = taylor_coefficient(&f, &mi(&[1, 2]), &spec).unwrap();
        assert!(norm(&a) < 1e-15);
        let a0 = taylor_coefficient(&f, &mi(&[0, 0]), &spec).unwrap();
        assert!((a0[0] - c(0.3, 0.4)).norm() < 1e-14, "{a0:?}");
    }

    #[test]
    fn frechet_examples() {
        let z = BallPoint::new(cvec(&[c(0.1, 0.2), c(0.3, -0.1)])).unwrap();
        let spec = QuadratureSpec::default_at(&z);
        let beta = Direction::new(cvec(&[c(0.7, 0.2), c(-0.4, 1.1)])).unwrap();
        let id: HoloMap = PolyMap::identity(2).into();
        let d = frechet_derivative(&id, &z, &beta, 1, &spec).unwrap();
        assert!(norm(&(&d.value - beta.coords())) < 1e-13);
        assert!(d.route_gap.unwrap() < 1e-12);

        for k in 1..=4u32 {
            let f = poly(2, &[(&[k, 0], 1.0)]);
            let d = frechet_derivative(&f, &z, &beta, k, &spec).unwrap();
            let expected = factorial(k) * beta[0].powu(k);
            assert!((d.value[0] - expected).norm() < 1e-10 * expected.norm().max(1.0));
        }

        // one variable, beta = 1: the ordinary k-th derivative
        let f = poly(1, &[(&[5], 0.5), (&[2], 0.3)]);
        let z1 = BallPoint::new(rvec(&[0.4])).unwrap();
        let d = frechet_derivative(&f, &z1, &Direction::new(rvec(&[1.0])).unwrap(), 3, &QuadratureSpec::default_at(&z1)).unwrap();
        // 0.5 * 60 z^2
        assert!((d.value[0] - c(30.0 * 0.16, 0.0)).norm() < 1e-11);

        assert_eq!(
            frechet_derivative(&f, &z1, &Direction::new(rvec(&[0.0])).unwrap(), 1, &QuadratureSpec::default_at(&z1)),
            Err(Error::ZeroDirection)
        );
    }

    #[test]
    fn quadrature_matches_exact_polynomial_derivatives() {
        for seed in 0..10 {
            let p = random_polymap(3, 2, 5, seed, 0.05).unwrap();
            let f: HoloMap = p.clone().into();
            let z = BallPoint::new(cvec(&[c(0.1, 0.2), c(-0.2, 0.1), c(0.0, 0.15)])).unwrap();
            let spec = QuadratureSpec::default_at(&z).with_nodes(16).unwrap();
            let jet = TorusJet::sample(&f, &z, &spec).unwrap();
            for v in MultiIndex::enumerate_up_to(3, 5) {
                let exact = exact_partial(&p, &z, &v).unwrap().value;
                let num = jet.partial(&v).unwrap();
                assert!(rel_gap(&num, &exact) < 1e-10, "{v}: {:e}", rel_gap(&num, &exact));
            }
        }
    }

    #[test]
    fn homogeneity_in_direction() {
        let phi: HoloMap = crate::holomap::HoloMap::Family(crate::holomap::ClosedForm::Automorphism(
            Automorphism::new(BallPoint::new(cvec(&[c(0.3, 0.1), c(0.0, -0.4)])).unwrap()),
        ));
        let z = BallPoint::new(cvec(&[c(0.2, 0.0), c(0.1, 0.3)])).unwrap();
        let spec = QuadratureSpec::default_at(&z);
        let beta = cvec(&[c(0.5, 0.5), c(1.0, -0.2)]);
        let scale = c(-0.7, 1.3);
        for k in 1..=4 {
            let a = frechet_derivative(&phi, &z, &Direction::new(beta.clone()).unwrap(), k, &spec).unwrap();
            let b = frechet_derivative(&phi, &z, &Direction::new(&beta * scale).unwrap(), k, &spec).unwrap();
            let expected = &a.value * scale.powu(k);
            assert!(norm(&(&b.value - &expected)) <= 1e-10 * norm(&expected).max(1e-300));
        }
    }

    #[test]
    fn node_doubling_converges() {
        let z = BallPoint::new(cvec(&[c(0.3, 0.2), c(-0.1, 0.25)])).unwrap();
        let a = BallPoint::new(cvec(&[c(0.4, -0.3), c(0.2, 0.1)])).unwrap();
        let maps: Vec<HoloMap> = vec![
            crate::holomap::HoloMap::Family(crate::holomap::ClosedForm::Automorphism(Automorphism::new(a.clone()))),
            crate::holomap::compose_ball_automorphism(&a, random_polymap(2, 2, 4, 1, 0.05).unwrap().into()).unwrap(),
            random_polymap(2, 2, 6, 2, 0.05).unwrap().into(),
        ];
        for f in &maps {
            let s64 = QuadratureSpec::default_at(&z);
            let s128 = s64.clone().with_nodes(128).unwrap();
            let j64 = TorusJet::sample(f, &z, &s64).unwrap();
            let j128 = TorusJet::sample(f, &z, &s128).unwrap();
            for v in MultiIndex::enumerate_up_to(2, 4) {
                let g = rel_gap(&j64.partial(&v).unwrap(), &j128.partial(&v).unwrap());
                assert!(g <= 1e-12, "{} {v}: {g:e}", f.label());
            }
        }
    }

    #[test]
    fn jacobian_of_identity() {
        let z = BallPoint::new(rvec(&[0.1, 0.2, 0.3])).unwrap();
        let jet = TorusJet::sample(&PolyMap::identity(3).into(), &z, &QuadratureSpec::default_at(&z).with_nodes(8).unwrap()).unwrap();
        let j = jet.jacobian().unwrap();
        for r in 0..3 {
            for col in 0..3 {
                let e = if r == col { 1.0 } else { 0.0 };
                assert!((j[(r, col)] - c(e, 0.0)).norm() < 1e-14);
            }
        }
        let _ = unit(3, 0);
    }
}
