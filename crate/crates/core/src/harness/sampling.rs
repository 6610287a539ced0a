//! Seeded generation of maps and evaluation contexts.

use clap::ValueEnum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    extremal_k1_jacobian, extremal_k1_map, extremal_origin_coefficient, extremal_origin_map,
    Automorphism, BallPoint, Direction,
};
use crate::holomap::{compose_ball_automorphism, random_polymap_with, ClosedForm, HoloMap, PolyMap};
use crate::linalg::{norm, CMat, CVec};
use crate::multiindex::MultiIndex;

/// Largest modulus used for map parameters (automorphism centers, base values).
const PARAM_RADIUS: f64 = 0.8;

/// Independent stream per sample, so samples can be generated in any order.
pub fn sample_rng(seed: u64, sample: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    rng
}

pub fn gaussian_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Uniform point on the unit sphere of `C^n`.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVec {
    loop {
        let g = gaussian_vec(rng, n);
        let r = norm(&g);
        if r > 1e-12 {
            return g / Complex64::new(r, 0.0);
        }
    }
}

/// Uniform point of the ball of radius `radius` in `C^n`.
pub fn random_ball_point<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> BallPoint {
    let u = random_unit(rng, n);
    let r = radius * rng.random::<f64>().powf(1.0 / (2 * n) as f64);
    BallPoint::new(u * Complex64::new(r, 0.0)).expect("radius below 1")
}

/// Uniform point of the disk of radius `radius`, placed on the first axis of `C^n`.
pub fn random_axis_point<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> BallPoint {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = rng.random::<f64>() * std::f64::consts::TAU;
    let mut c = CVec::zeros(n);
    c[0] = Complex64::from_polar(r, theta);
    BallPoint::new(c).expect("radius below 1")
}

/// `m x n` matrix with orthonormal columns, `n <= m`.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize) -> Result<CMat> {
    if n > m {
        return Err(Error::Precondition(format!("no isometry from C^{n} into C^{m}")));
    }
    let g = CMat::from_fn(m, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    Ok(g.qr().q())
}

fn random_multi_index<R: Rng + ?Sized>(rng: &mut R, n: usize, max_degree: u32) -> MultiIndex {
    let all = MultiIndex::enumerate_up_to(n, max_degree.max(1));
    all[rng.random_range(1..all.len())].clone()
}

/// Families the map sampler draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    /// Dense random polynomial with a coefficient certificate.
    Poly,
    /// A ball automorphism applied after a certified polynomial.
    Composed,
    /// A ball automorphism, after the coordinate projection when `n > m`.
    Automorphism,
    /// Extremal map for the single-coefficient estimate at the origin.
    ExtremalOrigin,
    /// Extremal map for the first-order estimate, `n <= m`.
    ExtremalK1,
    /// `(w - c phi(z)^v)/(1 - conj(w) c phi(z)^v)`, `m = 1`.
    Power,
    /// Disk-to-ball family `g_w(phi(z))`, `n = 1`.
    Disk,
}

impl MapKind {
    pub const ALL: [MapKind; 7] = [
        MapKind::Poly,
        MapKind::Composed,
        MapKind::Automorphism,
        MapKind::ExtremalOrigin,
        MapKind::ExtremalK1,
        MapKind::Power,
        MapKind::Disk,
    ];

    pub fn available(&self, n: usize, m: usize) -> bool {
        match self {
            MapKind::Automorphism => n >= m,
            MapKind::ExtremalK1 => n <= m,
            MapKind::Power => m == 1,
            MapKind::Disk => n == 1,
            _ => true,
        }
    }
}

/// Kinds used for `(n, m)`: either all that apply, or the requested ones.
pub fn kinds_for(requested: &[MapKind], n: usize, m: usize) -> Result<Vec<MapKind>> {
    if requested.is_empty() {
        return Ok(MapKind::ALL.into_iter().filter(|k| k.available(n, m)).collect());
    }
    for k in requested {
        if !k.available(n, m) {
            return Err(Error::Config(format!(
                "map kind {k:?} is not defined for n = {n}, m = {m}"
            )));
        }
    }
    Ok(requested.to_vec())
}

/// Draws one map of the given kind.
pub fn sample_map<R: Rng + ?Sized>(
    rng: &mut R,
    kind: MapKind,
    n: usize,
    m: usize,
    degree: u32,
) -> Result<HoloMap> {
    let margin = 0.01 + 0.1 * rng.random::<f64>();
    match kind {
        MapKind::Poly => Ok(random_polymap_with(rng, n, m, degree, margin)?.into()),
        MapKind::Composed => {
            let p = random_polymap_with(rng, n, m, degree, margin)?;
            let a = random_ball_point(rng, m, PARAM_RADIUS);
            compose_ball_automorphism(&a, p.into())
        }
        MapKind::Automorphism => {
            let a = random_ball_point(rng, m, PARAM_RADIUS);
            if n == m {
                return Ok(HoloMap::Family(ClosedForm::Automorphism(Automorphism::new(a))));
            }
            let proj = PolyMap::from_terms(
                n,
                m,
                (0..m).map(|j| (MultiIndex::axis(n, j, 1), crate::linalg::unit(m, j))),
            )?;
            compose_ball_automorphism(&a, proj.into())
        }
        MapKind::ExtremalOrigin => {
            let a0 = random_ball_point(rng, m, PARAM_RADIUS);
            let v = random_multi_index(rng, n, degree);
            let u = random_unit(rng, m);
            let av = extremal_origin_coefficient(&a0, &u, &v)?;
            extremal_origin_map(&a0, &av, &v)
        }
        MapKind::ExtremalK1 => {
            let xi = random_ball_point(rng, n, PARAM_RADIUS);
            let w0 = random_ball_point(rng, m, PARAM_RADIUS);
            let iso = random_isometry(rng, m, n)?;
            let jac = extremal_k1_jacobian(&xi, &w0, &iso)?;
            extremal_k1_map(&xi, &w0, &jac)
        }
        MapKind::Power => {
            let v = random_multi_index(rng, n, degree);
            let xi = random_axis_point(rng, n, PARAM_RADIUS);
            let w = random_ball_point(rng, 1, 0.95)[0];
            Ok(HoloMap::Family(ClosedForm::SharpPower { v, xi, w }))
        }
        MapKind::Disk => {
            let xi = loop {
                let x = random_ball_point(rng, 1, PARAM_RADIUS)[0];
                if x.norm() > 1e-3 {
                    break x;
                }
            };
            let w = loop {
                let w = random_ball_point(rng, m, 0.95);
                if w.norm() > 1e-3 {
                    break w.into_inner();
                }
            };
            Ok(HoloMap::Family(ClosedForm::SharpDisk { xi, w }))
        }
    }
}

/// A random unit direction, `e_1`, and `z/|z|` when `z != 0`.
pub fn directions<R: Rng + ?Sized>(rng: &mut R, z: &BallPoint) -> Vec<Direction> {
    let n = z.dim();
    let mut out = vec![
        Direction::new(random_unit(rng, n)).expect("unit"),
        Direction::new(crate::linalg::unit(n, 0)).expect("unit"),
    ];
    if z.norm() > 0.0 {
        out.push(Direction::new(z.coords() / Complex64::new(z.norm(), 0.0)).expect("unit"));
    }
    out
}
