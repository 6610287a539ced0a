//! Coefficient inequalities satisfied by every polynomial in the map class.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PolyMap;
use crate::error::{Error, Result};
use crate::linalg::{norm, norm_sq, CVec};
use crate::multiindex::MultiIndex;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub lhs: f64,
    pub bound: f64,
    pub slack: f64,
}

impl Residual {
    fn new(lhs: f64, bound: f64) -> Self {
        Residual {
            lhs,
            bound,
            slack: bound - lhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientReport {
    /// `sum |a_alpha|^2 |beta^{2 alpha}| <= 1`.
    pub boundary_energy: Residual,
    /// `sum |a_alpha|^2 v^alpha / |v|^|alpha| <= 1`.
    pub weighted_energy: Residual,
    /// `|a_v| <= sqrt(|v|^|v| / v^v)`.
    pub single_coefficient: Residual,
    /// `sum_k |sum_{|alpha|=k} a_alpha beta^alpha|^2 <= 1`.
    pub graded_energy: Residual,
}

pub fn coefficient_checks(f: &PolyMap, v: &MultiIndex, beta: &CVec) -> Result<CoefficientReport> {
    let n = f.domain_dim();
    if v.dim() != n || beta.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if v.dim() != n { v.dim() } else { beta.len() },
        });
    }
    if v.is_zero() {
        return Err(Error::ZeroMultiIndex);
    }
    let bn = norm(beta);
    if (bn - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitDirection { norm: bn });
    }

    let moduli: Vec<f64> = beta.iter().map(|b| b.norm_sqr()).collect();
    let total = v.degree() as f64;
    let mut boundary = 0.0;
    let mut weighted = 0.0;
    let mut graded = vec![CVec::zeros(f.codomain_dim()); f.max_degree() as usize + 1];
    for (alpha, a) in f.terms() {
        let a2 = norm_sq(a);
        boundary += a2 * alpha.monomial_real(&moduli);
        weighted += a2 * v.pow_index(alpha) / total.powi(alpha.degree() as i32);
        graded[alpha.degree() as usize].axpy(alpha.monomial(beta.as_slice()), a, Complex64::new(1.0, 0.0));
    }
    let graded: f64 = graded.iter().map(norm_sq).sum();
    Ok(CoefficientReport {
        boundary_energy: Residual::new(boundary, 1.0),
        weighted_energy: Residual::new(weighted, 1.0),
        single_coefficient: Residual::new(norm(&f.coefficient(v)), v.sharpness_factor()?.sqrt()),
        graded_energy: Residual::new(graded, 1.0),
    })
}

/// The direction `beta_j = sqrt(v_j / |v|)` that maximizes `|beta^v|` on the sphere.
pub fn extremal_direction(v: &MultiIndex) -> CVec {
    let total = v.degree() as f64;
    CVec::from_iterator(
        v.dim(),
        v.entries()
            .iter()
            .map(|&vj| Complex64::new((vj as f64 / total).sqrt(), 0.0)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holomap::random_polymap;
    use crate::linalg::{cvec, rvec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn constant_map() {
        let f = PolyMap::constant(2, rvec(&[0.9]));
        let r = coefficient_checks(&f, &mi(&[1, 0]), &rvec(&[1.0, 0.0])).unwrap();
        assert!((r.boundary_energy.lhs - 0.81).abs() < 1e-15);
        assert!((r.boundary_energy.slack - 0.19).abs() < 1e-15);
    }

    #[test]
    fn single_monomial_attains_coefficient_bound() {
        let v = mi(&[2, 1]);
        let a = v.sharpness_factor().unwrap().sqrt();
        let f = PolyMap::from_terms(2, 2, [(v.clone(), cvec(&[Complex64::new(0.0, a), Complex64::new(0.0, 0.0)]))]).unwrap();
        let r = coefficient_checks(&f, &v, &extremal_direction(&v)).unwrap();
        assert!(r.single_coefficient.slack.abs() < 1e-15);
        // at the extremal direction the weighted sum is attained as well
        assert!(r.weighted_energy.slack.abs() < 1e-14);
    }

    #[test]
    fn off_form_map_attains_coefficient_bound() {
        let f = PolyMap::from_terms(2, 1, [(mi(&[1, 0]), rvec(&[1.0])), (mi(&[0, 2]), rvec(&[1.0 / 3.0]))]).unwrap();
        let r = coefficient_checks(&f, &mi(&[1, 0]), &rvec(&[0.6, 0.8])).unwrap();
        assert_eq!(r.single_coefficient.lhs, 1.0);
        assert_eq!(r.single_coefficient.bound, 1.0);
        assert_eq!(r.single_coefficient.slack, 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = PolyMap::identity(2);
        assert!(matches!(
            coefficient_checks(&f, &mi(&[1, 0]), &rvec(&[1.0, 1.0])),
            Err(Error::NotUnitDirection { .. })
        ));
        assert_eq!(
            coefficient_checks(&f, &mi(&[0, 0]), &rvec(&[1.0, 0.0])),
            Err(Error::ZeroMultiIndex)
        );
    }

    #[test]
    fn certified_maps_satisfy_all_coefficient_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for seed in 0..40 {
            let n = 1 + (seed % 3) as usize;
            let f = random_polymap(n, 2, 4, seed, 0.05).unwrap();
            for _ in 0..100 {
                let g = CVec::from_fn(n, |_, _| {
                    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                });
                let beta = &g / Complex64::new(norm(&g), 0.0);
                for v in MultiIndex::enumerate_up_to(n, 4).into_iter().skip(1) {
                    let r = coefficient_checks(&f, &v, &beta).unwrap();
                    for res in [r.boundary_energy, r.weighted_energy, r.single_coefficient, r.graded_energy] {
                        assert!(res.slack >= -1e-10, "{res:?}");
                    }
                }
            }
        }
    }
}
