use num_complex::Complex64;
use proptest::prelude::*;

use spv_core::bounds::{check_inequality, rhs_main, Check, InequalityId};
use spv_core::harness::{self, emit, persist_failures, Format, Report, Suite, SuiteConfig};
use spv_core::linalg::{rvec, unit};
use spv_core::{
    frechet_derivative, partial_derivative, BallPoint, Direction, HoloMap, MultiIndex, PolyMap,
    QuadratureSpec,
};

fn point(c: &[f64]) -> BallPoint {
    BallPoint::new(rvec(c)).unwrap()
}

#[test]
fn emitted_json_round_trips() {
    let config = SuiteConfig {
        samples: 6,
        ..SuiteConfig::new(Suite::Main)
    };
    let report = harness::run(&config).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    emit(&report, Format::Json, &path).unwrap();
    let back = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.schema, "spv-report/1");
    // nothing to persist in a passing run
    assert!(persist_failures(&report, &dir.path().join("f")).unwrap().is_empty());
}

#[test]
fn inequality_ids_serialize_as_short_labels() {
    let ids: Vec<String> = InequalityId::ALL.iter().map(|i| serde_json::to_string(i).unwrap()).collect();
    assert!(ids.contains(&"\"1.4\"".to_string()));
    for id in InequalityId::ALL {
        assert_eq!(id.as_str().parse::<InequalityId>().unwrap(), id);
    }
}

#[test]
fn identity_is_extremal_at_first_order() {
    let f: HoloMap = PolyMap::identity(2).into();
    let z = point(&[0.3, -0.4]);
    let beta = Direction::new(rvec(&[1.0, 2.0])).unwrap();
    let r = check_inequality(&f, &z, &Check::FirstOrder { beta }).unwrap();
    assert!(r.slack.abs() < 1e-12 * r.rhs);
}

#[test]
fn monomial_derivatives_by_quadrature() {
    // z1^2 z2: d^(2,1) = 2
    let f: HoloMap = PolyMap::from_terms(2, 1, [(MultiIndex::new(vec![2, 1]), rvec(&[0.5]))])
        .unwrap()
        .into();
    let z = point(&[0.2, 0.1]);
    let spec = QuadratureSpec::default_at(&z);
    let d = partial_derivative(&f, &z, &MultiIndex::new(vec![2, 1]), &spec).unwrap();
    assert!((d.value[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    let beta = Direction::new(unit(2, 0)).unwrap();
    let d = frechet_derivative(&f, &z, &beta, 2, &spec).unwrap();
    // D_2 along e1 = d^2/dz1^2 = 2 * 0.5 * z2
    assert!((d.value[0] - Complex64::new(0.1, 0.0)).norm() < 1e-12);
    assert!(d.route_gap.unwrap() < 1e-12);
}

#[test]
fn rejects_invalid_inputs() {
    assert!(BallPoint::new(rvec(&[0.8, 0.6])).is_err());
    assert!(Direction::nonzero(rvec(&[0.0, 0.0])).is_err());
    let f: HoloMap = PolyMap::identity(2).into();
    let zero = Direction::new(rvec(&[0.0, 0.0])).unwrap();
    assert!(check_inequality(&f, &point(&[0.1, 0.0]), &Check::Frechet { beta: zero, k: 2 }).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn main_bound_is_homogeneous_in_beta(
        x in -0.6f64..0.6, y in -0.6f64..0.6, b0 in -1.0f64..1.0, b1 in 0.1f64..1.0,
        c in 0.1f64..3.0, k in 1u32..5,
    ) {
        let z = point(&[x, y]);
        let beta = Direction::new(rvec(&[b0, b1])).unwrap();
        let scaled = Direction::new(rvec(&[c * b0, c * b1])).unwrap();
        let a = rhs_main(k, &z, &beta) * c.powi(2 * k as i32);
        let b = rhs_main(k, &z, &scaled);
        prop_assert!((a - b).abs() <= 1e-11 * a.abs());
    }

    #[test]
    fn sampled_polynomials_satisfy_the_main_estimate(seed in 0u64..1000) {
        let config = SuiteConfig { samples: 2, seed, k_max: 3, ..SuiteConfig::new(Suite::Main) };
        let r = harness::run(&SuiteConfig { maps: vec![harness::MapKind::Poly], ..config }).unwrap();
        prop_assert!(r.passed());
    }
}
