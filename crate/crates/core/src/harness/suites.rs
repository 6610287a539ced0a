use std::fs;

use clap::ValueEnum;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampling::{
    directions, kinds_for, random_axis_point, random_ball_point, random_isometry, random_unit,
    sample_map, sample_rng,
};
use super::{
    Certificate, FailedSample, Record, Report, SampleError, Status, Suite, SuiteConfig,
};
use crate::bounds::{
    check_with_jet, rhs_partial, BoundContext, BoundReport, Check, InequalityId,
};
use crate::cauchy::{Jet, LineJet, QuadratureSpec, TorusJet, DEFAULT_NODES};
use crate::error::{Error, Result};
use crate::geometry::{
    extremal_k1_jacobian, extremal_k1_map, extremal_origin_coefficient, extremal_origin_map,
    Automorphism, BallPoint, Direction,
};
use crate::holomap::{ClosedForm, HoloMap, PolyMap};
use crate::linalg::{rel_gap_scalar, rvec, to_pairs, unit, CVec};
use crate::multiindex::MultiIndex;

/// Stream ids at or above this value are reserved for deterministic grids,
/// keeping them disjoint from per-sample streams.
const GRID_STREAM: u64 = 1 << 62;

struct SampleOutcome {
    records: Vec<Record>,
    error: Option<SampleError>,
    failed: Option<FailedSample>,
}

fn load_map(config: &SuiteConfig) -> Result<Option<HoloMap>> {
    let Some(path) = &config.map_file else {
        return Ok(None);
    };
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let p = PolyMap::from_json(&text)?;
    if (p.domain_dim(), p.codomain_dim()) != (config.n, config.m) {
        return Err(Error::Config(format!(
            "map file has n = {}, m = {}, config has n = {}, m = {}",
            p.domain_dim(),
            p.codomain_dim(),
            config.n,
            config.m
        )));
    }
    Ok(Some(p.into()))
}

fn checks_for<R: Rng + ?Sized>(rng: &mut R, config: &SuiteConfig, z: &BallPoint) -> Vec<Check> {
    let n = config.n;
    let ks = 1..=config.k_max;
    let vs = || MultiIndex::enumerate_up_to(n, config.k_max).into_iter().skip(1);
    let mut out = Vec::new();
    match config.suite {
        Suite::Main => {
            for beta in directions(rng, z) {
                out.push(Check::FirstOrder { beta: beta.clone() });
                for k in ks.clone() {
                    out.push(Check::Frechet { beta: beta.clone(), k });
                }
            }
        }
        Suite::Disk => {
            for k in ks {
                out.push(Check::ModulusDisk { k });
                out.push(Check::DiskQuadratic { k });
            }
        }
        Suite::Partials => {
            for v in vs() {
                out.push(Check::PartialBaseline { v: v.clone() });
                out.push(Check::PartialQuadratic { v: v.clone() });
                out.push(Check::PartialModulus { v });
            }
        }
        Suite::Radial => out.extend(vs().map(|v| Check::RadialQuadratic { v })),
        Suite::Origin => {
            let betas = [
                Direction::new(random_unit(rng, n)).expect("unit"),
                Direction::new(unit(n, 0)).expect("unit"),
            ];
            for beta in betas {
                for k in ks.clone() {
                    out.push(Check::OriginDirectional { beta: beta.clone(), k });
                }
            }
            out.extend(vs().map(|v| Check::OriginCoefficient { v }));
        }
        Suite::Equality | Suite::Sharpness => {}
    }
    out
}

fn run_sample(
    config: &SuiteConfig,
    kinds: &[super::MapKind],
    fixed: Option<&HoloMap>,
    sample: u64,
) -> SampleOutcome {
    let mut rng = sample_rng(config.seed, sample);
    let f = match fixed {
        Some(f) => Ok(f.clone()),
        None => {
            let kind = kinds[(sample % kinds.len() as u64) as usize];
            sample_map(&mut rng, kind, config.n, config.m, config.degree)
        }
    };
    let f = match f {
        Ok(f) => f,
        Err(e) => {
            return SampleOutcome {
                records: vec![],
                error: Some(SampleError {
                    sample,
                    map: "unsampled".into(),
                    message: e.to_string(),
                }),
                failed: None,
            }
        }
    };
    let label = f.label();
    let z = match config.suite {
        Suite::Radial => random_axis_point(&mut rng, config.n, config.max_radius),
        Suite::Origin => BallPoint::origin(config.n),
        _ => random_ball_point(&mut rng, config.n, config.max_radius),
    };
    let checks = checks_for(&mut rng, config, &z);
    let result = Jet::new(&f, &z).and_then(|jet| {
        checks
            .iter()
            .map(|c| check_with_jet(&jet, c, &label))
            .collect::<Result<Vec<_>>>()
    });
    match result {
        Ok(bounds) => {
            let records: Vec<Record> = bounds
                .into_iter()
                .map(|b| Record {
                    suite: config.suite,
                    sample,
                    status: Status::of(b.slack, config.tol),
                    bound: b,
                })
                .collect();
            let failed = records.iter().any(|r| r.status == Status::Fail).then(|| FailedSample {
                sample,
                map: label.clone(),
                poly: f
                    .as_poly()
                    .map(|p| serde_json::from_str(&p.to_json()).expect("poly json")),
            });
            SampleOutcome {
                records,
                error: None,
                failed,
            }
        }
        Err(e) => SampleOutcome {
            records: vec![],
            error: Some(SampleError {
                sample,
                map: label,
                message: e.to_string(),
            }),
            failed: None,
        },
    }
}

/// Runs one of the inequality suites (`main`, `disk`, `partials`, `radial`, `origin`).
pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    if matches!(config.suite, Suite::Equality | Suite::Sharpness) {
        return Err(Error::Config(format!("{:?} is not an inequality suite", config.suite)));
    }
    let fixed = load_map(config)?;
    let kinds = if fixed.is_some() {
        vec![]
    } else {
        kinds_for(&config.maps, config.n, config.m)?
    };
    let outcomes: Vec<SampleOutcome> = (0..config.samples)
        .into_par_iter()
        .map(|s| run_sample(config, &kinds, fixed.as_ref(), s))
        .collect();
    let mut records = Vec::new();
    let mut errors = Vec::new();
    let mut failed = Vec::new();
    for o in outcomes {
        records.extend(o.records);
        errors.extend(o.error);
        failed.extend(o.failed);
    }
    Ok(Report::new(config.clone(), records, vec![], vec![], errors, failed))
}

fn record(suite: Suite, sample: u64, tol: f64, bound: BoundReport) -> Record {
    Record {
        suite,
        sample,
        status: Status::of(bound.slack, tol),
        bound,
    }
}

/// Largest `|a_alpha|` over nonzero `alpha` with `|alpha| <= max_degree`
/// that are not multiples of `v`, from quadrature at the origin.
pub fn off_lattice_residual(f: &HoloMap, v: &MultiIndex, max_degree: u32) -> Result<f64> {
    let n = f.domain_dim();
    let origin = BallPoint::origin(n);
    let nodes = (2 * max_degree as usize + 2).next_power_of_two().max(DEFAULT_NODES);
    let spec = QuadratureSpec::default_at(&origin).with_nodes(nodes)?;
    let jet = TorusJet::sample(f, &origin, &spec)?;
    let mut worst: f64 = 0.0;
    for alpha in MultiIndex::enumerate_up_to(n, max_degree).into_iter().skip(1) {
        if !alpha.is_multiple_of(v) {
            worst = worst.max(crate::linalg::norm(&jet.coefficient(&alpha)?));
        }
    }
    Ok(worst)
}

fn max_abs_slack(records: &[Record]) -> f64 {
    records.iter().map(|r| r.bound.slack.abs()).fold(0.0, f64::max)
}

/// Multi-indexes for the rigidity check: all ones, one entry raised to 2, all twos.
fn rigidity_indices(n: usize) -> Vec<MultiIndex> {
    let ones = MultiIndex::new(vec![1; n]);
    let mut bumped = vec![1; n];
    bumped[0] = 2;
    let twos = MultiIndex::new(vec![2; n]);
    let mut out = vec![ones, MultiIndex::new(bumped), twos];
    out.dedup();
    out
}

/// Constructs maps that attain equality and certifies that they do.
pub fn equality_suite(config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    if config.suite != Suite::Equality {
        return Err(Error::Config("equality_suite needs suite = equality".into()));
    }
    let (n, m, tol) = (config.n, config.m, config.tol);
    let suite = Suite::Equality;
    let mut records = Vec::new();
    let mut certificates = Vec::new();
    let mut errors = Vec::new();

    // automorphisms: first-order equality at random points
    let auto: Vec<Result<Record>> = (0..config.samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = sample_rng(config.seed, s);
            let a = random_ball_point(&mut rng, n, 0.8);
            let f = HoloMap::Family(ClosedForm::Automorphism(Automorphism::new(a)));
            let z = random_ball_point(&mut rng, n, config.max_radius);
            let scale = 0.1 + 2.0 * rng.random::<f64>();
            let beta = Direction::new(random_unit(&mut rng, n) * Complex64::new(scale, 0.0))?;
            let jet = Jet::new(&f, &z)?;
            Ok(record(suite, s, tol, check_with_jet(&jet, &Check::FirstOrder { beta }, &f.label())?))
        })
        .collect();
    let mut next = config.samples;
    let mut auto_records = Vec::new();
    for (s, r) in auto.into_iter().enumerate() {
        match r {
            Ok(r) => auto_records.push(r),
            Err(e) => errors.push(SampleError {
                sample: s as u64,
                map: "automorphism".into(),
                message: e.to_string(),
            }),
        }
    }
    certificates.push(Certificate::at_most(
        "automorphism first-order equality",
        max_abs_slack(&auto_records),
        1e-9,
        format!("max |slack| over {} automorphism contexts", auto_records.len()),
    ));
    records.extend(auto_records);

    // first-order extremal maps through (xi, w0), 50 directions each
    let k1: Vec<Result<Vec<Record>>> = (0..config.samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = sample_rng(config.seed, GRID_STREAM + s);
            let xi = random_ball_point(&mut rng, n, 0.8);
            let w0 = random_ball_point(&mut rng, m, 0.8);
            let iso = random_isometry(&mut rng, m, n)?;
            let jac = extremal_k1_jacobian(&xi, &w0, &iso)?;
            let f = extremal_k1_map(&xi, &w0, &jac)?;
            let jet = Jet::new(&f, &xi)?;
            (0..50)
                .map(|_| {
                    let beta = Direction::new(super::sampling::gaussian_vec(&mut rng, n))?;
                    let b = check_with_jet(&jet, &Check::FirstOrder { beta }, &f.label())?;
                    Ok(record(suite, next + s, tol, b))
                })
                .collect()
        })
        .collect();
    let mut k1_records = Vec::new();
    for (s, r) in k1.into_iter().enumerate() {
        match r {
            Ok(r) => k1_records.extend(r),
            Err(e) => errors.push(SampleError {
                sample: next + s as u64,
                map: "extremal-k1".into(),
                message: e.to_string(),
            }),
        }
    }
    next += config.samples;
    certificates.push(Certificate::at_most(
        "first-order extremal map equality",
        max_abs_slack(&k1_records),
        1e-9,
        format!("max |slack| over {} directions", k1_records.len()),
    ));
    records.extend(k1_records);

    // origin extremal maps on a grid of v and |a0|
    let mut rng = sample_rng(config.seed, 2 * GRID_STREAM);
    let mut grid_records = Vec::new();
    for v in MultiIndex::enumerate_up_to(n, 4).into_iter().skip(1) {
        for a0_norm in [0.0, 0.3, 0.7] {
            let a0 = BallPoint::new(random_unit(&mut rng, m) * Complex64::new(a0_norm, 0.0))?;
            let u = random_unit(&mut rng, m);
            let av = extremal_origin_coefficient(&a0, &u, &v)?;
            let f = extremal_origin_map(&a0, &av, &v)?;
            let jet = Jet::new(&f, &BallPoint::origin(n))?;
            let b = check_with_jet(&jet, &Check::OriginCoefficient { v: v.clone() }, &f.label())?;
            grid_records.push(record(suite, next, tol, b));
            next += 1;
        }
    }
    certificates.push(Certificate::at_most(
        "origin extremal map equality",
        max_abs_slack(&grid_records),
        1e-10,
        format!("max |slack| over {} grid maps, |v| <= 4, |a0| in {{0, 0.3, 0.7}}", grid_records.len()),
    ));
    records.extend(grid_records);

    // the two-variable polynomial z1 + z2^2/3: equality for v = (1,0), yet a
    // coefficient off the multiples of v
    let special = PolyMap::from_terms(
        2,
        1,
        [
            (MultiIndex::new(vec![1, 0]), rvec(&[1.0])),
            (MultiIndex::new(vec![0, 2]), rvec(&[1.0 / 3.0])),
        ],
    )?;
    let v10 = MultiIndex::new(vec![1, 0]);
    let special_map: HoloMap = special.clone().into();
    let b = check_with_jet(
        &Jet::exact(&special, &BallPoint::origin(2))?,
        &Check::OriginCoefficient { v: v10.clone() },
        &special_map.label(),
    )?;
    certificates.push(Certificate::at_most(
        "z1 + z2^2/3 attains coefficient equality",
        b.slack.abs(),
        0.0,
        "v = (1,0), a0 = 0, a_v = 1",
    ));
    let stray = special
        .terms()
        .filter(|(alpha, _)| !alpha.is_zero() && !alpha.is_multiple_of(&v10))
        .map(|(_, a)| crate::linalg::norm(a))
        .fold(0.0, f64::max);
    certificates.push(Certificate::above(
        "z1 + z2^2/3 is not of the extremal form",
        stray,
        1e-9,
        "largest coefficient off the multiples of v = (1,0)",
    ));
    records.push(record(suite, next, tol, b));
    next += 1;

    // rigidity: extremal origin maps have no coefficients off the lattice of v
    for v in rigidity_indices(n) {
        for a0_norm in [0.0, 0.3, 0.7] {
            let a0 = BallPoint::new(random_unit(&mut rng, m) * Complex64::new(a0_norm, 0.0))?;
            let av = extremal_origin_coefficient(&a0, &random_unit(&mut rng, m), &v)?;
            let f = extremal_origin_map(&a0, &av, &v)?;
            let worst = off_lattice_residual(&f, &v, 8)?;
            certificates.push(Certificate::at_most(
                format!("off-lattice coefficients vanish, v = {v}, |a0| = {a0_norm}"),
                worst,
                1e-9,
                "max |a_alpha| over |alpha| <= 8 not a multiple of v",
            ));
        }
    }
    let _ = next;
    Ok(Report::new(config.clone(), records, certificates, vec![], errors, vec![]))
}

/// Extremal families swept towards the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SweepFamily {
    /// Disk-to-ball family against the one-variable quadratic estimate.
    #[value(alias = "remark2")]
    Disk,
    /// First-axis family against the pure `z_1` derivative estimate.
    #[value(alias = "remark4")]
    Axis,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub w: f64,
    pub ratio: f64,
    pub predicted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: SweepFamily,
    pub k: u32,
    pub xi: f64,
    pub points: Vec<SweepPoint>,
    /// Ratios nondecreasing in `|w|`.
    pub monotone: bool,
    /// Last ratio at least the prediction minus `1e-6`.
    pub final_ok: bool,
    /// Largest relative gap between attained and predicted ratios.
    pub law_gap: f64,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.monotone && self.final_ok
    }
}

fn sweep_one(
    family: SweepFamily,
    k: u32,
    xi_norm: f64,
    config: &SuiteConfig,
    stream: u64,
) -> Result<(SweepReport, Vec<BoundReport>)> {
    let mut rng = sample_rng(config.seed, stream);
    let theta = rng.random::<f64>() * std::f64::consts::TAU;
    let phase = Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
    let u = random_unit(&mut rng, config.m);
    let power = match family {
        SweepFamily::Disk => 2 * (k as i32 - 1),
        SweepFamily::Axis => k as i32 - 1,
    };
    let mut points = Vec::new();
    let mut bounds = Vec::new();
    for &w_norm in &config.radii {
        let predicted = ((w_norm + xi_norm) / (1.0 + xi_norm)).powi(power);
        let b = match family {
            SweepFamily::Disk => {
                let xi = Complex64::from_polar(xi_norm, theta);
                let w = &u * Complex64::new(w_norm, 0.0);
                let f = HoloMap::Family(ClosedForm::SharpDisk { xi, w });
                let z = BallPoint::new(CVec::from_element(1, xi))?;
                check_with_jet(&Jet::new(&f, &z)?, &Check::DiskQuadratic { k }, &f.label())?
            }
            SweepFamily::Axis => {
                let n = config.n;
                let mut c = CVec::zeros(n);
                c[0] = Complex64::from_polar(xi_norm, theta);
                let xi = BallPoint::new(c)?;
                let w = phase * w_norm;
                let f = HoloMap::Family(ClosedForm::SharpAxis { xi: xi.clone(), w });
                // the pure z_1 derivative is the k-th derivative along e_1
                let line = LineJet::sample(&f, &xi, &Direction::new(unit(n, 0))?, DEFAULT_NODES)?;
                let d = line.derivative(k)?;
                let fz = f.eval(&xi)?;
                let v = MultiIndex::axis(n, 0, k);
                let rhs = rhs_partial(&v, xi_norm, fz[0].norm())?.modulus;
                let ctx = BoundContext {
                    map: f.label(),
                    z: to_pairs(&xi),
                    v: Some(v),
                    component: Some(0),
                    ..Default::default()
                };
                BoundReport::new(InequalityId::PartialModulus, d[0].norm(), rhs, ctx)
            }
        };
        points.push(SweepPoint {
            w: w_norm,
            ratio: b.ratio,
            predicted,
        });
        bounds.push(b);
    }
    let monotone = points.windows(2).all(|p| p[1].ratio >= p[0].ratio - 1e-12);
    let last = points.last().expect("nonempty radii");
    let final_ok = last.ratio >= last.predicted - 1e-6;
    let law_gap = points
        .iter()
        .map(|p| rel_gap_scalar(p.ratio, p.predicted))
        .fold(0.0, f64::max);
    Ok((
        SweepReport {
            family,
            k,
            xi: xi_norm,
            points,
            monotone,
            final_ok,
            law_gap,
        },
        bounds,
    ))
}

/// `d^v` of the power family at a first-axis point: the attained value
/// against its closed form, and the radial-estimate record.
pub fn power_family_tightness(
    v: &MultiIndex,
    xi_norm: f64,
    w: Complex64,
    theta: f64,
) -> Result<(f64, BoundReport)> {
    let n = v.dim();
    let mut c = CVec::zeros(n);
    c[0] = Complex64::from_polar(xi_norm, theta);
    let xi = BallPoint::new(c)?;
    let f = HoloMap::Family(ClosedForm::SharpPower {
        v: v.clone(),
        xi: xi.clone(),
        w,
    });
    let jet = Jet::new(&f, &xi)?;
    let d = jet.partial(v)?[0];
    let k = v.degree();
    let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let expected = sign * v.sharpness_factor()?.sqrt() * v.factorial() * (1.0 - w.norm_sqr())
        / (1.0 - xi_norm * xi_norm).powf((v.entries()[0] + k) as f64 / 2.0);
    let gap = (d - expected).norm() / expected.abs().max(1.0);
    let b = check_with_jet(&jet, &Check::RadialQuadratic { v: v.clone() }, &f.label())?;
    Ok((gap, b))
}

/// Sweeps the extremal families towards the boundary and checks the
/// power family's attained derivative.
pub fn sharpness_sweep(config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    if config.suite != Suite::Sharpness {
        return Err(Error::Config("sharpness_sweep needs suite = sharpness".into()));
    }
    let families = if config.families.is_empty() {
        vec![SweepFamily::Disk, SweepFamily::Axis]
    } else {
        config.families.clone()
    };
    let mut jobs = Vec::new();
    for family in &families {
        for k in 1..=config.k_max {
            for &xi in &config.xi {
                jobs.push((*family, k, xi));
            }
        }
    }
    let results: Vec<Result<(SweepReport, Vec<BoundReport>)>> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, &(family, k, xi))| sweep_one(family, k, xi, config, i as u64))
        .collect();
    let mut sweeps = Vec::new();
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((s, bounds)) => {
                sweeps.push(s);
                records.extend(
                    bounds
                        .into_iter()
                        .map(|b| record(Suite::Sharpness, i as u64, config.tol, b)),
                );
            }
            Err(e) => errors.push(SampleError {
                sample: i as u64,
                map: format!("{:?} sweep", jobs[i].0),
                message: e.to_string(),
            }),
        }
    }

    let mut certificates = Vec::new();
    let mut next = jobs.len() as u64;
    let mut rng = sample_rng(config.seed, GRID_STREAM + 7);
    let w = Complex64::from_polar(0.5, rng.random::<f64>() * std::f64::consts::TAU);
    let theta = rng.random::<f64>() * std::f64::consts::TAU;
    let xi_mid = config.xi[config.xi.len() / 2];
    for v in MultiIndex::enumerate_up_to(config.n, config.k_max.min(4)).into_iter().skip(1) {
        let (gap, b) = power_family_tightness(&v, xi_mid, w, theta)?;
        let floor = 0.25f64.powi(v.degree() as i32 - 1);
        certificates.push(Certificate::at_most(
            format!("power family derivative matches closed form, v = {v}"),
            gap,
            1e-8,
            format!("|xi| = {xi_mid}, |w| = 0.5"),
        ));
        certificates.push(Certificate::at_most(
            format!("power family ratio above 4^-(|v|-1), v = {v}"),
            floor - 1e-8 - b.ratio,
            0.0,
            format!("ratio {} against floor {floor}", b.ratio),
        ));
        records.push(record(Suite::Sharpness, next, config.tol, b));
        next += 1;
    }
    Ok(Report::new(config.clone(), records, certificates, sweeps, errors, vec![]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(suite: Suite) -> SuiteConfig {
        SuiteConfig {
            samples: 12,
            ..SuiteConfig::new(suite)
        }
    }

    #[test]
    fn every_suite_covers_its_manifest() {
        let mut cases = vec![
            SuiteConfig { n: 1, m: 2, ..config(Suite::Disk) },
            SuiteConfig { m: 1, ..config(Suite::Partials) },
            SuiteConfig { m: 1, ..config(Suite::Radial) },
            config(Suite::Main),
            config(Suite::Origin),
            SuiteConfig { samples: 3, ..config(Suite::Equality) },
            SuiteConfig { radii: vec![0.9, 0.99], k_max: 2, ..config(Suite::Sharpness) },
        ];
        for c in cases.drain(..) {
            let r = super::super::run(&c).unwrap();
            for id in c.suite.manifest() {
                assert!(r.records.iter().any(|rec| rec.bound.id == *id), "{:?} misses {id}", c.suite);
            }
            assert!(r.passed(), "{:?}: {:?} {:?}", c.suite, r.summary, r.errors);
        }
    }

    #[test]
    fn rigidity_indices_in_two_variables() {
        let v: Vec<String> = rigidity_indices(2).iter().map(|v| v.to_string()).collect();
        assert_eq!(v, ["(1,1)", "(2,1)", "(2,2)"]);
        assert_eq!(rigidity_indices(1).len(), 2);
    }
}
