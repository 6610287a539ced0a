//! Randomized suites over the estimates, sharpness sweeps, equality
//! certification, and report output.

mod sampling;
mod suites;

pub use sampling::{
    directions, kinds_for, random_axis_point, random_ball_point, random_isometry, random_unit,
    sample_map, sample_rng, MapKind,
};
pub use suites::{
    equality_suite, off_lattice_residual, power_family_tightness, run_suite, sharpness_sweep,
    SweepFamily, SweepPoint,
    SweepReport,
};

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundReport, InequalityId};
use crate::error::{Error, Result};

pub const SCHEMA: &str = "spv-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// First-order and Frechet estimates at random points and directions.
    Main,
    /// One-variable estimates, `n = 1`.
    Disk,
    /// Partial-derivative estimates.
    Partials,
    /// Partial derivatives at points of the first axis.
    Radial,
    /// Taylor-coefficient estimates at the origin.
    Origin,
    /// Equality cases.
    Equality,
    /// Asymptotic sharpness sweeps.
    Sharpness,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Main,
        Suite::Disk,
        Suite::Partials,
        Suite::Radial,
        Suite::Origin,
        Suite::Equality,
        Suite::Sharpness,
    ];

    /// Inequalities each suite is responsible for exercising.
    pub fn manifest(&self) -> &'static [InequalityId] {
        use InequalityId::*;
        match self {
            Suite::Main => &[FirstOrder, Frechet],
            Suite::Disk => &[ModulusDisk, DiskQuadratic],
            Suite::Partials => &[PartialBaseline, PartialQuadratic, PartialModulus],
            Suite::Radial => &[RadialQuadratic],
            Suite::Origin => &[OriginDirectional, OriginCoefficient],
            Suite::Equality => &[FirstOrder, OriginCoefficient],
            Suite::Sharpness => &[DiskQuadratic, PartialModulus, RadialQuadratic],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub n: usize,
    pub m: usize,
    pub samples: u64,
    /// Degree cap of sampled polynomial maps.
    pub degree: u32,
    pub k_max: u32,
    pub seed: u64,
    /// Slacks below `-tol` are violations.
    pub tol: f64,
    /// Sampled points satisfy `|z| <= max_radius`.
    pub max_radius: f64,
    /// Restrict sampled maps to these kinds; empty means every applicable kind.
    #[serde(default)]
    pub maps: Vec<MapKind>,
    /// Sweep families; empty means both.
    #[serde(default)]
    pub families: Vec<SweepFamily>,
    /// `|w|` values of the sharpness sweeps.
    pub radii: Vec<f64>,
    /// `|xi|` values of the sharpness sweeps.
    pub xi: Vec<f64>,
    /// Polynomial map replacing sampled maps.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub map_file: Option<PathBuf>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: Suite::Main,
            n: 2,
            m: 2,
            samples: 100,
            degree: 4,
            k_max: 3,
            seed: 42,
            tol: 1e-8,
            max_radius: 0.9,
            maps: Vec::new(),
            families: Vec::new(),
            radii: vec![0.9, 0.99, 0.999, 0.9999],
            xi: vec![0.25, 0.5, 0.75],
            map_file: None,
            out: None,
            format: Format::Json,
        }
    }
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        SuiteConfig {
            suite,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.samples < 1 {
            return bad("samples must be at least 1".into());
        }
        if !(1..=4).contains(&self.n) || !(1..=4).contains(&self.m) {
            return bad(format!("n and m must lie in 1..=4, got n = {}, m = {}", self.n, self.m));
        }
        if !(1..=8).contains(&self.k_max) {
            return bad(format!("k_max must lie in 1..=8, got {}", self.k_max));
        }
        if !(1..=12).contains(&self.degree) {
            return bad(format!("degree must lie in 1..=12, got {}", self.degree));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if !(self.max_radius >= 0.0 && self.max_radius < 1.0) {
            return bad(format!("max_radius must lie in [0, 1), got {}", self.max_radius));
        }
        match self.suite {
            Suite::Disk if self.n != 1 => return bad("the disk suite needs n = 1".into()),
            Suite::Equality if self.n > self.m => {
                return bad("the equality suite needs n <= m".into())
            }
            Suite::Sharpness => {
                if self.radii.is_empty() || self.radii.windows(2).any(|w| !(w[0] < w[1])) {
                    return bad("radii must be nonempty and strictly increasing".into());
                }
                if self.radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
                    return bad("radii must lie in (0, 1)".into());
                }
                if self.xi.is_empty() || self.xi.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
                    return bad("xi values must lie in (0, 1)".into());
                }
            }
            _ => {}
        }
        if self.map_file.is_some() && matches!(self.suite, Suite::Equality | Suite::Sharpness) {
            return bad("a map file only applies to inequality suites".into());
        }
        if self.map_file.is_none() {
            kinds_for(&self.maps, self.n, self.m)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    /// Slack in `(-tol, 0)`.
    Tight,
    Fail,
}

impl Status {
    pub fn of(slack: f64, tol: f64) -> Self {
        if slack >= 0.0 {
            Status::Pass
        } else if slack > -tol {
            Status::Tight
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub suite: Suite,
    pub sample: u64,
    pub status: Status,
    #[serde(flatten)]
    pub bound: BoundReport,
}

/// An equality or structural claim with its measured residual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub passed: bool,
    pub detail: String,
}

impl Certificate {
    /// Passes when `value <= tol`.
    pub fn at_most(name: impl Into<String>, value: f64, tol: f64, detail: impl Into<String>) -> Self {
        Certificate {
            name: name.into(),
            value,
            tol,
            passed: value <= tol,
            detail: detail.into(),
        }
    }

    /// Passes when `value > tol`.
    pub fn above(name: impl Into<String>, value: f64, tol: f64, detail: impl Into<String>) -> Self {
        Certificate {
            name: name.into(),
            value,
            tol,
            passed: value > tol,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleError {
    pub sample: u64,
    pub map: String,
    pub message: String,
}

/// A sample with a violation, stored so it can be replayed on its own.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailedSample {
    pub sample: u64,
    pub map: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub poly: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub records: usize,
    pub failures: usize,
    pub tight: usize,
    pub errors: usize,
    pub certificate_failures: usize,
    pub sweep_failures: usize,
    pub min_slack: Option<f64>,
    pub max_abs_slack: Option<f64>,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
}

impl Summary {
    pub fn compute(
        records: &[Record],
        certificates: &[Certificate],
        sweeps: &[SweepReport],
        errors: &[SampleError],
    ) -> Self {
        let fold = |f: fn(f64, f64) -> f64, it: &mut dyn Iterator<Item = f64>| it.reduce(f);
        Summary {
            records: records.len(),
            failures: records.iter().filter(|r| r.status == Status::Fail).count(),
            tight: records.iter().filter(|r| r.status == Status::Tight).count(),
            errors: errors.len(),
            certificate_failures: certificates.iter().filter(|c| !c.passed).count(),
            sweep_failures: sweeps.iter().filter(|s| !s.passed()).count(),
            min_slack: fold(f64::min, &mut records.iter().map(|r| r.bound.slack)),
            max_abs_slack: fold(f64::max, &mut records.iter().map(|r| r.bound.slack.abs())),
            min_ratio: fold(f64::min, &mut records.iter().map(|r| r.bound.ratio)),
            max_ratio: fold(f64::max, &mut records.iter().map(|r| r.bound.ratio)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub config: SuiteConfig,
    pub records: Vec<Record>,
    pub certificates: Vec<Certificate>,
    pub sweeps: Vec<SweepReport>,
    pub errors: Vec<SampleError>,
    pub failed_samples: Vec<FailedSample>,
    pub summary: Summary,
}

impl Report {
    pub fn new(
        config: SuiteConfig,
        mut records: Vec<Record>,
        certificates: Vec<Certificate>,
        sweeps: Vec<SweepReport>,
        errors: Vec<SampleError>,
        failed_samples: Vec<FailedSample>,
    ) -> Self {
        records.sort_by_key(|r| (r.sample, r.bound.id));
        let summary = Summary::compute(&records, &certificates, &sweeps, &errors);
        Report {
            schema: SCHEMA.to_string(),
            config,
            records,
            certificates,
            sweeps,
            errors,
            failed_samples,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        let s = &self.summary;
        s.failures == 0 && s.errors == 0 && s.certificate_failures == 0 && s.sweep_failures == 0
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(["suite", "sample", "inequality", "k_or_v", "z", "beta", "lhs", "rhs", "slack", "ratio"])
            .map_err(csv_err)?;
        for r in &self.records {
            let c = &r.bound.context;
            let k_or_v = match (&c.k, &c.v) {
                (_, Some(v)) => format!("v={v}"),
                (Some(k), None) => format!("k={k}"),
                (None, None) => String::new(),
            };
            let pairs = |p: &[[f64; 2]]| serde_json::to_string(p).expect("pairs serialize");
            w.write_record([
                serde_json::to_value(r.suite).expect("suite").as_str().unwrap_or_default().to_string(),
                r.sample.to_string(),
                r.bound.id.to_string(),
                k_or_v,
                pairs(&c.z),
                c.beta.as_deref().map(pairs).unwrap_or_default(),
                format!("{:e}", r.bound.lhs),
                format!("{:e}", r.bound.rhs),
                format!("{:e}", r.bound.slack),
                format!("{:e}", r.bound.ratio),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

/// Writes the report in the requested format.
pub fn emit(report: &Report, format: Format, path: &Path) -> Result<()> {
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Writes each failing polynomial sample to `dir/sample-<id>.json`.
pub fn persist_failures(report: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |p: &Path, e: std::io::Error| Error::Io {
        path: p.display().to_string(),
        message: e.to_string(),
    };
    let mut written = Vec::new();
    for f in &report.failed_samples {
        let Some(poly) = &f.poly else { continue };
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let path = dir.join(format!("sample-{}.json", f.sample));
        fs::write(&path, serde_json::to_string(poly).expect("json value")).map_err(|e| io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Dispatches on the configured suite.
pub fn run(config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    match config.suite {
        Suite::Equality => equality_suite(config),
        Suite::Sharpness => sharpness_sweep(config),
        _ => run_suite(config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifests_are_nonempty() {
        for s in Suite::ALL {
            assert!(!s.manifest().is_empty(), "{s:?}");
        }
    }

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::default().validate().is_ok());
        let bad = [
            SuiteConfig { samples: 0, ..Default::default() },
            SuiteConfig { n: 5, ..Default::default() },
            SuiteConfig { k_max: 9, ..Default::default() },
            SuiteConfig { tol: 0.0, ..Default::default() },
            SuiteConfig { max_radius: 1.0, ..Default::default() },
            SuiteConfig { suite: Suite::Disk, n: 2, ..Default::default() },
            SuiteConfig { suite: Suite::Equality, n: 3, m: 2, ..Default::default() },
            SuiteConfig { suite: Suite::Sharpness, radii: vec![0.9, 0.5], ..Default::default() },
            SuiteConfig { maps: vec![MapKind::Disk], ..Default::default() },
        ];
        for c in bad {
            assert!(matches!(c.validate(), Err(Error::Config(_))), "{c:?}");
        }
    }

    #[test]
    fn status_thresholds() {
        assert_eq!(Status::of(0.0, 1e-8), Status::Pass);
        assert_eq!(Status::of(-1e-9, 1e-8), Status::Tight);
        assert_eq!(Status::of(-1e-8, 1e-8), Status::Fail);
    }

    #[test]
    fn empty_report_emits_header_and_summary() {
        let r = Report::new(SuiteConfig::default(), vec![], vec![], vec![], vec![], vec![]);
        assert_eq!(r.to_csv().unwrap().lines().count(), 1);
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(r.summary.min_slack, None);
        assert!(r.passed());
    }
}
