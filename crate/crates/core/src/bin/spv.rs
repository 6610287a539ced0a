//! Command-line driver for the estimate suites.
//!
//! Exit codes: 0 when everything holds, 1 on violations or failed
//! certificates, 2 on configuration or I/O errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spv_core::harness::{self, persist_failures, Format, MapKind, Report, Suite, SuiteConfig, SweepFamily};

#[derive(Parser)]
#[command(name = "spv", version, about = "Numerical checks of higher-order Schwarz-Pick estimates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an inequality suite over sampled maps and points.
    Check {
        #[arg(long, value_enum, default_value = "main")]
        suite: Suite,
        /// Restrict sampled maps to these kinds (comma separated).
        #[arg(long, value_enum, value_delimiter = ',')]
        maps: Vec<MapKind>,
        /// Check this polynomial map (JSON) instead of sampled ones.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Largest |z| of sampled points.
        #[arg(long, default_value_t = 0.9)]
        radius: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep the extremal families towards the boundary.
    Sharpness {
        /// Families to sweep (comma separated); both by default.
        #[arg(long, value_enum, value_delimiter = ',')]
        family: Vec<SweepFamily>,
        /// Strictly increasing |w| values in (0, 1).
        #[arg(long, value_delimiter = ',', default_value = "0.9,0.99,0.999,0.9999")]
        radii: Vec<f64>,
        /// |xi| values in (0, 1).
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
        xi: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Construct extremal maps and certify equality.
    Equality {
        #[arg(long, default_value_t = 0.9)]
        radius: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 100)]
    samples: u64,
    /// Degree cap of sampled polynomial maps.
    #[arg(long, default_value_t = 4)]
    degree: u32,
    /// Largest derivative order.
    #[arg(long, default_value_t = 3)]
    kmax: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Slack tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Output path; the report goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

impl Common {
    fn config(&self, suite: Suite) -> SuiteConfig {
        SuiteConfig {
            suite,
            n: self.n,
            m: self.m,
            samples: self.samples,
            degree: self.degree,
            k_max: self.kmax,
            seed: self.seed,
            tol: self.tol,
            out: self.out.clone(),
            format: self.format,
            ..SuiteConfig::default()
        }
    }
}

fn build(cli: Cli) -> SuiteConfig {
    match cli.command {
        Command::Check { suite, maps, map, radius, common } => SuiteConfig {
            maps,
            map_file: map,
            max_radius: radius,
            ..common.config(suite)
        },
        Command::Sharpness { family, radii, xi, common } => SuiteConfig {
            families: family,
            radii,
            xi,
            ..common.config(Suite::Sharpness)
        },
        Command::Equality { radius, common } => SuiteConfig {
            max_radius: radius,
            ..common.config(Suite::Equality)
        },
    }
}

fn write(report: &Report, config: &SuiteConfig) -> spv_core::Result<()> {
    match &config.out {
        Some(path) => {
            harness::emit(report, config.format, path)?;
            let dir = path.with_extension("failures");
            for p in persist_failures(report, &dir)? {
                eprintln!("failing sample written to {}", p.display());
            }
            Ok(())
        }
        None => {
            let text = match config.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv()?,
            };
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let config = build(Cli::parse());
    let report = match harness::run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = write(&report, &config) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let s = &report.summary;
    eprintln!(
        "{} records, {} violations, {} tight, {} errors, {} failed certificates, {} failed sweeps",
        s.records, s.failures, s.tight, s.errors, s.certificate_failures, s.sweep_failures
    );
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
