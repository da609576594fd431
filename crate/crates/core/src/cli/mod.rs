//! The `landau` command-line interface.
//!
//! Every subcommand writes one report, JSON (`{"config", "results",
//! "version"}`) or CSV (header row, LF line endings), to `--out` or stdout.
//! Exit codes: 0 success, 1 failed check or numerical error, 2 usage error.

mod commands;
pub mod output;
mod suite;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Result;
use crate::frames::LatticeSpec;
use crate::numerics::Grid2D;
use crate::operators::LADDER_DEGREE_CAP;
use crate::states::MagneticField;

pub use output::{Cell, Output, Table};
pub use suite::{verify_suite, Check, VERIFY_CHECKS};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest accepted window radius.
pub const MAX_RADIUS: usize = 8;

#[derive(Parser, Debug, Clone)]
#[command(name = "landau", version, about = "Landau-model experiments: orbits, spectra, Gabor frames, Balian-Low diagnostics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Field strength b > 0.
    #[arg(long = "b", global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    /// Lattice generators a1,a2,b1,b2 in the plane of T(z); default is the critical square lattice.
    #[arg(long, global = true, value_parser = parse_lattice, allow_hyphen_values = true)]
    pub lattice: Option<[f64; 4]>,
    /// Window radii, ascending. Single-window commands use the first.
    #[arg(long, global = true, value_delimiter = ',', default_value = "1,2,3,4")]
    pub radii: Vec<usize>,
    /// Landau level n of the frame generator ψ_{n,0}.
    #[arg(long, global = true, default_value_t = 0)]
    pub level: usize,
    /// Output format; orbit defaults to csv, everything else to json
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for the randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Quadrature half-width; default 10/√b.
    #[arg(long = "grid-L", global = true)]
    pub grid_extent: Option<f64>,
    /// Quadrature points per axis (odd).
    #[arg(long = "grid-N", global = true, default_value_t = 401)]
    pub grid_points: usize,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Classical cyclotron trajectory (RK4).
    Orbit(OrbitArgs),
    /// Eigen-residual table of ψ_{n,m}.
    Spectrum(SpectrumArgs),
    /// Exact and quadrature overlaps ⟨ψ, T_{m,n} ψ⟩.
    Translate,
    /// Gram matrix of one frame window.
    FrameGram,
    /// Extreme Gram eigenvalues per window radius.
    FrameBounds,
    /// Löwdin orthonormalization quality per window radius.
    Lowdin,
    /// Localization of the central Löwdin vector per window radius.
    BalianLow,
    /// Segal-Bargmann transform checks on the lowest Landau level.
    SbVerify(SbArgs),
    /// Full invariant suite.
    Verify(VerifyArgs),
}

impl Command {
    fn default_format(&self) -> Format {
        match self {
            Command::Orbit(_) => Format::Csv,
            _ => Format::Json,
        }
    }

    fn uses_radii(&self) -> bool {
        matches!(self, Command::Translate | Command::FrameGram | Command::FrameBounds | Command::Lowdin | Command::BalianLow)
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize)]
pub struct OrbitArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub q1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub q2: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub p1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p2: f64,
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub dt: f64,
    /// Number of steps; default covers `--periods` cyclotron periods.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub periods: f64,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumArgs {
    #[arg(long, default_value_t = 5)]
    pub n_max: usize,
    #[arg(long, default_value_t = 5)]
    pub m_max: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize)]
pub struct SbArgs {
    /// Largest power m in span{(B*)^m φ0}.
    #[arg(long, default_value_t = 8)]
    pub m_max: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize)]
pub struct VerifyArgs {
    /// Random states per algebraic check.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Random pairs for the quadrature comparison.
    #[arg(long, default_value_t = 4)]
    pub oracle_pairs: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

fn parse_lattice(s: &str) -> std::result::Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated numbers a1,a2,b1,b2, got {s:?}"));
    }
    let mut out = [0.0; 4];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(out)
}

/// Validated configuration, echoed in every JSON report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub b: f64,
    pub lattice: [f64; 4],
    pub density_ratio: f64,
    pub radii: Vec<usize>,
    pub level: usize,
    pub format: Format,
    pub seed: u64,
    #[serde(rename = "grid_L")]
    pub grid_extent: f64,
    #[serde(rename = "grid_N")]
    pub grid_points: usize,
}

impl RunConfig {
    pub fn field(&self) -> MagneticField {
        MagneticField::new(self.b).expect("validated")
    }

    pub fn lattice_spec(&self) -> LatticeSpec {
        let l = self.lattice;
        LatticeSpec::new([l[0], l[1]], [l[2], l[3]]).expect("validated")
    }

    pub fn grid(&self) -> Grid2D {
        Grid2D::new(self.grid_extent, self.grid_points).expect("validated")
    }
}

/// Rejected before any computation; exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn validate(cli: &Cli) -> std::result::Result<RunConfig, UsageError> {
    let c = &cli.common;
    let usage = |m: String| Err(UsageError(m));
    if MagneticField::new(c.b).is_err() {
        return usage(format!("--b must be a positive finite number, got {}", c.b));
    }
    let lattice = match c.lattice {
        Some(l) => l,
        None => {
            let side = (2.0 * std::f64::consts::PI).sqrt();
            [side, 0.0, 0.0, side]
        }
    };
    if lattice.iter().any(|v| !v.is_finite()) {
        return usage("--lattice entries must be finite".into());
    }
    let spec = match LatticeSpec::new([lattice[0], lattice[1]], [lattice[2], lattice[3]]) {
        Ok(s) => s,
        Err(e) => return usage(format!("--lattice: {e}")),
    };
    if c.radii.is_empty() {
        return usage("--radii needs at least one radius".into());
    }
    if c.radii.windows(2).any(|w| w[1] <= w[0]) {
        return usage("--radii must be strictly ascending".into());
    }
    if let Some(&r) = c.radii.iter().find(|&&r| r > MAX_RADIUS) {
        return usage(format!("radius {r} exceeds the maximum {MAX_RADIUS}"));
    }
    if c.level > LADDER_DEGREE_CAP {
        return usage(format!("--level {} exceeds the cap {LADDER_DEGREE_CAP}", c.level));
    }
    let grid_extent = c.grid_extent.unwrap_or(10.0 / c.b.sqrt());
    if let Err(e) = Grid2D::new(grid_extent, c.grid_points) {
        return usage(format!("quadrature grid: {e}"));
    }
    match &cli.command {
        Command::Orbit(o) => {
            if [o.q1, o.q2, o.p1, o.p2].iter().any(|v| !v.is_finite()) {
                return usage("initial conditions must be finite".into());
            }
            if !(o.dt.is_finite() && o.dt > 0.0) {
                return usage(format!("--dt must be positive, got {}", o.dt));
            }
            if o.steps == Some(0) {
                return usage("--steps must be at least 1".into());
            }
            if !(o.periods.is_finite() && o.periods > 0.0) {
                return usage(format!("--periods must be positive, got {}", o.periods));
            }
        }
        Command::Spectrum(s) => {
            if s.n_max > LADDER_DEGREE_CAP || s.m_max > LADDER_DEGREE_CAP {
                return usage(format!("ladder indices are capped at {LADDER_DEGREE_CAP}"));
            }
        }
        Command::SbVerify(s) => {
            if s.m_max > LADDER_DEGREE_CAP {
                return usage(format!("--m-max is capped at {LADDER_DEGREE_CAP}"));
            }
        }
        Command::Verify(v) => {
            if v.samples == 0 {
                return usage("--samples must be at least 1".into());
            }
        }
        _ => {}
    }
    Ok(RunConfig {
        command: cli.command.clone(),
        b: c.b,
        lattice,
        density_ratio: spec.density_ratio(),
        radii: c.radii.clone(),
        level: c.level,
        format: c.format.unwrap_or_else(|| cli.command.default_format()),
        seed: c.seed,
        grid_extent,
        grid_points: c.grid_points,
    })
}

/// Rendered report and whether all of its checks passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    pub passed: bool,
}

pub fn execute(config: &RunConfig) -> Result<Output> {
    match &config.command {
        Command::Orbit(args) => commands::orbit(config, args),
        Command::Spectrum(args) => commands::spectrum(config, args),
        Command::Translate => commands::translate(config),
        Command::FrameGram => commands::frame_gram(config),
        Command::FrameBounds => commands::frame_bounds(config),
        Command::Lowdin => commands::lowdin(config),
        Command::BalianLow => commands::balian_low(config),
        Command::SbVerify(args) => commands::sb_verify(config, args),
        Command::Verify(args) => commands::verify(config, args),
    }
}

pub fn render(config: &RunConfig, output: &Output) -> String {
    match config.format {
        Format::Csv => output.table.to_csv(),
        Format::Json => {
            #[derive(Serialize)]
            struct Envelope<'a> {
                config: &'a RunConfig,
                results: serde_json::Value,
                version: &'static str,
            }
            output::to_json_string(&Envelope { config, results: output.results(), version: env!("CARGO_PKG_VERSION") })
        }
    }
}

/// Runs a validated configuration to a rendered report.
pub fn run_config(config: &RunConfig) -> Result<Report> {
    let output = execute(config)?;
    Ok(Report { text: render(config, &output), passed: output.passed })
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_SUCCESS };
            let _ = e.print();
            return code;
        }
    };
    let config = match validate(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if config.command.uses_radii() && config.density_ratio > 1.0 + 1e-9 {
        eprintln!("note: density ratio {:.6} is above critical", config.density_ratio);
    }
    let report = match run_config(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &report.text),
        None => std::io::stdout().lock().write_all(report.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_FAILURE;
    }
    if report.passed {
        EXIT_SUCCESS
    } else {
        eprintln!("error: one or more checks failed");
        EXIT_FAILURE
    }
}
