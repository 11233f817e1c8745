//! Command-line front end. CSV goes to `out`, diagnostics to `err`.
//!
//! Exit codes: 0 success or validation pass, 1 validation failure, 2 usage or
//! configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analytic::DistanceDistribution;
use crate::constellation::{self, ConstellationSpec, ObservationPoint};
use crate::error::{Error, Result};
use crate::montecarlo::{self, SamplerKind, SimulationConfig};
use crate::validation::{self, linear_grid, scaled_threshold};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sphere-bpp",
    version,
    about = "Contact and nearest-neighbor distance distributions for satellites on concentric shells"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the analytic CDF as CSV.
    Cdf(CdfArgs),
    /// Tabulate analytic and simulated CDFs side by side as CSV.
    Simulate(SimulateArgs),
    /// Run a Kolmogorov–Smirnov check of simulation against the closed form.
    Validate(ValidateArgs),
    /// List the built-in constellations.
    Presets(PresetsArgs),
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
struct SourceArgs {
    /// Built-in constellation name (see `presets`).
    #[arg(long, group = "source")]
    preset: Option<String>,
    /// JSON constellation file.
    #[arg(long, group = "source")]
    config: Option<PathBuf>,
}

impl SourceArgs {
    fn load(&self) -> Result<ConstellationSpec> {
        match (&self.preset, &self.config) {
            (Some(name), _) => constellation::preset(name),
            (None, Some(path)) => {
                let text = std::fs::read(path)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                constellation::parse_config(&text)
            }
            (None, None) => Err(Error::Config("one of --preset or --config is required".into())),
        }
    }
}

#[derive(Debug, Args)]
struct GridArgs {
    /// First distance of the grid in km [default: 0.9 × smallest onset].
    #[arg(long)]
    dmin: Option<f64>,
    /// Last distance of the grid in km [default: 1.05 × largest LoS distance].
    #[arg(long)]
    dmax: Option<f64>,
    /// Number of grid intervals; `steps + 1` rows are written.
    #[arg(long, default_value_t = 200)]
    steps: usize,
}

impl GridArgs {
    fn build(&self, dist: &DistanceDistribution) -> Result<Vec<f64>> {
        let dmin = self.dmin.unwrap_or(0.9 * dist.min_onset());
        let dmax = self.dmax.unwrap_or(1.05 * dist.support_top());
        if !(dmin.is_finite() && dmin >= 0.0) {
            return Err(Error::InvalidDistance(dmin));
        }
        if !(dmax.is_finite() && dmax >= dmin) {
            return Err(Error::Config(format!("--dmax {dmax} must be finite and ≥ --dmin {dmin}")));
        }
        Ok(linear_grid(dmin, dmax, self.steps))
    }
}

#[derive(Debug, Args)]
struct SimArgs {
    /// Number of Monte-Carlo trials.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Point placement law: `colatitude` or `area`.
    #[arg(long, default_value_t = SamplerKind::ColatitudeUniform)]
    sampler: SamplerKind,
    /// Worker threads [default: all cores]; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
}

impl SimArgs {
    fn config(&self) -> Result<SimulationConfig> {
        let sim = SimulationConfig::new(self.trials, self.seed, self.sampler)?;
        Ok(match self.workers {
            Some(n) => sim.with_workers(n),
            None => sim,
        })
    }
}

#[derive(Debug, Args)]
struct CdfArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Observer: `earth` or `shell:I` (1-based).
    #[arg(long)]
    obs: ObservationPoint,
    #[command(flatten)]
    grid: GridArgs,
    /// Add one CCDF column per shell.
    #[arg(long)]
    per_shell: bool,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Observer: `earth` or `shell:I` (1-based).
    #[arg(long)]
    obs: ObservationPoint,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    sim: SimArgs,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Observer: `earth` or `shell:I` (1-based).
    #[arg(long)]
    obs: ObservationPoint,
    #[command(flatten)]
    sim: SimArgs,
    /// KS threshold [default: 0.01 at 100000 trials, scaled as 1/√trials].
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Debug, Args)]
struct PresetsArgs {
    /// Show a single preset.
    #[arg(long)]
    name: Option<String>,
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Cdf(a) => cmd_cdf(&a, out),
        Command::Simulate(a) => cmd_simulate(&a, out),
        Command::Validate(a) => cmd_validate(&a, out, err),
        Command::Presets(a) => cmd_presets(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Internal(format!("write failed: {e}"))
}

fn cmd_cdf(args: &CdfArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = args.source.load()?;
    let dist = DistanceDistribution::new(&spec, args.obs)?;
    let grid = args.grid.build(&dist)?;
    let table = validation::sweep_report(&spec, args.obs, &grid)?;
    table.write_csv(out, args.per_shell).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = args.source.load()?;
    let sim = args.sim.config()?;
    let dist = DistanceDistribution::new(&spec, args.obs)?;
    let grid = args.grid.build(&dist)?;
    let emp = montecarlo::run_experiment(&spec, args.obs, &sim)?;
    writeln!(out, "d_km,cdf_analytic,cdf_empirical").map_err(io_err)?;
    for d in grid {
        writeln!(out, "{},{},{}", d, dist.cdf(d)?, emp.eval(d)).map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn cmd_validate(args: &ValidateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let spec = args.source.load()?;
    let sim = args.sim.config()?;
    let threshold = args.threshold.unwrap_or_else(|| scaled_threshold(sim.trials()));
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidProbability(threshold));
    }
    let report = validation::validate(&spec, args.obs, &sim, threshold)?;
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let name = if spec.name.is_empty() { "(unnamed)" } else { spec.name.as_str() };
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(io_err);
    w(out, format!("constellation: {name} ({} shells), observer: {}", spec.num_shells(), args.obs))?;
    w(out, format!("sampler: {}, trials: {}, seed: {}", sim.sampler(), sim.trials(), sim.seed()))?;
    w(
        out,
        format!(
            "KS statistic: {:.6} at d = {:.3} km (threshold {:.4}) {}",
            report.ks.statistic,
            report.ks.location,
            threshold,
            verdict(report.ks.pass)
        ),
    )?;
    let v = &report.visibility;
    w(
        out,
        format!(
            "no-visibility fraction: observed {:.6}, expected {:.6} (4 sigma = {:.6}) {}",
            v.observed_blind,
            v.expected_blind,
            4.0 * v.sigma,
            verdict(v.pass)
        ),
    )?;
    w(out, format!("result: {}", verdict(report.pass)))?;
    if report.pass {
        Ok(EXIT_OK)
    } else {
        if report.sampler == SamplerKind::AreaUniform {
            let _ = writeln!(
                err,
                "note: the closed forms assume colatitude-uniform placement about the observer; \
                 a mismatch with the area-uniform sampler is expected"
            );
        }
        Ok(EXIT_FAIL)
    }
}

fn cmd_presets(args: &PresetsArgs, out: &mut dyn Write) -> Result<i32> {
    let specs = match &args.name {
        Some(name) => vec![constellation::preset(name)?],
        None => constellation::presets(),
    };
    for spec in specs {
        writeln!(
            out,
            "{}: {} shell{}, {} satellites",
            spec.name,
            spec.num_shells(),
            if spec.num_shells() == 1 { "" } else { "s" },
            spec.total_satellites()
        )
        .map_err(io_err)?;
        for (k, s) in spec.shells.iter().enumerate() {
            writeln!(
                out,
                "  S{}: altitude {} km, {} satellites",
                k + 1,
                s.altitude_km,
                s.num_satellites
            )
            .map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}
