//! Command-line front end: `run`, `converge` and `report`.
//!
//! Exit codes: 0 success, 1 final rate outside the acceptance band,
//! 2 usage or configuration error, 3 runtime or numeric error.

mod manifest;
mod plot;

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

pub use manifest::ExperimentManifest;
pub use plot::rates_svg;

use crate::benchmarks::{
    droplet_reference, l1_density_error, run_droplet, run_shocktube, Experiment,
};
use crate::error::{Error, Result};
use crate::integrator::SnapshotSeries;
use crate::io::{read_series_csv, write_series_csv, SeriesSidecar};
use crate::kernels::KernelFamily;
use crate::sph::{DensityMode, Theta};
use crate::transport::ConvergenceReport;

/// Half-width of the band around `-1/d` accepted by `report`.
pub const RATE_BAND: f64 = 0.3;

/// Window of the shock-tube L1 error, clear of the free ends at `t = 0.2`.
pub const SHOCKTUBE_L1_WINDOW: [f64; 2] = [0.25, 0.85];

pub const DISTANCES_FILE: &str = "distances.csv";
pub const TABLE_FILE: &str = "table.csv";
pub const REPORT_FILE: &str = "report.json";
pub const PLOT_FILE: &str = "rates.svg";
pub const MANIFEST_FILE: &str = "manifest.toml";

#[derive(Debug, Parser)]
#[command(name = "sphw", version, about = "SPH experiments with Wasserstein convergence rates")]
pub struct Cli {
    /// Worker threads for simulations and transport solves.
    #[arg(long, global = true, env = "SPHW_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate an experiment at each resolution and write snapshot series.
    Run(RunArgs),
    /// Wasserstein distances and convergence rates between written series.
    Converge(ConvergeArgs),
    /// Print a convergence table and check the final rate against -1/d.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DensityModeArg {
    Summation,
    Continuity,
}

impl From<DensityModeArg> for DensityMode {
    fn from(m: DensityModeArg) -> Self {
        match m {
            DensityModeArg::Summation => DensityMode::Summation,
            DensityModeArg::Continuity => DensityMode::Continuity,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub experiment: Option<Experiment>,
    /// Comma-separated resolutions: lattice sizes for the droplet, particle
    /// counts for the shock tube.
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<usize>>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub theta: Option<u8>,
    #[arg(long, value_enum)]
    pub density_mode: Option<DensityModeArg>,
    #[arg(long)]
    pub kernel: Option<KernelFamily>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML manifest; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    /// Directory written by `run`.
    pub dir: PathBuf,
    /// Output directory; defaults to the input directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot of the rates.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// `report.json` or the directory holding it.
    pub path: PathBuf,
}

impl RunArgs {
    pub fn manifest(&self) -> Result<ExperimentManifest> {
        let mut m = match (&self.config, self.experiment) {
            (Some(path), _) => ExperimentManifest::load(path)?,
            (None, Some(e)) => ExperimentManifest::new(e),
            (None, None) => return Err(Error::config("either --experiment or --config is required")),
        };
        if let Some(e) = self.experiment {
            m.experiment = e;
        }
        if let Some(levels) = &self.levels {
            m.levels = levels.clone();
        }
        if let Some(t) = self.theta {
            m.set_theta(Theta::try_from(t)?);
        }
        if let Some(mode) = self.density_mode {
            m.set_density_mode(mode.into());
        }
        if let Some(k) = self.kernel {
            m.set_kernel(k);
        }
        if let Some(out) = &self.out {
            m.out = out.clone();
        }
        m.validate()?;
        Ok(m)
    }
}

/// Runs every level of `manifest` and writes `<stem>.csv` and
/// `<stem>.json` per level plus the resolved manifest. Returns the CSV paths.
pub fn cmd_run(manifest: &ExperimentManifest) -> Result<Vec<PathBuf>> {
    manifest.validate()?;
    fs::create_dir_all(&manifest.out)?;
    fs::write(manifest.out.join(MANIFEST_FILE), manifest.to_toml()?)?;
    let mut written = Vec::new();
    for &level in &manifest.levels {
        let (series, config, extra) = match manifest.experiment {
            Experiment::Droplet => {
                let cfg = crate::benchmarks::DropletConfig {
                    sites_per_diameter: level as u32,
                    ..manifest.droplet.clone()
                };
                let run = run_droplet(&cfg)?;
                let extra = run.axis_snapshot.as_ref().and_then(|_| run.axes_at(cfg.axis_time)).map(|a| {
                    let (ra, rb) = droplet_reference(cfg.axis_time);
                    json!({
                        "axis_time": cfg.axis_time,
                        "minor": a.minor,
                        "major": a.major,
                        "reference_minor": ra,
                        "reference_major": rb,
                    })
                });
                (run.series, serde_json::to_value(&cfg)?, extra)
            }
            Experiment::Shocktube => {
                let cfg = crate::benchmarks::ShockTubeConfig { n: level, ..manifest.shocktube.clone() };
                let series = run_shocktube(&cfg)?;
                let last = series.last().ok_or_else(|| Error::Format("empty run".into()))?;
                let l1 = l1_density_error(&last.state, last.time, &cfg, SHOCKTUBE_L1_WINDOW)?;
                let extra = json!({
                    "time": last.time,
                    "l1_density_error": l1,
                    "window": SHOCKTUBE_L1_WINDOW,
                });
                (series, serde_json::to_value(&cfg)?, Some(extra))
            }
        };
        let stem = manifest.stem(level);
        let csv_path = manifest.out.join(format!("{stem}.csv"));
        write_series_csv(&series, BufWriter::new(File::create(&csv_path)?))?;
        let sidecar = SeriesSidecar {
            experiment: manifest.experiment.name().into(),
            level,
            particles: series.snapshots[0].state.len(),
            dimension: manifest.experiment.dimension(),
            config,
            times: series.times(),
            diagnostics: series.snapshots.iter().map(|s| s.diagnostics.clone()).collect(),
            extra,
        };
        fs::write(manifest.out.join(format!("{stem}.json")), sidecar.to_json()?)?;
        written.push(csv_path);
    }
    Ok(written)
}

/// Series in `dir` that have a JSON sidecar, ordered by particle count.
pub fn load_series_dir(dir: &Path) -> Result<(u8, Vec<usize>, Vec<SnapshotSeries>)> {
    let mut found = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("csv") {
            continue;
        }
        let sidecar_path = path.with_extension("json");
        if !sidecar_path.is_file() {
            continue;
        }
        let sidecar = SeriesSidecar::from_json(&fs::read_to_string(&sidecar_path)?)?;
        found.push((sidecar.particles, sidecar.dimension, path));
    }
    found.sort();
    if found.len() < 2 {
        return Err(Error::config(format!(
            "{} holds {} snapshot series, need at least two",
            dir.display(),
            found.len()
        )));
    }
    let dim = found[0].1;
    if found.iter().any(|f| f.1 != dim) {
        return Err(Error::Format("series of different dimensions".into()));
    }
    let levels: Vec<usize> = found.iter().map(|f| f.0).collect();
    if levels.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Format("two series with the same particle count".into()));
    }
    let mut series = Vec::with_capacity(found.len());
    for (n, _, path) in &found {
        let s = read_series_csv(File::open(path)?)?;
        if s.snapshots.iter().any(|snap| snap.state.len() != *n) {
            return Err(Error::Format(format!("{}: particle count differs from its sidecar", path.display())));
        }
        series.push(s);
    }
    Ok((dim, levels, series))
}

/// Distances, table, JSON report and optionally the SVG plot for the series
/// in `dir`.
pub fn cmd_converge(dir: &Path, out: Option<&Path>, svg: bool) -> Result<ConvergenceReport> {
    let (dim, levels, series) = load_series_dir(dir)?;
    let report = ConvergenceReport::from_series(dim, &levels, &series)?;
    let out = out.unwrap_or(dir);
    fs::create_dir_all(out)?;
    report.write_distances_csv(BufWriter::new(File::create(out.join(DISTANCES_FILE))?))?;
    report.write_table_csv(BufWriter::new(File::create(out.join(TABLE_FILE))?))?;
    fs::write(out.join(REPORT_FILE), report.to_json()?)?;
    if svg {
        fs::write(out.join(PLOT_FILE), rates_svg(&report))?;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportSummary {
    pub text: String,
    /// Final rate within `RATE_BAND` of `-1/d`.
    pub pass: bool,
}

pub fn summarize(report: &ConvergenceReport) -> ReportSummary {
    let target = report.target_rate();
    let mut text = String::new();
    let _ = writeln!(text, "{:>3} {:>7} {:>7} {:>14} {:>10}", "k", "N_k", "N_k+1", "M", "C");
    for (k, pair) in report.pairs.iter().enumerate() {
        let c = match k {
            0 => String::new(),
            _ => match report.rates.get(k - 1).copied().flatten() {
                Some(c) if (c - target).abs() <= RATE_BAND => format!("{c:.4} *"),
                Some(c) => format!("{c:.4}"),
                None => "undefined".into(),
            },
        };
        let _ = writeln!(text, "{:>3} {:>7} {:>7} {:>14.6e} {:>10}", k + 1, pair.n_coarse, pair.n_fine, pair.sup, c);
    }
    let _ = writeln!(text, "target -1/{} = {target:.4}, band +/-{RATE_BAND} (* inside)", report.dimension);
    if report.sups().iter().all(|&m| m == 0.0) {
        let _ = writeln!(text, "degenerate: all distances vanish");
        return ReportSummary { text, pass: false };
    }
    let defined: Vec<f64> = report.rates.iter().filter_map(|c| *c).collect();
    if defined.len() >= 3 {
        let tail = &defined[defined.len() - 3..];
        let mean = tail.iter().sum::<f64>() / 3.0;
        let _ = writeln!(text, "mean of the last three rates {mean:.4}");
        if defined.iter().any(|&c| c > target) && defined.iter().any(|&c| c < target) {
            let _ = writeln!(text, "rates oscillate around {target:.4}");
        }
    }
    let pass = match report.rates.last().copied().flatten() {
        Some(c) => {
            let inside = (c - target).abs() <= RATE_BAND;
            let _ = writeln!(text, "final rate {c:.4}: {}", if inside { "within band" } else { "outside band" });
            inside
        }
        None => {
            let _ = writeln!(text, "final rate undefined");
            false
        }
    };
    ReportSummary { text, pass }
}

pub fn cmd_report(path: &Path) -> Result<ReportSummary> {
    let file = if path.is_dir() { path.join(REPORT_FILE) } else { path.to_path_buf() };
    let report = ConvergenceReport::from_json(&fs::read_to_string(file)?)?;
    Ok(summarize(&report))
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) => 2,
        _ => 3,
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Run(args) => {
            let manifest = args.manifest()?;
            for path in cmd_run(&manifest)? {
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Converge(args) => {
            let report = cmd_converge(&args.dir, args.out.as_deref(), args.svg)?;
            print!("{}", summarize(&report).text);
            Ok(ExitCode::SUCCESS)
        }
        Command::Report(args) => {
            let summary = cmd_report(&args.path)?;
            print!("{}", summary.text);
            Ok(if summary.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

/// Entry point of the `sphw` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
