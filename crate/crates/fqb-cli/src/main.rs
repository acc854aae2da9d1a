//! `fqb` — stroboscopic simulator for spin-1/2 quantum batteries charged by
//! a periodically driven Ising coupler.

mod config;
mod output;
mod svg;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use config::{parse_angle, parse_list, parse_site_list, Angle, RunConfig};
use fqb_core::{
    cross_validate, evolve, landscape_table, sweep_asymmetric, sweep_coupling, sweep_size,
    sweep_tau, validation_grid, with_workers, BipartitionSpec, Boundary, ChargerParams,
    CouplingRange, CrossValidation, FixedInterval, KickSeries, LogBase, ObservableSet, SweepResult,
    ValidationPoint,
};

/// A bad flag combination or value; exits with code 2 like a parse error.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Parser, Debug)]
#[command(
    name = "fqb",
    version,
    about = "Floquet quantum battery: exact stroboscopic charging simulator",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve one protocol and emit the kick series as CSV
    Evolve(EvolveArgs),
    /// Sweep the symmetric driving period tau0 = tau1
    SweepTau(SweepTauArgs),
    /// Sweep one interval while the other stays fixed
    SweepAsym(SweepAsymArgs),
    /// Sweep the system size at a fixed protocol
    SweepSize(SweepSizeArgs),
    /// Sweep the interaction strength J
    SweepCoupling(SweepCouplingArgs),
    /// Evaluate the structural optimization landscape at tau = pi/4, pi/2
    /// and over the full period grid
    Landscape(LandscapeArgs),
    /// Evolve with the bipartite entanglement entropy recorded
    Entropy(EntropyArgs),
    /// Cross-validate the fast path against the dense matrix oracle
    Validate(ValidateArgs),
}

fn parse_angle_arg(s: &str) -> Result<f64, String> {
    parse_angle(s)
}

fn parse_boundary(s: &str) -> Result<Boundary, String> {
    Boundary::from_str(s)
}

fn parse_range(s: &str) -> Result<CouplingRange, String> {
    CouplingRange::from_str(s)
}

fn parse_log_base(s: &str) -> Result<LogBase, String> {
    LogBase::from_str(s)
}

/// Physical parameters, shared by every simulating subcommand.
#[derive(Args, Debug, Default)]
struct ParamFlags {
    /// Number of battery spins N
    #[arg(long = "n-sites", value_name = "N")]
    n_sites: Option<usize>,
    /// Interaction strength J (default 1)
    #[arg(long, value_name = "J", allow_negative_numbers = true)]
    coupling: Option<f64>,
    /// Transverse field during the first interval; 0 = integrable (default 0)
    #[arg(long, value_name = "HX", allow_negative_numbers = true)]
    hx: Option<f64>,
    /// Field strength of the second interval (default 1)
    #[arg(long, value_name = "HZ", allow_negative_numbers = true)]
    hz: Option<f64>,
    /// Battery level splitting (default 1)
    #[arg(long, value_name = "OMEGA", allow_negative_numbers = true)]
    omega: Option<f64>,
    /// First interval duration: radians or pi fraction (e.g. pi/2, 3pi/8)
    #[arg(long, value_name = "ANGLE", value_parser = parse_angle_arg)]
    tau0: Option<f64>,
    /// Second interval duration
    #[arg(long, value_name = "ANGLE", value_parser = parse_angle_arg)]
    tau1: Option<f64>,
    /// Boundary condition: pbc or obc (default pbc)
    #[arg(long, value_parser = parse_boundary)]
    boundary: Option<Boundary>,
    /// Interaction range: lr or nn (default lr)
    #[arg(long, value_parser = parse_range)]
    range: Option<CouplingRange>,
    /// Halve the antipodal bond weight on even-size rings
    #[arg(long)]
    antipodal_halving: bool,
}

/// Output and execution controls.
#[derive(Args, Debug, Default)]
struct RunFlags {
    /// Number of kicks (default 500)
    #[arg(long)]
    kicks: Option<usize>,
    /// Write CSV here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Also write an SVG plot here
    #[arg(long, value_name = "FILE")]
    plot: Option<PathBuf>,
    /// Worker threads for sweeps (default: FQB_WORKERS or all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Entropy log base: e or 2 (default e)
    #[arg(long = "log-base", value_parser = parse_log_base)]
    log_base: Option<LogBase>,
    /// Read defaults from a TOML config file (flags win)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

/// Grid bounds for the period sweeps.
#[derive(Args, Debug)]
struct GridFlags {
    /// Smallest grid value (default 0)
    #[arg(long = "tau-min", value_name = "ANGLE", value_parser = parse_angle_arg)]
    tau_min: Option<f64>,
    /// Largest grid value (default pi/2)
    #[arg(long = "tau-max", value_name = "ANGLE", value_parser = parse_angle_arg)]
    tau_max: Option<f64>,
    /// Grid resolution (default pi/32)
    #[arg(long = "tau-step", value_name = "ANGLE", value_parser = parse_angle_arg)]
    tau_step: Option<f64>,
}

impl GridFlags {
    fn build(&self) -> anyhow::Result<Vec<f64>> {
        let min = self.tau_min.unwrap_or(0.0);
        let max = self.tau_max.unwrap_or(std::f64::consts::FRAC_PI_2);
        let step = self.tau_step.unwrap_or(std::f64::consts::PI / 32.0);
        if step <= 0.0 {
            return Err(usage(format!("--tau-step must be positive, got {step}")));
        }
        if max < min {
            return Err(usage(format!(
                "--tau-max ({max}) is below --tau-min ({min})"
            )));
        }
        let count = ((max - min) / step + 1e-9).floor() as usize;
        Ok((0..=count).map(|i| min + i as f64 * step).collect())
    }
}

#[derive(Args, Debug)]
struct EvolveArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    run: RunFlags,
}

#[derive(Args, Debug)]
struct SweepTauArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    run: RunFlags,
    #[command(flatten)]
    grid: GridFlags,
}

#[derive(Args, Debug)]
struct SweepAsymArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    run: RunFlags,
    #[command(flatten)]
    grid: GridFlags,
    /// Which interval stays fixed: tau0 or tau1
    #[arg(long, value_name = "WHICH")]
    fixed: String,
    /// Value of the fixed interval
    #[arg(long = "fixed-value", value_name = "ANGLE", value_parser = parse_angle_arg)]
    fixed_value: f64,
}

#[derive(Args, Debug)]
struct SweepSizeArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    run: RunFlags,
    /// Comma-separated site counts, strictly increasing (e.g. 4,6,8,10)
    #[arg(long, value_name = "LIST")]
    sizes: String,
}

#[derive(Args, Debug)]
struct SweepCouplingArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    run: RunFlags,
    /// Comma-separated J values, strictly increasing (e.g. 0.5,1.0,1.5,2.0)
    #[arg(long, value_name = "LIST")]
    couplings: String,
}

#[derive(Args, Debug)]
struct LandscapeArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    run: RunFlags,
}

#[derive(Args, Debug)]
struct EntropyArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    run: RunFlags,
    /// Comma-separated 1-based sites of the subsystem X (default 1)
    #[arg(long, value_name = "LIST")]
    subsystem: Option<String>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Largest system size to validate (grid covers 2..=6; cap 8)
    #[arg(long = "max-sites", default_value_t = 6)]
    max_sites: usize,
    /// Kicks per grid point (default 50)
    #[arg(long, default_value_t = 50)]
    kicks: usize,
    /// Per-amplitude pass tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Write the deviation table as CSV
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Worker threads (default: FQB_WORKERS or all cores)
    #[arg(long)]
    workers: Option<usize>,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            if err.is::<UsageError>() {
                eprintln!("error: {err}");
                2
            } else {
                eprintln!("error: {err:#}");
                1
            }
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Evolve(args) => {
            let cfg = layered(&args.params, &args.run)?;
            let params = resolved_params(&cfg, true)?;
            let series = evolve(&params, cfg.kicks(), &ObservableSet::default())?;
            write_series(&cfg, &series)?;
            Ok(0)
        }
        Command::Entropy(args) => {
            let cfg = layered(&args.params, &args.run)?;
            let params = resolved_params(&cfg, true)?;
            let sites = parse_site_list(args.subsystem.as_deref().unwrap_or("1"))
                .map_err(|e| usage(e.to_string()))?;
            let spec = BipartitionSpec::new(sites, cfg.log_base())
                .and_then(|s| s.validated_for(params.n_sites))
                .map_err(|e| usage(format!("--subsystem: {e}")))?;
            let series = evolve(&params, cfg.kicks(), &ObservableSet::with_entropy(spec))?;
            write_series(&cfg, &series)?;
            Ok(0)
        }
        Command::SweepTau(args) => {
            let cfg = layered(&args.params, &args.run)?;
            let params = resolved_params(&cfg, false)?;
            let grid = args.grid.build()?;
            let sweep = with_workers(cfg.workers(), || sweep_tau(&params, &grid, cfg.kicks()))?;
            write_sweep(&cfg, &sweep)?;
            Ok(0)
        }
        Command::SweepAsym(args) => {
            let cfg = layered(&args.params, &args.run)?;
            let params = resolved_params(&cfg, false)?;
            let fixed = match args.fixed.as_str() {
                "tau0" => FixedInterval::Tau0,
                "tau1" => FixedInterval::Tau1,
                other => {
                    return Err(usage(format!(
                        "--fixed must be tau0 or tau1, got `{other}`"
                    )))
                }
            };
            let grid = args.grid.build()?;
            let sweep = with_workers(cfg.workers(), || {
                sweep_asymmetric(&params, fixed, args.fixed_value, &grid, cfg.kicks())
            })?;
            write_sweep(&cfg, &sweep)?;
            Ok(0)
        }
        Command::SweepSize(args) => {
            let cfg = layered(&args.params, &args.run)?;
            let params = resolved_params(&cfg, true)?;
            let sizes: Vec<usize> = parse_list(&args.sizes, "size in --sizes", str::parse)
                .map_err(|e| usage(e.to_string()))?;
            let sweep = with_workers(cfg.workers(), || sweep_size(&params, &sizes, cfg.kicks()))?;
            write_sweep(&cfg, &sweep)?;
            Ok(0)
        }
        Command::SweepCoupling(args) => {
            let cfg = layered(&args.params, &args.run)?;
            let params = resolved_params(&cfg, true)?;
            let grid: Vec<f64> = parse_list(&args.couplings, "coupling in --couplings", str::parse)
                .map_err(|e| usage(e.to_string()))?;
            let sweep = with_workers(cfg.workers(), || {
                sweep_coupling(&params, &grid, cfg.kicks())
            })?;
            write_sweep(&cfg, &sweep)?;
            Ok(0)
        }
        Command::Landscape(args) => {
            let cfg = layered(&args.params, &args.run)?;
            let n_sites = cfg
                .n_sites
                .ok_or_else(|| usage("missing required flag --n-sites"))?;
            let rows = with_workers(cfg.workers(), || landscape_table(n_sites, cfg.kicks()))?;
            emit(&cfg.out, |w| output::write_landscape_csv(w, n_sites, &rows))?;
            Ok(0)
        }
        Command::Validate(args) => run_validate(args),
    }
}

/// Overlays flags on the optional config file.
fn layered(params: &ParamFlags, run: &RunFlags) -> anyhow::Result<RunConfig> {
    let from_flags = RunConfig {
        n_sites: params.n_sites,
        coupling: params.coupling,
        hx: params.hx,
        hz: params.hz,
        omega: params.omega,
        tau0: params.tau0.map(Angle),
        tau1: params.tau1.map(Angle),
        boundary: params.boundary,
        range: params.range,
        antipodal_halving: if params.antipodal_halving {
            Some(true)
        } else {
            None
        },
        kicks: run.kicks,
        workers: run.workers,
        log_base: run.log_base,
        out: run.out.as_ref().map(|p| p.display().to_string()),
        plot: run.plot.as_ref().map(|p| p.display().to_string()),
    };
    match &run.config {
        Some(path) => Ok(from_flags.layered_over(RunConfig::load(path)?)),
        None => Ok(from_flags),
    }
}

fn resolved_params(cfg: &RunConfig, require_intervals: bool) -> anyhow::Result<ChargerParams> {
    cfg.charger_params(require_intervals)
        .map_err(|e| usage(e.to_string()))
}

fn emit(
    out: &Option<String>,
    write: impl Fn(&mut dyn Write) -> io::Result<()>,
) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot create output file {path}"))?;
            let mut w = BufWriter::new(file);
            write(&mut w).with_context(|| format!("cannot write {path}"))?;
            w.flush().with_context(|| format!("cannot write {path}"))?;
            println!("wrote {path}");
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write(&mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn write_series(cfg: &RunConfig, series: &KickSeries) -> anyhow::Result<()> {
    emit(&cfg.out, |w| output::write_series_csv(w, series))?;
    if let Some(path) = &cfg.plot {
        let mut plots = vec![svg::PlotSeries {
            label: "ΔE".to_string(),
            points: series
                .records
                .iter()
                .map(|r| (r.n as f64, r.delta_e))
                .collect(),
        }];
        if series.records.first().is_some_and(|r| r.entropy.is_some()) {
            let scale = match cfg.log_base() {
                LogBase::Natural => 1.0,
                LogBase::Two => 1.0 / std::f64::consts::LN_2,
            };
            plots.push(svg::PlotSeries {
                label: format!("S_X (log base {})", cfg.log_base()),
                points: series
                    .records
                    .iter()
                    .map(|r| (r.n as f64, r.entropy.unwrap() * scale))
                    .collect(),
            });
        }
        let style = svg::PlotStyle {
            title: series.params.canonical_line(),
            x_label: "n".to_string(),
            y_label: "ΔE".to_string(),
        };
        std::fs::write(path, svg::render_plot(&plots, &style))
            .with_context(|| format!("cannot write {path}"))?;
        println!("wrote {path}");
    }
    Ok(())
}

fn write_sweep(cfg: &RunConfig, sweep: &SweepResult) -> anyhow::Result<()> {
    emit(&cfg.out, |w| output::write_sweep_csv(w, sweep))?;
    if let Some(path) = &cfg.plot {
        let plot = svg::PlotSeries {
            label: String::new(),
            points: sweep
                .points
                .iter()
                .map(|p| (p.value, p.delta_e_max))
                .collect(),
        };
        let style = svg::PlotStyle {
            title: sweep.base_params.canonical_line(),
            x_label: sweep.axis.to_string(),
            y_label: "ΔE_max".to_string(),
        };
        std::fs::write(path, svg::render_plot(&[plot], &style))
            .with_context(|| format!("cannot write {path}"))?;
        println!("wrote {path}");
    }
    Ok(())
}

fn run_validate(args: ValidateArgs) -> anyhow::Result<i32> {
    if args.max_sites > fqb_core::oracle::CROSS_VALIDATE_CAP {
        return Err(usage(format!(
            "--max-sites {} exceeds the dense oracle cap of {}",
            args.max_sites,
            fqb_core::oracle::CROSS_VALIDATE_CAP
        )));
    }
    let points: Vec<ValidationPoint> = validation_grid()
        .into_iter()
        .filter(|p| p.params.n_sites <= args.max_sites)
        .collect();
    if points.is_empty() {
        return Err(usage("--max-sites excludes every grid point"));
    }
    let workers = args
        .workers
        .or_else(|| {
            std::env::var("FQB_WORKERS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    let results: Vec<(ValidationPoint, CrossValidation)> = with_workers(workers, || {
        points
            .into_iter()
            .map(|point| {
                let report = cross_validate(&point.params, args.kicks, args.tol)?;
                Ok((point, report))
            })
            .collect::<anyhow::Result<Vec<_>>>()
    })?;

    let mut failures = 0usize;
    for (point, report) in &results {
        let verdict = if report.pass { "ok  " } else { "FAIL" };
        println!(
            "{verdict} {:<40} max_amp_dev={:.3e} max_energy_dev={:.3e}",
            point.label(),
            report.max_amp_dev,
            report.max_energy_dev
        );
        if !report.pass {
            failures += 1;
        }
    }
    println!(
        "{} of {} grid points within {:.1e} over {} kicks",
        results.len() - failures,
        results.len(),
        args.tol,
        args.kicks
    );
    if let Some(path) = &args.out {
        let file = File::create(path)
            .with_context(|| format!("cannot create output file {}", path.display()))?;
        let mut w = BufWriter::new(file);
        output::write_validation_csv(&mut w, &results)?;
        w.flush()?;
        println!("wrote {}", path.display());
    }
    Ok(if failures == 0 { 0 } else { 1 })
}
