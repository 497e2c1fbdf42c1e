//! Command-line front end: smooth CSV series, search for weights, analyze
//! smoothing kernels.
//!
//! Results go to files or standard output only; diagnostics go to standard
//! error, filtered by SMOOTH_LOG (error, info, debug). Every file-writing
//! run drops a `<output>.manifest.json` next to its outputs recording the
//! resolved configuration; the manifest's elapsed time is the only field
//! that varies between identical runs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use serde::Serialize;

use arsmooth::design::{default_half_width, design_search, DesignConfig, DesignMode};
use arsmooth::io::{format_sample, read_signal_csv, read_weights_json, signal_to_csv};
use arsmooth::smoother::decompose;
use arsmooth::spectral::{deconvolve, ARKernel};
use arsmooth::verify::solve_dense;
use arsmooth::window::{OffCenterWindow, TaperedWindow, Theta};
use arsmooth::SmoothError;

/// Verification gate: the FFT route must sit this close to the dense
/// oracle, relative to the solution scale.
const VERIFY_TOLERANCE: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "arsmooth",
    version,
    about = "Auto-regressive moving-mean smoothing of circular series",
    propagate_version = true
)]
struct Cli {
    /// Seed for synthetic-data helpers; recorded in the manifest.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Smooth a CSV series under explicit or uniform weights.
    Smooth(SmoothArgs),
    /// Search for weights under a half-width budget and smooth with them.
    Design(DesignArgs),
    /// Report a weight pair's kernel spectrum, effective window, and decay
    /// root.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("weight_source").required(true).args(["weights", "uniform"])))]
struct SmoothArgs {
    /// Input CSV: one sample per line, or "index,value" rows.
    #[arg(long)]
    input: PathBuf,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Weights JSON: {"alpha": [...], "beta": [...]} or
    /// {"p": [...], "q": [...], "A": mass}.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Use uniform windows of half-width M for both weight vectors.
    #[arg(long, value_name = "M")]
    uniform: Option<usize>,
    /// Data mass A paired with --uniform; the smoothness mass is 1 - A.
    #[arg(long, default_value_t = 0.3333333333)]
    a: f64,
    /// Cross-check the result against the dense solver (series length
    /// up to 512) and fail when they disagree.
    #[arg(long)]
    verify: bool,
    /// Also write plot-ready "<output>.y.dat", "<output>.ybar.dat", and
    /// "<output>.xstar.dat" files with "index value" rows.
    #[arg(long, requires = "output")]
    emit_plot: bool,
}

#[derive(Args)]
struct DesignArgs {
    /// Input CSV series.
    #[arg(long)]
    input: PathBuf,
    /// Output CSV path for the smoothed series; the report goes to
    /// "<output>.report.json". Without it the report goes to standard
    /// output and no series is written.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Vertex family to search.
    #[arg(long, value_enum, default_value_t = ModeArg::Joint)]
    mode: ModeArg,
    /// Half-width budget L; defaults to max(1, floor(log2 N)).
    #[arg(long = "max-halfwidth", value_name = "L")]
    max_halfwidth: Option<usize>,
    /// Data mass A held fixed during the search.
    #[arg(long, default_value_t = 0.3333333333)]
    a: f64,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Weights JSON describing the kernel to analyze.
    #[arg(long)]
    weights: PathBuf,
    /// Series length the spectrum and effective window are computed for.
    #[arg(long)]
    n: usize,
    /// Output JSON path; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write "<output>.u.dat" with "offset value" rows of the
    /// effective window, centered for log-scale tail plots.
    #[arg(long, requires = "output")]
    emit_plot: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Joint,
    Tied,
    Cascade,
}

impl From<ModeArg> for DesignMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Joint => DesignMode::Joint,
            ModeArg::Tied => DesignMode::Tied,
            ModeArg::Cascade => DesignMode::Cascade,
        }
    }
}

enum Failure {
    Io(String),
    Validation(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 2,
            Failure::Validation(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Validation(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<SmoothError> for Failure {
    fn from(e: SmoothError) -> Self {
        match e {
            SmoothError::Io(_) => Failure::Io(e.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

/// What a run writes next to its primary output.
#[derive(Serialize)]
struct RunManifest {
    command: &'static str,
    inputs: Vec<String>,
    config: serde_json::Value,
    outputs: Vec<String>,
    elapsed_ms: u128,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify_max_relative_deviation: Option<f64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("SMOOTH_LOG", "error"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    if let Some(seed) = cli.seed {
        debug!("seed {seed} recorded; no synthetic-data helper consumes it yet");
    }
    let result = match cli.command {
        Command::Smooth(ref args) => cmd_smooth(args, cli.seed),
        Command::Design(ref args) => cmd_design(args, cli.seed),
        Command::Analyze(ref args) => cmd_analyze(args, cli.seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            log::error!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let mut os = path.as_os_str().to_os_string();
    os.push(suffix);
    PathBuf::from(os)
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("writing {}: {e}", path.display())))
}

/// Two-column "index value" rows, one per sample.
fn indexed_rows(values: &[f64]) -> String {
    let mut out = String::new();
    for (i, &v) in values.iter().enumerate() {
        out.push_str(&format!("{i} {}\n", format_sample(v)));
    }
    out
}

fn write_manifest(primary_output: &Path, manifest: &RunManifest) -> Result<(), Failure> {
    let path = suffixed(primary_output, ".manifest.json");
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    write_text(&path, &(text + "\n"))
}

/// Resolves --weights / --uniform M --a A into a weight pair. Uniform mode
/// pairs a uniform tapered window with a uniform off-center window of the
/// same half-width, the design module's vertex convention; M = 0 degrades
/// to the identity smoother.
fn resolve_theta(args: &SmoothArgs, n: usize) -> Result<Theta, Failure> {
    if let Some(path) = &args.weights {
        let theta = read_weights_json(path)?;
        debug!(
            "weights from {}: A {:.6}, B {:.6}, half-width {}",
            path.display(),
            theta.a_mass(),
            theta.b_mass(),
            theta.half_width()
        );
        return Ok(theta);
    }
    let m = args.uniform.expect("clap guarantees a weight source");
    let a = args.a;
    if !(a.is_finite() && a > 0.0 && a <= 1.0) {
        return Err(Failure::Validation(format!(
            "--a must lie in (0, 1], got {a}"
        )));
    }
    let p = TaperedWindow::uniform(m, n)?;
    let theta = if m == 0 {
        info!("--uniform 0 is the identity smoother");
        Theta::from_masses(a, &p, 0.0, &OffCenterWindow::uniform(1, n.max(3))?)?
    } else {
        Theta::from_masses(a, &p, 1.0 - a, &OffCenterWindow::uniform(m, n)?)?
    };
    Ok(theta)
}

fn cmd_smooth(args: &SmoothArgs, seed: Option<u64>) -> Result<(), Failure> {
    let started = Instant::now();
    let y = read_signal_csv(&args.input)?;
    info!("read {} samples from {}", y.len(), args.input.display());
    let theta = resolve_theta(args, y.len())?;

    let d = decompose(&y, &theta)?;
    let kernel = ARKernel::from_theta(&theta)?;
    let x = deconvolve(&d.y_bar, &kernel)?;

    let mut deviation = None;
    if args.verify {
        let dense = solve_dense(&d.y_bar, &kernel)?;
        let diff = x
            .values()
            .iter()
            .zip(dense.values())
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
        let rel = diff / (1.0 + dense.max_abs());
        eprintln!("verify: max relative deviation {rel:.3e} (tolerance {VERIFY_TOLERANCE:.0e})");
        if rel > VERIFY_TOLERANCE {
            return Err(Failure::Verification(format!(
                "FFT solution deviates from the dense solver by {rel:.3e} (> {VERIFY_TOLERANCE:.0e})"
            )));
        }
        deviation = Some(rel);
    }

    let csv = signal_to_csv(&x);
    match &args.output {
        None => print!("{csv}"),
        Some(path) => {
            write_text(path, &csv)?;
            let mut outputs = vec![path.display().to_string()];
            if args.emit_plot {
                for (suffix, series) in [
                    (".y.dat", y.values()),
                    (".ybar.dat", d.y_bar.values()),
                    (".xstar.dat", x.values()),
                ] {
                    let plot_path = suffixed(path, suffix);
                    write_text(&plot_path, &indexed_rows(series))?;
                    outputs.push(plot_path.display().to_string());
                }
            }
            let manifest = RunManifest {
                command: "smooth",
                inputs: vec![args.input.display().to_string()],
                config: serde_json::json!({
                    "weights": args.weights.as_ref().map(|p| p.display().to_string()),
                    "uniform": args.uniform,
                    "a": args.a,
                    "verify": args.verify,
                    "emit_plot": args.emit_plot,
                    "n": y.len(),
                }),
                outputs,
                elapsed_ms: started.elapsed().as_millis(),
                version: env!("CARGO_PKG_VERSION"),
                seed,
                verify_max_relative_deviation: deviation,
            };
            write_manifest(path, &manifest)?;
        }
    }
    Ok(())
}

fn cmd_design(args: &DesignArgs, seed: Option<u64>) -> Result<(), Failure> {
    let started = Instant::now();
    let y = read_signal_csv(&args.input)?;
    let l = args
        .max_halfwidth
        .unwrap_or_else(|| default_half_width(y.len()));
    let cfg = DesignConfig::new(l, args.a, args.mode.into())?;
    info!(
        "searching {:?} vertices with L {} over {} samples",
        cfg.mode,
        l,
        y.len()
    );
    let report = design_search(&y, &cfg)?;
    info!(
        "best vertex J {:.6e} in {:?}",
        report.best_j, report.elapsed
    );
    let report_json =
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n";

    match &args.output {
        None => print!("{report_json}"),
        Some(path) => {
            let x = arsmooth::ar_smooth(&y, &report.best_theta)?;
            write_text(path, &signal_to_csv(&x))?;
            let report_path = suffixed(path, ".report.json");
            write_text(&report_path, &report_json)?;
            let manifest = RunManifest {
                command: "design",
                inputs: vec![args.input.display().to_string()],
                config: serde_json::json!({
                    "mode": report.mode,
                    "max_half_width": l,
                    "a": args.a,
                    "n": y.len(),
                }),
                outputs: vec![
                    path.display().to_string(),
                    report_path.display().to_string(),
                ],
                elapsed_ms: started.elapsed().as_millis(),
                version: env!("CARGO_PKG_VERSION"),
                seed,
                verify_max_relative_deviation: None,
            };
            write_manifest(path, &manifest)?;
        }
    }
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs, seed: Option<u64>) -> Result<(), Failure> {
    let started = Instant::now();
    if args.n < 3 {
        return Err(Failure::Validation(format!(
            "series length must be at least 3, got {}",
            args.n
        )));
    }
    let theta = read_weights_json(&args.weights)?;
    let kernel = ARKernel::from_theta(&theta)?;
    let report = kernel.effective_window(args.n)?;
    match report.r_star {
        Some(r) => info!("decay root r* {r:.12}"),
        None => info!("no smoothing term: the effective window is the delta, no decay root"),
    }
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";

    match &args.output {
        None => print!("{json}"),
        Some(path) => {
            write_text(path, &json)?;
            let mut outputs = vec![path.display().to_string()];
            if args.emit_plot {
                let n = args.n as i64;
                let mut rows = String::new();
                for k in -(n / 2)..=(n - 1) / 2 {
                    let j = k.rem_euclid(n) as usize;
                    rows.push_str(&format!("{k} {}\n", format_sample(report.u[j])));
                }
                let plot_path = suffixed(path, ".u.dat");
                write_text(&plot_path, &rows)?;
                outputs.push(plot_path.display().to_string());
            }
            let manifest = RunManifest {
                command: "analyze",
                inputs: vec![args.weights.display().to_string()],
                config: serde_json::json!({
                    "n": args.n,
                    "emit_plot": args.emit_plot,
                }),
                outputs,
                elapsed_ms: started.elapsed().as_millis(),
                version: env!("CARGO_PKG_VERSION"),
                seed,
                verify_max_relative_deviation: None,
            };
            write_manifest(path, &manifest)?;
        }
    }
    Ok(())
}
