//! `dcca` command line: generate ARFIMA pairs, estimate the DCCA
//! coefficient, run Monte Carlo sweeps and render charts.
//!
//! Exit codes: 0 success, 1 runtime or data failure, 2 usage error.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use dcca::{
    arfima_pair, pearson, read_csv, render_charts, rho_dcca, run_grid, write_csv, ArfimaParams,
    BoxMode, Estimator, GridSpec, ScaleSpec,
};

#[derive(Parser)]
#[command(name = "dcca", version, about = "DCCA cross-correlation coefficient toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Base random seed for `gen` and `mc`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for the Monte Carlo sweep (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Suppress the progress counter and summaries.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one ARFIMA(0,d,0) pair with correlated innovations as a
    /// two-column CSV.
    Gen {
        /// Series length.
        #[arg(long = "T")]
        t: usize,
        /// Fractional differencing order of x, in (-0.5, 1.5].
        #[arg(long, allow_hyphen_values = true)]
        d1: f64,
        /// Fractional differencing order of y, in (-0.5, 1.5].
        #[arg(long, allow_hyphen_values = true)]
        d2: f64,
        /// Innovation correlation, in [-1, 1].
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },

    /// Estimate the DCCA coefficient of an `x,y` CSV at one or more scales.
    Dcca {
        /// Input CSV with header `x,y`.
        #[arg(long)]
        input: PathBuf,
        /// Absolute scales, comma separated (e.g. `10,20`).
        #[arg(long, value_delimiter = ',')]
        scales: Vec<usize>,
        /// T-relative scales, comma separated (e.g. `1/100,1/5`).
        #[arg(long = "scale-fracs", value_delimiter = ',')]
        scale_fracs: Vec<String>,
        /// Box layout.
        #[arg(long, value_enum, default_value_t = Mode::NonOverlapping)]
        mode: Mode,
        /// Also print Pearson's correlation of the raw series.
        #[arg(long)]
        pearson: bool,
    },

    /// Run the Monte Carlo grid and write the aggregate CSV.
    Mc {
        /// Replications per grid cell.
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        /// Series lengths.
        #[arg(long = "T-list", value_delimiter = ',', default_value = "1000,5000")]
        t_list: Vec<usize>,
        /// Fractional differencing orders (d1 = d2 = d).
        #[arg(long = "d-list", value_delimiter = ',', default_value = "0.1,0.4,0.6,0.9,1.1,1.4")]
        d_list: Vec<f64>,
        /// True innovation correlations.
        #[arg(
            long = "rho-list",
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "-0.9,-0.8,-0.7,-0.6,-0.5,-0.4,-0.3,-0.2,-0.1,0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"
        )]
        rho_list: Vec<f64>,
        /// T-relative scales; every fraction must yield an integer >= 4 for
        /// every T.
        #[arg(long = "scale-fracs", value_delimiter = ',', default_value = "1/100,1/50,1/10,1/5")]
        scale_fracs: Vec<String>,
        /// Extra absolute scales.
        #[arg(long, value_delimiter = ',')]
        scales: Vec<usize>,
        /// Estimators to evaluate.
        #[arg(long, value_delimiter = ',', default_value = "dcca,pearson")]
        estimators: Vec<String>,
        /// Output CSV path.
        #[arg(long, default_value = "aggregate.csv")]
        out: PathBuf,
    },

    /// Render SVG charts from an aggregate CSV.
    Plot {
        /// Aggregate CSV produced by `mc`.
        #[arg(long)]
        input: PathBuf,
        /// Directory for the SVG files (created if missing).
        #[arg(long = "out-dir", default_value = "charts")]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Overlapping,
    NonOverlapping,
}

impl From<Mode> for BoxMode {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Overlapping => BoxMode::Overlapping,
            Mode::NonOverlapping => BoxMode::NonOverlapping,
        }
    }
}

// Failures carry the exit code they map to: 1 for runtime/data problems,
// 2 for bad flag combinations discovered after clap parsing.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn usage(err: impl std::fmt::Display) -> Self {
        Failure::Usage(err.to_string())
    }

    fn runtime(err: impl std::fmt::Display) -> Self {
        Failure::Runtime(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            eprintln!("run with --help for usage");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { t, d1, d2, rho, ref out } => {
            cmd_gen(t, d1, d2, rho, cli.seed, out)
        }
        Command::Dcca { ref input, ref scales, ref scale_fracs, mode, pearson } => {
            cmd_dcca(input, scales, scale_fracs, mode.into(), pearson)
        }
        Command::Mc {
            reps,
            ref t_list,
            ref d_list,
            ref rho_list,
            ref scale_fracs,
            ref scales,
            ref estimators,
            ref out,
        } => cmd_mc(
            reps, t_list, d_list, rho_list, scale_fracs, scales, estimators, out, cli.seed,
            cli.threads, cli.quiet,
        ),
        Command::Plot { ref input, ref out_dir } => cmd_plot(input, out_dir),
    }
}

fn cmd_gen(t: usize, d1: f64, d2: f64, rho: f64, seed: u64, out: &Path) -> Result<(), Failure> {
    let params = ArfimaParams::new(d1, d2, rho, t, seed).map_err(Failure::usage)?;
    let pair = arfima_pair(&params).map_err(Failure::runtime)?;
    let mut text = String::with_capacity(24 * t + 4);
    text.push_str("x,y\n");
    for (x, y) in pair.x.iter().zip(&pair.y) {
        // shortest round-trip float formatting keeps the pipeline lossless
        let _ = writeln!(text, "{x},{y}");
    }
    fs::write(out, text).map_err(|e| Failure::runtime(format!("cannot write {}: {e}", out.display())))?;
    Ok(())
}

fn parse_scale_specs(scales: &[usize], scale_fracs: &[String]) -> Result<Vec<ScaleSpec>, Failure> {
    let mut specs: Vec<ScaleSpec> = scales.iter().map(|&s| ScaleSpec::Absolute(s)).collect();
    for raw in scale_fracs {
        specs.push(raw.parse().map_err(Failure::usage)?);
    }
    Ok(specs)
}

fn cmd_dcca(
    input: &Path,
    scales: &[usize],
    scale_fracs: &[String],
    mode: BoxMode,
    with_pearson: bool,
) -> Result<(), Failure> {
    let specs = parse_scale_specs(scales, scale_fracs)?;
    if specs.is_empty() {
        return Err(Failure::Usage("provide at least one scale via --scales or --scale-fracs".into()));
    }
    let (x, y) = read_pair_csv(input).map_err(Failure::Runtime)?;

    let mut resolved = Vec::with_capacity(specs.len());
    for spec in specs {
        resolved.push(spec.resolve(x.len()).map_err(Failure::usage)?);
    }
    resolved.sort_unstable();
    resolved.dedup();

    let mut stdout = std::io::stdout().lock();
    let emit = |stdout: &mut std::io::StdoutLock<'_>, line: String| {
        writeln!(stdout, "{line}").map_err(Failure::runtime)
    };
    emit(&mut stdout, "s,rho_dcca".into())?;
    for s in resolved {
        let rho = rho_dcca(&x, &y, s, mode).map_err(Failure::runtime)?;
        emit(&mut stdout, format!("{s},{rho:.6}"))?;
    }
    if with_pearson {
        let r = pearson(&x, &y).map_err(Failure::runtime)?;
        emit(&mut stdout, format!("pearson,{r:.6}"))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_mc(
    reps: usize,
    t_list: &[usize],
    d_list: &[f64],
    rho_list: &[f64],
    scale_fracs: &[String],
    scales: &[usize],
    estimators: &[String],
    out: &Path,
    seed: u64,
    threads: Option<usize>,
    quiet: bool,
) -> Result<(), Failure> {
    let estimators = estimators
        .iter()
        .map(|raw| raw.parse::<Estimator>())
        .collect::<dcca::Result<Vec<_>>>()
        .map_err(Failure::usage)?;
    let spec = GridSpec {
        d_values: d_list.to_vec(),
        rho_values: rho_list.to_vec(),
        t_values: t_list.to_vec(),
        scales: parse_scale_specs(scales, scale_fracs)?,
        reps,
        base_seed: seed,
        estimators,
    };
    spec.validate().map_err(Failure::usage)?;

    let started = Instant::now();
    let mut progress = |done: usize, total: usize| {
        if !quiet {
            eprintln!("cell {done}/{total}");
        }
    };
    let result = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(Failure::runtime)?
            .install(|| run_grid(&spec, &mut progress)),
        None => run_grid(&spec, &mut progress),
    }
    .map_err(Failure::runtime)?;

    if !result.rows.is_empty() {
        let mut file = fs::File::create(out)
            .map_err(|e| Failure::runtime(format!("cannot create {}: {e}", out.display())))?;
        write_csv(&result.rows, &mut file).map_err(Failure::runtime)?;
    }

    let cells = d_list.len() * rho_list.len() * t_list.len();
    if !quiet {
        println!(
            "wrote {} rows ({} cells x {} reps) to {} in {:.1}s",
            result.rows.len(),
            cells,
            reps,
            out.display(),
            started.elapsed().as_secs_f64()
        );
    }

    if !result.cell_errors.is_empty() {
        let sidecar = sidecar_path(out);
        let mut text = String::new();
        for err in &result.cell_errors {
            let _ = writeln!(text, "{err}");
        }
        fs::write(&sidecar, text)
            .map_err(|e| Failure::runtime(format!("cannot write {}: {e}", sidecar.display())))?;
        return Err(Failure::Runtime(format!(
            "{} cell(s) aborted; details in {}",
            result.cell_errors.len(),
            sidecar.display()
        )));
    }
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".errors.txt");
    out.with_file_name(name)
}

fn cmd_plot(input: &Path, out_dir: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(input)
        .map_err(|e| Failure::runtime(format!("cannot read {}: {e}", input.display())))?;
    let rows = read_csv(&text).map_err(Failure::runtime)?;
    if rows.is_empty() {
        return Err(Failure::Runtime(format!("{}: no data rows", input.display())));
    }
    let output = render_charts(&rows, out_dir).map_err(Failure::runtime)?;
    for warning in &output.warnings {
        eprintln!("warning: {warning}");
    }
    let mut stdout = std::io::stdout().lock();
    for file in &output.files {
        writeln!(stdout, "{}", file.display()).map_err(Failure::runtime)?;
    }
    Ok(())
}

// Reads the two-column `x,y` CSV written by `gen`. Error strings name the
// offending line.
fn read_pair_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "x,y")) => {}
        Some((_, other)) => {
            return Err(format!("{}: line 1: expected header \"x,y\", found {other:?}", path.display()))
        }
        None => return Err(format!("{}: empty file", path.display())),
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (idx, raw) in lines {
        if raw.is_empty() {
            continue;
        }
        let line = idx + 1;
        let (left, right) = raw
            .split_once(',')
            .ok_or_else(|| format!("{}: line {line}: expected two comma-separated values", path.display()))?;
        let parse = |field: &str| -> Result<f64, String> {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| format!("{}: line {line}: cannot parse {field:?}", path.display()))?;
            if !v.is_finite() {
                return Err(format!("{}: line {line}: non-finite value {field:?}", path.display()));
            }
            Ok(v)
        };
        x.push(parse(left)?);
        y.push(parse(right)?);
    }
    if x.is_empty() {
        return Err(format!("{}: no data rows", path.display()));
    }
    Ok((x, y))
}
