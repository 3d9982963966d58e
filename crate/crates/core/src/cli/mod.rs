//! The `stlplan plan` command: load a mission file, plan, and write
//! `trajectory.csv`, `report.json` and optionally `trajectory.svg`.

pub mod export;
pub mod mission_file;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::planner::{plan, validate_plan, validate_trace, PlanStatus, TemperatureSchedule, ValidationReport};
use crate::robustness::{smooth_robustness, Temperature};
use export::{read_csv, svg, write_csv};
use mission_file::{load_mission, LoadedMission};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_SATISFIED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "stlplan", version, about = "Plan multi-drone trajectories from STL mission files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plan a mission and write the trajectory and a validation report.
    Plan(PlanArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PlanArgs {
    /// TOML mission file.
    pub mission: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Fixed smoothing temperature, used for optimization and reporting.
    #[arg(long)]
    pub temperature: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Also write trajectory.svg.
    #[arg(long)]
    pub plot: bool,
    /// Validate an existing trajectory CSV instead of planning.
    #[arg(long, value_name = "CSV")]
    pub validate_only: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Report<'a> {
    status: Option<PlanStatus>,
    robustness: f64,
    smooth_robustness: f64,
    temperature: f64,
    epsilon: f64,
    seed: u64,
    restarts_used: usize,
    iterations: usize,
    wall_time_s: f64,
    validation: &'a ValidationReport,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    main_with_io(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// [`main_with_args`] with explicit output streams.
pub fn main_with_io<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(Cli { command: Command::Plan(a) }) => run(&a, out, err),
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{e}");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = write!(out, "{e}");
            EXIT_SUCCESS
        }
    }
}

/// Runs `plan` with already parsed arguments.
pub fn run(args: &PlanArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match try_run(args, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

type BoxError = Box<dyn std::error::Error>;

fn apply_overrides(loaded: LoadedMission, args: &PlanArgs) -> Result<LoadedMission, BoxError> {
    let LoadedMission { mut spec, mut config } = loaded;
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(r) = args.restarts {
        config.restarts = r;
    }
    if let Some(m) = args.max_iters {
        config.max_iterations = m;
    }
    if let Some(k) = args.temperature {
        let k = Temperature::new(k)?;
        config.temperature = TemperatureSchedule::Fixed(k);
        config.report_temperature = k;
    }
    if let Some(e) = args.epsilon {
        spec = spec.with_epsilon(e)?;
    }
    Ok(LoadedMission { spec, config })
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, BoxError> {
    let path = dir.join(name);
    let f = File::create(&path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn try_run(args: &PlanArgs, out: &mut dyn Write) -> Result<i32, BoxError> {
    let started = Instant::now();
    let LoadedMission { spec, config } = apply_overrides(load_mission(&args.mission)?, args)?;
    std::fs::create_dir_all(&args.out).map_err(|e| format!("cannot create {}: {e}", args.out.display()))?;
    let names = spec.agent_names();

    if let Some(csv_path) = &args.validate_only {
        let file = File::open(csv_path).map_err(|e| format!("cannot read {}: {e}", csv_path.display()))?;
        let trace = read_csv(std::io::BufReader::new(file), &spec)?;
        let validation = validate_trace(&trace, &spec)?;
        let smooth = smooth_robustness(spec.resolved_formula(), &trace, 0, config.report_temperature)?;
        let report = Report {
            status: None,
            robustness: validation.robustness,
            smooth_robustness: smooth,
            temperature: config.report_temperature.value(),
            epsilon: spec.epsilon(),
            seed: config.seed,
            restarts_used: 0,
            iterations: 0,
            wall_time_s: started.elapsed().as_secs_f64(),
            validation: &validation,
        };
        write_report(&args.out, &report)?;
        writeln!(out, "validated {}: {}", csv_path.display(), if validation.success { "satisfied" } else { "not satisfied" })?;
        writeln!(out, "exact robustness: {}", validation.robustness)?;
        writeln!(out, "smooth robustness (k = {}): {smooth}", report.temperature)?;
        return Ok(if validation.success { EXIT_SUCCESS } else { EXIT_NOT_SATISFIED });
    }

    let result = plan(&spec, &config)?;
    let validation = validate_plan(&result, &spec)?;
    let mut csv = create(&args.out, "trajectory.csv")?;
    write_csv(&result.trace, &names, &mut csv)?;
    csv.flush()?;
    if args.plot {
        let mut f = create(&args.out, "trajectory.svg")?;
        f.write_all(svg(&result.trace, spec.environment(), &names).as_bytes())?;
        f.flush()?;
    }
    let report = Report {
        status: Some(result.status),
        robustness: result.robustness,
        smooth_robustness: result.smooth_robustness,
        temperature: result.report_temperature.value(),
        epsilon: spec.epsilon(),
        seed: config.seed,
        restarts_used: result.diagnostics.restarts_run(),
        iterations: result.diagnostics.total_iterations(),
        wall_time_s: started.elapsed().as_secs_f64(),
        validation: &validation,
    };
    write_report(&args.out, &report)?;

    writeln!(out, "status: {:?}", result.status)?;
    writeln!(out, "exact robustness: {}", result.robustness)?;
    writeln!(out, "smooth robustness (k = {}): {}", report.temperature, result.smooth_robustness)?;
    writeln!(out, "wall time: {:.3} s", report.wall_time_s)?;
    writeln!(out, "restarts used: {}", report.restarts_used)?;
    Ok(if result.status == PlanStatus::Success { EXIT_SUCCESS } else { EXIT_NOT_SATISFIED })
}

fn write_report(dir: &Path, report: &Report) -> Result<(), BoxError> {
    let mut f = create(dir, "report.json")?;
    serde_json::to_writer_pretty(&mut f, report)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}
