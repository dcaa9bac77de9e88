//! `comfort-opt` command-line front end.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage or configuration error.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use comfort_opt::report::{curve_csv, reduction_csv, reduction_table, sweep_csv};
use comfort_opt::{
    curve, run_scenario, sample_population, sweep, Mode, Overrides, SamplingMode, Scenario,
    SetpointPolicy, System,
};
use serde::{Deserialize, Serialize};

use config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PopulationFlag {
    Stratified,
    Random,
}

#[derive(Parser)]
#[command(name = "comfort-opt", version, about = "Comfort and energy simulator for combined global/individual heating and cooling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario.
    Run(RunArgs),
    /// Run every (mode, system, user count) combination.
    Sweep(SweepArgs),
    /// Sample comfort error and consumption of the combined system over a TDI grid.
    Curve(CurveArgs),
    /// Consumption saved by the combined system relative to the global system alone.
    Reduction(ReductionArgs),
    /// Print the full default configuration.
    Defaults {
        #[arg(long, default_value = "cooling", value_parser = parse_mode)]
        mode: Mode,
    },
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Population seed; falls back to the config, then COMFORT_OPT_SEED
    #[arg(long)]
    seed: Option<u64>,
    /// Population sampling
    #[arg(long, value_enum)]
    population: Option<PopulationFlag>,
    /// Spread of individual comfort offsets
    #[arg(long)]
    sigma: Option<f64>,
    /// Setpoint rule of the global-only system
    #[arg(long, value_enum)]
    baseline_setpoint: Option<BaselineFlag>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BaselineFlag {
    Nearest,
    Center,
    MinEs,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// cooling or heating
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    /// ghcs-only, ihcs-only or combined
    #[arg(long, value_parser = parse_system)]
    system: Option<System>,
    /// Number of occupants
    #[arg(long)]
    users: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Modes, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_mode)]
    mode: Vec<Mode>,
    /// Systems, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_system)]
    systems: Vec<System>,
    /// Occupant counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    users: Vec<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    common: Common,
    /// cooling or heating
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    /// Number of occupants
    #[arg(long)]
    users: Option<usize>,
    /// Grid as lo:hi:step.
    #[arg(long, default_value = "55:85:0.5", value_parser = parse_tdi_range)]
    tdi_range: TdiRange,
}

#[derive(Args)]
struct ReductionArgs {
    #[command(flatten)]
    common: Common,
    /// cooling or heating
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    #[arg(long, value_delimiter = ',')]
    users: Vec<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy)]
struct TdiRange {
    lo: f64,
    hi: f64,
    step: f64,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: comfort_opt::Error| e.to_string())
}

fn parse_system(s: &str) -> Result<System, String> {
    s.parse().map_err(|e: comfort_opt::Error| e.to_string())
}

fn parse_tdi_range(s: &str) -> Result<TdiRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, step] = parts[..] else {
        return Err(format!("expected lo:hi:step, got {s:?}"));
    };
    let num = |v: &str| {
        v.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("{v:?} is not a number"))
    };
    let range = TdiRange {
        lo: num(lo)?,
        hi: num(hi)?,
        step: num(step)?,
    };
    if range.lo >= range.hi {
        return Err(format!("lo must be below hi in {s:?}"));
    }
    if range.step <= 0.0 {
        return Err(format!("step must be positive in {s:?}"));
    }
    Ok(range)
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<comfort_opt::Error> for Failure {
    fn from(e: comfort_opt::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

struct Loaded {
    config: RunConfig,
    overrides: Overrides,
}

fn load(common: &Common) -> Result<Loaded, Failure> {
    let config = match &common.config {
        Some(path) => RunConfig::load(path).map_err(Failure::Usage)?,
        None => RunConfig::default(),
    };
    let mut overrides = config.overrides(common.seed).map_err(Failure::Usage)?;
    let population = overrides.population.get_or_insert_with(Default::default);
    if let Some(p) = common.population {
        population.mode = match p {
            PopulationFlag::Stratified => SamplingMode::Stratified,
            PopulationFlag::Random => SamplingMode::SeededRandom,
        };
    }
    if let Some(sigma) = common.sigma {
        population.sigma = sigma;
    }
    if let Some(b) = common.baseline_setpoint {
        overrides.baseline_policy = Some(match b {
            BaselineFlag::Nearest => SetpointPolicy::Nearest,
            BaselineFlag::Center => SetpointPolicy::Center,
            BaselineFlag::MinEs => SetpointPolicy::MinEs,
        });
    }
    Ok(Loaded { config, overrides })
}

fn validate(scenarios: &[Scenario]) -> Result<(), Failure> {
    for s in scenarios {
        s.validate()
            .map_err(|e| Failure::Usage(format!("invalid configuration: {e}")))?;
        if s.population.sigma <= 0.0 || !s.population.sigma.is_finite() {
            return Err(Failure::Usage(format!(
                "invalid configuration: population sigma must be positive, got {}",
                s.population.sigma
            )));
        }
    }
    Ok(())
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    let res = match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure::Domain(format!("writing output: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("results serialize");
    s.push('\n');
    s
}

fn out_path<'a>(common: &'a Common, config: &'a RunConfig) -> Option<&'a Path> {
    common.out.as_deref().or(config.out.as_deref())
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let Loaded { config, overrides } = load(&args.common)?;
    let mode = args.mode.or(config.mode).unwrap_or(Mode::Cooling);
    let system = args.system.or(config.system).unwrap_or(System::Combined);
    let n = args.users.or(config.n_users).unwrap_or(5);
    let scenario = overrides.scenario(mode, system, n);
    validate(std::slice::from_ref(&scenario))?;
    let result = run_scenario(&scenario)?;
    let text = match args.format.or(config.format).unwrap_or(Format::Json) {
        Format::Json => to_json(&result),
        Format::Csv => sweep_csv(std::slice::from_ref(&result)),
    };
    emit(&text, out_path(&args.common, &config))
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let Loaded { config, overrides } = load(&args.common)?;
    let modes = if args.mode.is_empty() {
        Mode::ALL.to_vec()
    } else {
        args.mode
    };
    let systems = if args.systems.is_empty() {
        System::ALL.to_vec()
    } else {
        args.systems
    };
    let users = if args.users.is_empty() {
        vec![5, 10, 15, 20, 25]
    } else {
        args.users
    };
    let scenarios = comfort_opt::sim::sweep_scenarios(&modes, &systems, &users, &overrides)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    validate(&scenarios)?;
    let results = sweep(&modes, &systems, &users, &overrides)?;
    let text = match args.format.or(config.format).unwrap_or(Format::Csv) {
        Format::Csv => sweep_csv(&results),
        Format::Json => to_json(&results),
    };
    emit(&text, out_path(&args.common, &config))
}

fn cmd_curve(args: CurveArgs) -> Result<(), Failure> {
    let Loaded { config, overrides } = load(&args.common)?;
    let mode = args.mode.or(config.mode).unwrap_or(Mode::Cooling);
    let n = args.users.or(config.n_users).unwrap_or(5);
    let scenario = overrides.scenario(mode, System::Combined, n);
    validate(std::slice::from_ref(&scenario))?;
    let p = scenario.population;
    let pop = sample_population(n, p.mode, p.seed, p.sigma)?;
    let r = args.tdi_range;
    let samples = curve(
        &scenario.energy_model(),
        &pop,
        &scenario.band,
        &scenario.range,
        r.lo,
        r.hi,
        r.step,
    )?;
    emit(&curve_csv(&samples), out_path(&args.common, &config))
}

fn cmd_reduction(args: ReductionArgs) -> Result<(), Failure> {
    let Loaded { config, overrides } = load(&args.common)?;
    let mode = args.mode.or(config.mode).unwrap_or(Mode::Cooling);
    let users = if args.users.is_empty() {
        vec![5, 10, 15, 20, 25]
    } else {
        args.users
    };
    let scenarios = comfort_opt::sim::sweep_scenarios(
        &[mode],
        &[System::GhcsOnly, System::Combined],
        &users,
        &overrides,
    )
    .map_err(|e| Failure::Usage(e.to_string()))?;
    validate(&scenarios)?;
    let rows = reduction_table(mode, &users, &overrides)?;
    let text = match args.format.or(config.format).unwrap_or(Format::Csv) {
        Format::Csv => reduction_csv(&rows),
        Format::Json => to_json(&rows),
    };
    emit(&text, out_path(&args.common, &config))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Curve(a) => cmd_curve(a),
        Command::Reduction(a) => cmd_reduction(a),
        Command::Defaults { mode } => emit(&to_json(&RunConfig::defaults(mode)), None),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
