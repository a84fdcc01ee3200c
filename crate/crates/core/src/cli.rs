//! The `fieldopt` command line.
//!
//! ```text
//! fieldopt simulate --scenario default.toml --seed 7
//! fieldopt optimize --mode analytic --delta 0.05
//! fieldopt sweep-pathogen --set field.width_m=10 --reps 50 --out-dir results
//! ```
//!
//! Every subcommand accepts `--scenario`, repeatable `--set section.key=value`
//! overrides, `--seed` (falling back to `FIELDOPT_SEED`, then the scenario's
//! `run.rng_seed`) and `--jobs`. Exit codes: 0 on success, 1 on usage or
//! validation errors, 2 on I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::epidemic::Simulation;
use crate::error::{Error, Result};
use crate::harness::{self, format_float, EconomicSweepSpec};
use crate::optimizer::{self, OptimizeConfig, ScoreMode, Search};
use crate::scenario::{Scenario, SeedingStrategy};
use crate::worstcase::BoundVariant;

pub const SEED_ENV: &str = "FIELDOPT_SEED";

#[derive(Debug, Parser)]
#[command(name = "fieldopt", version, about = "Plant epidemic simulation and seeding spacing optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one seeded season and print its total profit.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Search for the most profitable (dx, dy) spacing.
    Optimize {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        search: SearchArgs,
        /// Replicates per candidate in simulated mode.
        #[arg(long, default_value_t = optimizer::DEFAULT_REPS)]
        reps: usize,
    },
    /// Mean R0 and cumulative profit for several population sizes on one field.
    Baseline {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = [400usize, 2500, 10_000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        reps: usize,
    },
    /// Replicated runs over a (beta0, gamma) grid with plane fits.
    SweepPathogen {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = [0.001, 0.003, 0.005])]
        beta0: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0 / 65.0, 1.0 / 42.0, 1.0 / 21.0])]
        gamma: Vec<f64>,
        #[arg(long, default_value_t = 50)]
        reps: usize,
    },
    /// Profit under the economic ratio sweeps.
    SweepEcon {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 50)]
        reps: usize,
    },
    /// Default vs optimal spacing on random instances.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 10)]
        reps: usize,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario TOML file; built-in defaults when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Override a scenario value, e.g. `pathogen.beta0=0.004`.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for CSV outputs.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Analytic)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = SearchArg::Grid)]
    search: SearchArg,
    /// Grid step in metres.
    #[arg(long, default_value_t = optimizer::DEFAULT_DELTA_M)]
    delta: f64,
    /// Candidates drawn by the Monte Carlo search.
    #[arg(long, default_value_t = optimizer::DEFAULT_MC_BUDGET)]
    budget: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Analytic,
    Simulated,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SearchArg {
    Grid,
    MonteCarlo,
}

impl SearchArgs {
    fn search(&self) -> Search {
        match self.search {
            SearchArg::Grid => Search::Grid { delta_m: self.delta },
            SearchArg::MonteCarlo => Search::MonteCarlo { budget: self.budget },
        }
    }

    fn mode(&self) -> ScoreMode {
        match self.mode {
            ModeArg::Analytic => ScoreMode::Analytic,
            ModeArg::Simulated => ScoreMode::Simulated,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. The one-line summary goes to `out`, diagnostics to
/// `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return 1;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    let jobs = command_common(&cli.command).jobs;
    let outcome = match jobs {
        Some(0) => Err(Error::invalid("jobs >= 1", 0)),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(Error::invalid("thread pool", e)),
        },
        None => dispatch(&cli.command),
    };
    match outcome {
        Ok(line) => {
            let _ = writeln!(out, "{line}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_io() {
                2
            } else {
                1
            }
        }
    }
}

fn command_common(cmd: &Command) -> &Common {
    match cmd {
        Command::Simulate { common }
        | Command::Optimize { common, .. }
        | Command::Baseline { common, .. }
        | Command::SweepPathogen { common, .. }
        | Command::SweepEcon { common, .. }
        | Command::Compare { common, .. } => common,
    }
}

fn dispatch(cmd: &Command) -> Result<String> {
    match cmd {
        Command::Simulate { common } => {
            let sc = load(common, Scenario::default())?;
            let sim = Simulation::new(&sc)?;
            let result = sim.run()?;
            if let Some(dir) = &common.out_dir {
                write_trajectory(dir, &result)?;
            }
            Ok(format!(
                "total_profit={} plants={} died_early={} mean_r0={}",
                format_float(result.total_profit()),
                result.plant_count,
                result.died_early,
                format_float(result.mean_r0()),
            ))
        }
        Command::Optimize { common, search, reps } => {
            let sc = load(common, Scenario::default())?;
            let config = OptimizeConfig {
                search: search.search(),
                mode: search.mode(),
                n_reps: *reps,
                base_seed: sc.rng_seed,
                bound_variant: BoundVariant::GeometricSum,
                include: Vec::new(),
            };
            let best = optimizer::optimize(&sc, &config)?;
            if let Some(dir) = &common.out_dir {
                write_evaluations(dir, &best.evaluations)?;
            }
            Ok(format!(
                "best dx_m={} dy_m={} profit={} candidates={}",
                format_float(best.best_strategy.dx_m),
                format_float(best.best_strategy.dy_m),
                format_float(best.best_profit),
                best.evaluations.len(),
            ))
        }
        Command::Baseline { common, sizes, reps } => {
            let sc = load(common, harness::desk_scenario())?;
            let spec = harness::BaselineSpec {
                master_seed: sc.rng_seed,
                base: sc,
                sizes: sizes.clone(),
                replicates: *reps,
            };
            let dir = out_dir(common);
            let report = harness::run_baseline(&spec, Some(&dir))?;
            let r0: Vec<String> = report.sizes.iter().map(|s| format_float(s.mean_r0.mean)).collect();
            Ok(format!(
                "wrote {} rows to {} mean_r0=[{}]",
                report.rows.len(),
                dir.join("baseline.csv").display(),
                r0.join(",")
            ))
        }
        Command::SweepPathogen {
            common,
            beta0,
            gamma,
            reps,
        } => {
            let sc = load(common, harness::desk_scenario())?;
            let spec = harness::PathogenSweepSpec {
                master_seed: sc.rng_seed,
                base: sc,
                beta0_values: beta0.clone(),
                gamma_values: gamma.clone(),
                replicates: *reps,
            };
            let dir = out_dir(common);
            let report = harness::run_pathogen_sweep(&spec, Some(&dir))?;
            let coeff = |f: Option<harness::ResponseFit>| {
                f.map(|f| format_float(f.fit.coeff_beta0)).unwrap_or_else(|| "n/a".into())
            };
            Ok(format!(
                "wrote {} cells to {} r0_coeff_beta0={} profit_coeff_beta0={}",
                report.cells.len(),
                dir.display(),
                coeff(report.r0_fit),
                coeff(report.profit_fit),
            ))
        }
        Command::SweepEcon { common, reps } => {
            let sc = load(common, harness::desk_scenario())?;
            let spec = EconomicSweepSpec {
                master_seed: sc.rng_seed,
                base: sc,
                replicates: *reps,
                ..EconomicSweepSpec::default()
            };
            let dir = out_dir(common);
            let rows = harness::run_economic_sweep(&spec, Some(&dir))?;
            Ok(format!("wrote {} rows to {}", rows.len(), dir.join("econ_sweep.csv").display()))
        }
        Command::Compare {
            common,
            search,
            instances,
            reps,
        } => {
            let sc = load(common, harness::desk_scenario())?;
            let spec = harness::ComparisonSpec {
                master_seed: sc.rng_seed,
                default_strategy: sc.strategy,
                base: sc,
                instances: *instances,
                replicates: *reps,
                search: search.search(),
                mode: search.mode(),
                ..harness::ComparisonSpec::default()
            };
            let dir = out_dir(common);
            let output = harness::run_optimal_comparison(&spec, Some(&dir))?;
            let diffs: Vec<String> = output
                .summaries
                .iter()
                .map(|s| format!("{}:{}", s.placement, format_float(s.mean_difference)))
                .collect();
            Ok(format!(
                "wrote {} rows to {} mean_difference=[{}]",
                output.rows.len(),
                dir.join("comparison.csv").display(),
                diffs.join(",")
            ))
        }
    }
}

fn out_dir(common: &Common) -> PathBuf {
    common.out_dir.clone().unwrap_or_else(|| PathBuf::from("results"))
}

/// Base scenario (file or `fallback`), overrides, then the seed.
fn load(common: &Common, fallback: Scenario) -> Result<Scenario> {
    let text = match &common.scenario {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?,
        None => fallback.to_toml_string(),
    };
    let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
    for o in &common.overrides {
        apply_override(&mut table, o)?;
    }
    let mut sc = Scenario::from_table(table)?;
    if let Some(seed) = seed_from(common.seed, std::env::var(SEED_ENV).ok())? {
        sc.rng_seed = seed;
    }
    Ok(sc)
}

fn seed_from(flag: Option<u64>, env: Option<String>) -> Result<Option<u64>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Parse(format!("{SEED_ENV} is not an unsigned integer: {v:?}"))),
        None => Ok(None),
    }
}

/// Applies `section.key=value`; the value is read as a TOML literal, or as
/// a bare string when it is not one.
fn apply_override(table: &mut toml::Table, text: &str) -> Result<()> {
    let (path, raw) = text
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("override {text:?} is not section.key=value")))?;
    let (section, key) = path
        .trim()
        .split_once('.')
        .ok_or_else(|| Error::Parse(format!("override key {path:?} is not section.key")))?;
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let entry = table
        .entry(section.to_string())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    match entry {
        toml::Value::Table(t) => {
            t.insert(key.to_string(), value);
            Ok(())
        }
        _ => Err(Error::Parse(format!("{section} is not a section"))),
    }
}

fn write_trajectory(dir: &Path, result: &crate::epidemic::SimulationResult) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("simulate.csv"))?;
    w.write_record(["t", "s", "i", "r", "n_t", "output", "cumulative_profit", "r0"])?;
    let cumulative = result.economics.cumulative();
    let traj = &result.trajectory;
    for t in 0..traj.len() {
        w.write_record([
            (t + 1).to_string(),
            traj.s_count[t].to_string(),
            traj.i_count[t].to_string(),
            traj.r_count[t].to_string(),
            traj.n_t[t].to_string(),
            format_float(result.economics.per_round_output[t]),
            format_float(cumulative[t]),
            result.r0.r0_t.get(t).map(|&r| format_float(r)).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_evaluations(dir: &Path, evaluations: &[optimizer::Evaluation]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("optimize.csv"))?;
    w.write_record(["dx_m", "dy_m", "profit", "profit_std", "n_reps"])?;
    for e in evaluations {
        let SeedingStrategy { dx_m, dy_m } = e.strategy;
        w.write_record([
            format_float(dx_m),
            format_float(dy_m),
            format_float(e.profit_estimate),
            format_float(e.profit_std),
            e.n_reps.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
