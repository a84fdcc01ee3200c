//! Replicated experiments and their CSV outputs.
//!
//! Four experiment designs are provided: population size at fixed field
//! size ([`run_baseline`]), a (beta0, gamma) grid with plane fits
//! ([`run_pathogen_sweep`]), economic ratio sweeps ([`run_economic_sweep`])
//! and default-vs-optimal spacing on random instances
//! ([`run_optimal_comparison`]).
//!
//! Replicate `i` of every cell uses `derive_seed(master_seed, 0, i)`, so all
//! cells of a sweep share their random streams (common random numbers).
//! Floats are written with 9 significant digits.

use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;

use crate::analytics::{self, MeanStd, SensitivityFit};
use crate::economics;
use crate::epidemic::{Simulation, SimulationResult};
use crate::error::{Error, Result};
use crate::field;
use crate::optimizer::{self, OptimizeConfig, ScoreMode, Search};
use crate::scenario::{EconomicParams, FieldSpec, Scenario, SeedingStrategy};
use crate::seed::{derive_seed, rng_from_seed};
use crate::worstcase::{self, BoundVariant};

/// Formats like C's `%.9g`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn replicate_seed(master: u64, i: usize) -> u64 {
    derive_seed(master, 0, i as u64)
}

fn run_replicates(scenario: &Scenario, replicates: usize, master_seed: u64) -> Result<Vec<SimulationResult>> {
    let sim = Simulation::new(scenario)?;
    (0..replicates)
        .into_par_iter()
        .map(|i| sim.run_with_seed(replicate_seed(master_seed, i)))
        .collect()
}

fn require_replicates(n: usize) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::invalid("replicates >= 1", n))
    }
}

fn require_non_empty<T>(v: &[T], invariant: &'static str) -> Result<()> {
    if v.is_empty() {
        Err(Error::invalid(invariant, "empty list"))
    } else {
        Ok(())
    }
}

/// A 10 m x 10 m field with the reference pathogen and economics.
pub fn desk_scenario() -> Scenario {
    Scenario {
        field: FieldSpec::new(10.0, 10.0, 0.1),
        ..Scenario::default()
    }
}

// ---------------------------------------------------------------- baseline

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineSpec {
    /// Field, pathogen and economics; the spacing is derived per size.
    pub base: Scenario,
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub master_seed: u64,
}

impl Default for BaselineSpec {
    fn default() -> Self {
        Self {
            base: desk_scenario(),
            sizes: vec![400, 2500, 10_000],
            replicates: 50,
            master_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineRow {
    pub t: usize,
    pub size_label: String,
    /// Undefined in the last round.
    pub mean_r0: Option<f64>,
    pub std_r0: Option<f64>,
    /// Cumulative profit up to round `t`.
    pub mean_profit: f64,
    pub std_profit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeSummary {
    pub size: usize,
    pub spacing: SeedingStrategy,
    pub mean_r0: MeanStd,
    pub total_profit: MeanStd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineReport {
    pub rows: Vec<BaselineRow>,
    pub sizes: Vec<SizeSummary>,
}

pub const BASELINE_HEADER: [&str; 6] = ["t", "size_label", "mean_r0", "std_r0", "mean_profit", "std_profit"];

/// Same field, different population sizes; spacing from
/// [`field::spacing_from_count`].
pub fn run_baseline(spec: &BaselineSpec, out_dir: Option<&Path>) -> Result<BaselineReport> {
    require_non_empty(&spec.sizes, "sizes non-empty")?;
    require_replicates(spec.replicates)?;
    let mut rows = Vec::new();
    let mut sizes = Vec::new();
    for &n in &spec.sizes {
        let spacing = field::spacing_from_count(&spec.base.field, n)?;
        let sc = Scenario {
            strategy: spacing,
            explicit_count: Some(n),
            ..spec.base.clone()
        };
        let results = run_replicates(&sc, spec.replicates, spec.master_seed)?;
        let label = n.to_string();
        for t in 0..sc.horizon_steps {
            let r0 = (t + 1 < sc.horizon_steps).then(|| {
                MeanStd::from_samples(&results.iter().map(|r| r.r0.r0_t[t]).collect::<Vec<_>>())
            });
            let profit = MeanStd::from_samples(
                &results.iter().map(|r| r.economics.cumulative()[t]).collect::<Vec<_>>(),
            );
            rows.push(BaselineRow {
                t: t + 1,
                size_label: label.clone(),
                mean_r0: r0.map(|s| s.mean),
                std_r0: r0.map(|s| s.std),
                mean_profit: profit.mean,
                std_profit: profit.std,
            });
        }
        let summary = analytics::summarize_replicates(&results);
        sizes.push(SizeSummary {
            size: n,
            spacing,
            mean_r0: summary.mean_r0,
            total_profit: summary.total_profit,
        });
    }

    if let Some(dir) = out_dir {
        let csv_rows: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.t.to_string(),
                    r.size_label.clone(),
                    opt_float(r.mean_r0),
                    opt_float(r.std_r0),
                    format_float(r.mean_profit),
                    format_float(r.std_profit),
                ]
            })
            .collect();
        write_csv(&dir.join("baseline.csv"), &BASELINE_HEADER, &csv_rows)?;
    }
    Ok(BaselineReport { rows, sizes })
}

// ---------------------------------------------------------- pathogen sweep

#[derive(Debug, Clone, PartialEq)]
pub struct PathogenSweepSpec {
    /// Its pathogen is the baseline cell and must appear in the grid.
    pub base: Scenario,
    pub beta0_values: Vec<f64>,
    pub gamma_values: Vec<f64>,
    pub replicates: usize,
    pub master_seed: u64,
}

impl Default for PathogenSweepSpec {
    fn default() -> Self {
        Self {
            base: desk_scenario(),
            beta0_values: vec![0.001, 0.003, 0.005],
            gamma_values: vec![1.0 / 65.0, 1.0 / 42.0, 1.0 / 21.0],
            replicates: 50,
            master_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub beta0: f64,
    pub gamma: f64,
    pub mean_r0: MeanStd,
    pub profit: MeanStd,
    /// Cell mean divided by the baseline cell mean.
    pub rel_r0: f64,
    pub rel_profit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitScale {
    /// Fitted on values relative to the baseline cell.
    Relative,
    /// Baseline mean was zero; fitted on the raw means.
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseFit {
    pub scale: FitScale,
    pub fit: SensitivityFit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathogenSweepReport {
    pub cells: Vec<SweepCell>,
    /// `None` when the grid cannot support a plane (fewer than three
    /// non-collinear cells).
    pub r0_fit: Option<ResponseFit>,
    pub profit_fit: Option<ResponseFit>,
}

impl PathogenSweepReport {
    pub fn cell(&self, beta0: f64, gamma: f64) -> Option<&SweepCell> {
        self.cells
            .iter()
            .find(|c| same(c.beta0, beta0) && same(c.gamma, gamma))
    }
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

pub const PATHOGEN_SWEEP_HEADER: [&str; 8] = [
    "beta0",
    "gamma",
    "mean_r0",
    "std_r0",
    "mean_profit",
    "std_profit",
    "rel_r0",
    "rel_profit",
];

pub const FITS_HEADER: [&str; 6] = ["response", "scale", "coeff_beta0", "coeff_gamma", "intercept", "r_squared"];

/// Replicated simulations on every (beta0, gamma) cell.
pub fn run_pathogen_sweep(spec: &PathogenSweepSpec, out_dir: Option<&Path>) -> Result<PathogenSweepReport> {
    run_pathogen_sweep_with(spec, out_dir, |sc, replicates, seed| {
        let results = run_replicates(sc, replicates, seed)?;
        let s = analytics::summarize_replicates(&results);
        Ok((s.mean_r0, s.total_profit))
    })
}

/// Same as [`run_pathogen_sweep`] with a custom cell evaluator returning
/// `(E[R0] stats, profit stats)` for a scenario.
pub fn run_pathogen_sweep_with<F>(
    spec: &PathogenSweepSpec,
    out_dir: Option<&Path>,
    evaluate: F,
) -> Result<PathogenSweepReport>
where
    F: Fn(&Scenario, usize, u64) -> Result<(MeanStd, MeanStd)> + Sync,
{
    require_non_empty(&spec.beta0_values, "beta0 values non-empty")?;
    require_non_empty(&spec.gamma_values, "gamma values non-empty")?;
    require_replicates(spec.replicates)?;
    let base = spec.base.pathogen;
    let has_baseline = spec.beta0_values.iter().any(|&b| same(b, base.beta0))
        && spec.gamma_values.iter().any(|&g| same(g, base.gamma));
    if !has_baseline {
        return Err(Error::MissingBaseline {
            beta0: base.beta0,
            gamma: base.gamma,
        });
    }

    let grid: Vec<(f64, f64)> = spec
        .beta0_values
        .iter()
        .flat_map(|&b| spec.gamma_values.iter().map(move |&g| (b, g)))
        .collect();
    let stats = grid
        .iter()
        .map(|&(beta0, gamma)| {
            let mut sc = spec.base.clone();
            sc.pathogen.beta0 = beta0;
            sc.pathogen.gamma = gamma;
            sc.validate()?;
            evaluate(&sc, spec.replicates, spec.master_seed)
        })
        .collect::<Result<Vec<_>>>()?;

    let base_idx = grid
        .iter()
        .position(|&(b, g)| same(b, base.beta0) && same(g, base.gamma))
        .expect("baseline checked above");
    let (base_r0, base_profit) = (stats[base_idx].0.mean, stats[base_idx].1.mean);
    let ratio = |v: f64, b: f64| if b != 0.0 { v / b } else { f64::NAN };

    let cells: Vec<SweepCell> = grid
        .iter()
        .zip(&stats)
        .map(|(&(beta0, gamma), &(r0, profit))| SweepCell {
            beta0,
            gamma,
            mean_r0: r0,
            profit,
            rel_r0: ratio(r0.mean, base_r0),
            rel_profit: ratio(profit.mean, base_profit),
        })
        .collect();

    let xs: Vec<(f64, f64)> = grid.clone();
    let fit_response = |rel: Vec<f64>, abs: Vec<f64>, base_value: f64| -> Option<ResponseFit> {
        let (scale, ys) = if base_value != 0.0 {
            (FitScale::Relative, rel)
        } else {
            (FitScale::Absolute, abs)
        };
        analytics::fit_plane(&xs, &ys).ok().map(|fit| ResponseFit { scale, fit })
    };
    let r0_fit = fit_response(
        cells.iter().map(|c| c.rel_r0).collect(),
        cells.iter().map(|c| c.mean_r0.mean).collect(),
        base_r0,
    );
    let profit_fit = fit_response(
        cells.iter().map(|c| c.rel_profit).collect(),
        cells.iter().map(|c| c.profit.mean).collect(),
        base_profit,
    );

    if let Some(dir) = out_dir {
        let rows: Vec<Vec<String>> = cells
            .iter()
            .map(|c| {
                vec![
                    format_float(c.beta0),
                    format_float(c.gamma),
                    format_float(c.mean_r0.mean),
                    format_float(c.mean_r0.std),
                    format_float(c.profit.mean),
                    format_float(c.profit.std),
                    format_float(c.rel_r0),
                    format_float(c.rel_profit),
                ]
            })
            .collect();
        write_csv(&dir.join("pathogen_sweep.csv"), &PATHOGEN_SWEEP_HEADER, &rows)?;

        let fit_rows: Vec<Vec<String>> = [("mean_r0", r0_fit), ("profit", profit_fit)]
            .into_iter()
            .filter_map(|(name, f)| f.map(|f| (name, f)))
            .map(|(name, f)| {
                vec![
                    name.to_string(),
                    match f.scale {
                        FitScale::Relative => "relative",
                        FitScale::Absolute => "absolute",
                    }
                    .to_string(),
                    format_float(f.fit.coeff_beta0),
                    format_float(f.fit.coeff_gamma),
                    format_float(f.fit.intercept),
                    format_float(f.fit.r_squared),
                ]
            })
            .collect();
        write_csv(&dir.join("fits.csv"), &FITS_HEADER, &fit_rows)?;
    }

    Ok(PathogenSweepReport {
        cells,
        r0_fit,
        profit_fit,
    })
}

// ---------------------------------------------------------- economic sweep

/// Economic ratios swept with the numerator varied and the denominator held
/// at its configured value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EconomicRatio {
    /// grow_per_plant / grow_overhead_coeff
    GrowPerPlantToOverhead,
    /// sell_price / sell_discount
    PriceToDiscount,
    /// grow_per_plant / sell_price
    GrowPerPlantToPrice,
}

impl EconomicRatio {
    pub const ALL: [EconomicRatio; 3] = [
        EconomicRatio::GrowPerPlantToOverhead,
        EconomicRatio::PriceToDiscount,
        EconomicRatio::GrowPerPlantToPrice,
    ];

    pub fn label(self) -> &'static str {
        match self {
            EconomicRatio::GrowPerPlantToOverhead => "a1g/a2g",
            EconomicRatio::PriceToDiscount => "psi1/psi2",
            EconomicRatio::GrowPerPlantToPrice => "a1g/psi1",
        }
    }

    pub fn varied(self) -> &'static str {
        match self {
            EconomicRatio::GrowPerPlantToOverhead | EconomicRatio::GrowPerPlantToPrice => "grow_per_plant",
            EconomicRatio::PriceToDiscount => "sell_price",
        }
    }

    pub fn held(self) -> &'static str {
        match self {
            EconomicRatio::GrowPerPlantToOverhead => "grow_overhead_coeff",
            EconomicRatio::PriceToDiscount => "sell_discount",
            EconomicRatio::GrowPerPlantToPrice => "sell_price",
        }
    }

    pub fn value(self, e: &EconomicParams) -> f64 {
        match self {
            EconomicRatio::GrowPerPlantToOverhead => e.grow_per_plant / e.grow_overhead_coeff,
            EconomicRatio::PriceToDiscount => e.sell_price / e.sell_discount,
            EconomicRatio::GrowPerPlantToPrice => e.grow_per_plant / e.sell_price,
        }
    }

    /// Economics with the numerator set so the ratio equals `ratio`.
    pub fn apply(self, e: &EconomicParams, ratio: f64) -> EconomicParams {
        let mut out = *e;
        match self {
            EconomicRatio::GrowPerPlantToOverhead => out.grow_per_plant = ratio * e.grow_overhead_coeff,
            EconomicRatio::PriceToDiscount => out.sell_price = ratio * e.sell_discount,
            EconomicRatio::GrowPerPlantToPrice => out.grow_per_plant = ratio * e.sell_price,
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EconomicSweepSpec {
    pub base: Scenario,
    /// `(ratio, values)`; the baseline ratio is added when missing.
    pub sweeps: Vec<(EconomicRatio, Vec<f64>)>,
    pub replicates: usize,
    pub master_seed: u64,
}

impl Default for EconomicSweepSpec {
    fn default() -> Self {
        Self {
            base: desk_scenario(),
            sweeps: vec![
                (EconomicRatio::GrowPerPlantToOverhead, vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0]),
                (EconomicRatio::PriceToDiscount, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]),
                (EconomicRatio::GrowPerPlantToPrice, vec![0.001, 0.005, 0.01, 0.05, 0.1, 0.5]),
            ],
            replicates: 50,
            master_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EconomicSweepRow {
    pub ratio: EconomicRatio,
    pub ratio_value: f64,
    pub profit: MeanStd,
    pub is_baseline: bool,
}

pub const ECON_SWEEP_HEADER: [&str; 7] = [
    "ratio",
    "varied_param",
    "held_param",
    "ratio_value",
    "mean_profit",
    "std_profit",
    "is_baseline",
];

/// Re-prices one set of replicated epidemics under each ratio value.
pub fn run_economic_sweep(spec: &EconomicSweepSpec, out_dir: Option<&Path>) -> Result<Vec<EconomicSweepRow>> {
    require_replicates(spec.replicates)?;
    let results = run_replicates(&spec.base, spec.replicates, spec.master_seed)?;
    let base_econ = spec.base.economics;

    let mut rows = Vec::new();
    for (ratio, values) in &spec.sweeps {
        let baseline = ratio.value(&base_econ);
        let mut values = values.clone();
        if !values.iter().any(|&v| same(v, baseline)) {
            values.push(baseline);
        }
        values.sort_by(f64::total_cmp);
        for v in values {
            let econ = ratio.apply(&base_econ, v);
            econ.validate()?;
            let profits = results
                .iter()
                .map(|r| {
                    economics::economic_series(&r.trajectory, &econ, r.plant_count, r.died_early)
                        .map(|s| s.total_profit)
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(EconomicSweepRow {
                ratio: *ratio,
                ratio_value: v,
                profit: MeanStd::from_samples(&profits),
                is_baseline: same(v, baseline),
            });
        }
    }

    if let Some(dir) = out_dir {
        let csv_rows: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.ratio.label().to_string(),
                    r.ratio.varied().to_string(),
                    r.ratio.held().to_string(),
                    format_float(r.ratio_value),
                    format_float(r.profit.mean),
                    format_float(r.profit.std),
                    r.is_baseline.to_string(),
                ]
            })
            .collect();
        write_csv(&dir.join("econ_sweep.csv"), &ECON_SWEEP_HEADER, &csv_rows)?;
    }
    Ok(rows)
}

// ------------------------------------------------------ optimal comparison

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSpec {
    /// Economics, horizon, k and minimal spacing come from here.
    pub base: Scenario,
    pub instances: usize,
    pub width_range: (f64, f64),
    pub height_range: (f64, f64),
    pub beta0_range: (f64, f64),
    pub gamma_range: (f64, f64),
    pub replicates: usize,
    pub default_strategy: SeedingStrategy,
    pub search: Search,
    pub mode: ScoreMode,
    pub master_seed: u64,
}

impl Default for ComparisonSpec {
    fn default() -> Self {
        Self {
            base: desk_scenario(),
            instances: 200,
            width_range: (5.0, 20.0),
            height_range: (5.0, 20.0),
            beta0_range: (0.001, 0.005),
            gamma_range: (1.0 / 65.0, 1.0 / 21.0),
            replicates: 10,
            default_strategy: SeedingStrategy::new(0.2, 0.2),
            search: Search::Grid {
                delta_m: optimizer::DEFAULT_DELTA_M,
            },
            mode: ScoreMode::Analytic,
            master_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    Default,
    Optimal,
}

impl Arm {
    pub fn label(self) -> &'static str {
        match self {
            Arm::Default => "default",
            Arm::Optimal => "optimal",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub instance: usize,
    pub field: FieldSpec,
    pub beta0: f64,
    pub gamma: f64,
    pub arm: Arm,
    pub placement: crate::scenario::PlacementMode,
    pub strategy: SeedingStrategy,
    pub mean_r0: f64,
    /// Mean simulated profit over the replicates.
    pub profit: f64,
    pub analytic_profit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSummary {
    pub placement: crate::scenario::PlacementMode,
    pub mean_difference: f64,
    pub t_test: Option<analytics::PairedTTest>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonOutput {
    pub rows: Vec<ComparisonRow>,
    pub summaries: Vec<ComparisonSummary>,
}

pub const COMPARISON_HEADER: [&str; 17] = [
    "instance",
    "width_m",
    "height_m",
    "beta0",
    "gamma",
    "arm",
    "placement",
    "dx_m",
    "dy_m",
    "mean_r0",
    "profit",
    "analytic_profit",
    "mean_difference",
    "t_statistic",
    "dof",
    "p_value",
    "note",
];

fn draw(rng: &mut impl Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo >= hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

/// Random instances; the optimal spacing is searched with the default
/// strategy in the candidate set, then both arms are simulated under random
/// and worst-case placement.
pub fn run_optimal_comparison(spec: &ComparisonSpec, out_dir: Option<&Path>) -> Result<ComparisonOutput> {
    require_replicates(spec.replicates)?;
    let mut rows = Vec::new();
    for instance in 0..spec.instances {
        let mut rng = rng_from_seed(derive_seed(spec.master_seed, instance as u64, 0));
        let mut sc = spec.base.clone();
        sc.field.width_m = draw(&mut rng, spec.width_range);
        sc.field.height_m = draw(&mut rng, spec.height_range);
        sc.pathogen.beta0 = draw(&mut rng, spec.beta0_range);
        sc.pathogen.gamma = draw(&mut rng, spec.gamma_range);
        sc.explicit_count = None;
        sc.strategy = spec.default_strategy;
        sc.validate()?;

        let config = OptimizeConfig {
            search: spec.search,
            mode: spec.mode,
            n_reps: spec.replicates,
            base_seed: derive_seed(spec.master_seed, instance as u64, 2),
            bound_variant: BoundVariant::GeometricSum,
            include: vec![spec.default_strategy],
        };
        let best = optimizer::optimize(&sc, &config)?;
        let report = optimizer::compare_strategies(
            &sc,
            spec.default_strategy,
            best.best_strategy,
            spec.replicates.max(2),
            derive_seed(spec.master_seed, instance as u64, 1),
        )?;
        for p in &report.by_placement {
            for (arm, summary) in [(Arm::Default, &p.default_arm), (Arm::Optimal, &p.optimal_arm)] {
                rows.push(ComparisonRow {
                    instance,
                    field: sc.field,
                    beta0: sc.pathogen.beta0,
                    gamma: sc.pathogen.gamma,
                    arm,
                    placement: p.placement,
                    strategy: summary.strategy,
                    mean_r0: summary.mean_r0.mean,
                    profit: summary.profit.mean,
                    analytic_profit: worstcase::analytic_profit(
                        &sc.field,
                        &summary.strategy,
                        &sc.pathogen,
                        &sc.economics,
                        sc.horizon_steps,
                        BoundVariant::GeometricSum,
                    )?,
                });
            }
        }
    }

    let summaries = [crate::scenario::PlacementMode::Random, crate::scenario::PlacementMode::WorstCase]
        .into_iter()
        .map(|placement| {
            let pick = |arm: Arm| -> Vec<f64> {
                rows.iter()
                    .filter(|r| r.placement == placement && r.arm == arm)
                    .map(|r| r.profit)
                    .collect()
            };
            let (opt, def) = (pick(Arm::Optimal), pick(Arm::Default));
            let diffs: Vec<f64> = opt.iter().zip(&def).map(|(a, b)| a - b).collect();
            let mean_difference = analytics::mean(&diffs);
            match analytics::paired_t_test(&opt, &def) {
                Ok(t) => ComparisonSummary {
                    placement,
                    mean_difference,
                    t_test: Some(t),
                    note: String::new(),
                },
                Err(e) => ComparisonSummary {
                    placement,
                    mean_difference,
                    t_test: None,
                    note: e.to_string(),
                },
            }
        })
        .collect::<Vec<_>>();

    if let Some(dir) = out_dir {
        let mut csv_rows: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                let mut row = vec![
                    r.instance.to_string(),
                    format_float(r.field.width_m),
                    format_float(r.field.height_m),
                    format_float(r.beta0),
                    format_float(r.gamma),
                    r.arm.label().to_string(),
                    r.placement.to_string(),
                    format_float(r.strategy.dx_m),
                    format_float(r.strategy.dy_m),
                    format_float(r.mean_r0),
                    format_float(r.profit),
                    format_float(r.analytic_profit),
                ];
                row.resize(COMPARISON_HEADER.len(), String::new());
                row
            })
            .collect();
        for s in &summaries {
            let mut row = vec![String::new(); COMPARISON_HEADER.len()];
            row[0] = "summary".to_string();
            row[5] = "optimal-default".to_string();
            row[6] = s.placement.to_string();
            row[12] = format_float(s.mean_difference);
            if let Some(t) = &s.t_test {
                row[13] = format_float(t.t_statistic);
                row[14] = t.dof.to_string();
                row[15] = format_float(t.p_two_sided);
            }
            row[16] = s.note.clone();
            csv_rows.push(row);
        }
        write_csv(&dir.join("comparison.csv"), &COMPARISON_HEADER, &csv_rows)?;
    }
    Ok(ComparisonOutput { rows, summaries })
}

// ----------------------------------------------------------------- dispatch

#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    Baseline(BaselineSpec),
    PathogenSweep(PathogenSweepSpec),
    EconomicSweep(EconomicSweepSpec),
    OptimalComparison(ComparisonSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub out_dir: PathBuf,
}

/// Runs the experiment and writes its CSV files into `out_dir`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<()> {
    let dir = Some(spec.out_dir.as_path());
    match &spec.experiment {
        Experiment::Baseline(s) => run_baseline(s, dir).map(|_| ()),
        Experiment::PathogenSweep(s) => run_pathogen_sweep(s, dir).map(|_| ()),
        Experiment::EconomicSweep(s) => run_economic_sweep(s, dir).map(|_| ()),
        Experiment::OptimalComparison(s) => run_optimal_comparison(s, dir).map(|_| ()),
    }
}
