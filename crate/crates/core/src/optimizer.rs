//! Profit-maximizing spacing search over `[min_spacing, W] x [min_spacing, H]`.
//!
//! Candidates come from a lattice with step `delta` or from uniform Monte
//! Carlo draws, and are scored either by the analytic worst-case bound or by
//! the mean of replicated simulations. Evaluations run in parallel on the
//! current rayon pool; results keep candidate order, so the outcome does not
//! depend on the number of threads.

use rand::Rng;
use rayon::prelude::*;

use crate::analytics::{self, MeanStd, PairedTTest};
use crate::epidemic::Simulation;
use crate::error::{Error, Result};
use crate::scenario::{FieldSpec, PlacementMode, Scenario, SeedingStrategy};
use crate::seed::{derive_seed, rng_from_seed};
use crate::worstcase::{self, BoundVariant};

/// Slack when comparing lattice candidates against the field size.
const EDGE_SLACK: f64 = 1e-9;

pub const DEFAULT_DELTA_M: f64 = 0.05;
pub const DEFAULT_MC_BUDGET: usize = 500;
pub const DEFAULT_REPS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreMode {
    Analytic,
    Simulated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Search {
    Grid { delta_m: f64 },
    MonteCarlo { budget: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeConfig {
    pub search: Search,
    pub mode: ScoreMode,
    /// Replicates per candidate in simulated mode.
    pub n_reps: usize,
    pub base_seed: u64,
    pub bound_variant: BoundVariant,
    /// Extra candidates evaluated alongside the search set (e.g. a default
    /// strategy that must be compared against).
    pub include: Vec<SeedingStrategy>,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            search: Search::Grid {
                delta_m: DEFAULT_DELTA_M,
            },
            mode: ScoreMode::Analytic,
            n_reps: DEFAULT_REPS,
            base_seed: 0,
            bound_variant: BoundVariant::GeometricSum,
            include: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub strategy: SeedingStrategy,
    pub profit_estimate: f64,
    pub profit_std: f64,
    pub n_reps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_strategy: SeedingStrategy,
    pub best_profit: f64,
    pub evaluations: Vec<Evaluation>,
    pub mode: ScoreMode,
    pub search: Search,
}

/// Lattice `(min + i*delta, min + j*delta)` inside the field, `dx` major.
pub fn enumerate_candidates(field: &FieldSpec, delta_m: f64) -> Result<Vec<SeedingStrategy>> {
    if delta_m.is_nan() || delta_m <= 0.0 {
        return Err(Error::invalid("delta > 0", delta_m));
    }
    let axis = |extent: f64| -> Vec<f64> {
        let mut values = Vec::new();
        let mut i = 0usize;
        loop {
            let d = field.min_spacing_m + i as f64 * delta_m;
            if d > extent * (1.0 + EDGE_SLACK) {
                break;
            }
            values.push(d.min(extent));
            i += 1;
        }
        values
    };
    let xs = axis(field.width_m);
    let ys = axis(field.height_m);
    Ok(xs
        .iter()
        .flat_map(|&dx| ys.iter().map(move |&dy| SeedingStrategy::new(dx, dy)))
        .collect())
}

/// Scores one candidate. Simulated replicate `i` of candidate `c` uses seed
/// `derive_seed(base_seed, c, i)`.
pub fn evaluate_candidate(
    scenario: &Scenario,
    mode: ScoreMode,
    n_reps: usize,
    candidate_index: u64,
    base_seed: u64,
    variant: BoundVariant,
) -> Result<(f64, f64)> {
    match mode {
        ScoreMode::Analytic => {
            let p = worstcase::analytic_profit(
                &scenario.field,
                &scenario.strategy,
                &scenario.pathogen,
                &scenario.economics,
                scenario.horizon_steps,
                variant,
            )?;
            Ok((p, 0.0))
        }
        ScoreMode::Simulated => {
            if n_reps == 0 {
                return Err(Error::invalid("n_reps >= 1", n_reps));
            }
            if scenario.strategy.dx_m > scenario.field.width_m
                || scenario.strategy.dy_m > scenario.field.height_m
            {
                return Ok((0.0, 0.0));
            }
            let sim = Simulation::new(scenario)?;
            let profits = (0..n_reps as u64)
                .map(|i| {
                    sim.run_with_seed(derive_seed(base_seed, candidate_index, i))
                        .map(|r| r.total_profit())
                })
                .collect::<Result<Vec<_>>>()?;
            let s = MeanStd::from_samples(&profits);
            Ok((s.mean, s.std))
        }
    }
}

/// Candidate set for `config` over `base`'s field, search set first.
pub fn candidates(base: &Scenario, config: &OptimizeConfig) -> Result<Vec<SeedingStrategy>> {
    let field = &base.field;
    if field.width_m < field.min_spacing_m || field.height_m < field.min_spacing_m {
        return Err(Error::Infeasible);
    }
    let mut out = match config.search {
        Search::Grid { delta_m } => enumerate_candidates(field, delta_m)?,
        Search::MonteCarlo { budget } => {
            let mut rng = rng_from_seed(derive_seed(config.base_seed, u64::MAX, 0));
            (0..budget)
                .map(|_| {
                    SeedingStrategy::new(
                        rng.random_range(field.min_spacing_m..=field.width_m),
                        rng.random_range(field.min_spacing_m..=field.height_m),
                    )
                })
                .collect()
        }
    };
    for extra in &config.include {
        if !out.contains(extra) {
            out.push(*extra);
        }
    }
    if out.is_empty() {
        return Err(Error::Infeasible);
    }
    Ok(out)
}

/// Evaluates every candidate and returns the best one.
///
/// Ties on profit go to the larger cell area `dx * dy`, then to the
/// lexicographically smaller `(dx, dy)`.
pub fn optimize(base: &Scenario, config: &OptimizeConfig) -> Result<OptimizationResult> {
    let cands = candidates(base, config)?;
    let evaluations = cands
        .par_iter()
        .enumerate()
        .map(|(i, &strategy)| {
            let sc = base.with_strategy(strategy);
            let (profit_estimate, profit_std) =
                evaluate_candidate(&sc, config.mode, config.n_reps, i as u64, config.base_seed, config.bound_variant)?;
            Ok(Evaluation {
                strategy,
                profit_estimate,
                profit_std,
                n_reps: match config.mode {
                    ScoreMode::Analytic => 1,
                    ScoreMode::Simulated => config.n_reps,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let best = evaluations
        .iter()
        .copied()
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .ok_or(Error::Infeasible)?;
    Ok(OptimizationResult {
        best_strategy: best.strategy,
        best_profit: best.profit_estimate,
        evaluations,
        mode: config.mode,
        search: config.search,
    })
}

fn better(a: &Evaluation, b: &Evaluation) -> bool {
    if a.profit_estimate != b.profit_estimate {
        return a.profit_estimate > b.profit_estimate;
    }
    let (area_a, area_b) = (
        a.strategy.dx_m * a.strategy.dy_m,
        b.strategy.dx_m * b.strategy.dy_m,
    );
    if area_a != area_b {
        return area_a > area_b;
    }
    (a.strategy.dx_m, a.strategy.dy_m) < (b.strategy.dx_m, b.strategy.dy_m)
}

/// Profit and reproduction-number statistics for one strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmSummary {
    pub strategy: SeedingStrategy,
    pub profits: Vec<f64>,
    pub mean_r0s: Vec<f64>,
    pub profit: MeanStd,
    pub mean_r0: MeanStd,
}

impl ArmSummary {
    fn new(strategy: SeedingStrategy, profits: Vec<f64>, mean_r0s: Vec<f64>) -> Self {
        Self {
            strategy,
            profit: MeanStd::from_samples(&profits),
            mean_r0: MeanStd::from_samples(&mean_r0s),
            profits,
            mean_r0s,
        }
    }
}

/// Default vs optimal strategy under one placement mode.
#[derive(Debug)]
pub struct PlacementComparison {
    pub placement: PlacementMode,
    pub default_arm: ArmSummary,
    pub optimal_arm: ArmSummary,
    /// Paired test on `optimal - default` profits; fails when the
    /// differences have no variance (e.g. identical strategies).
    pub t_test: Result<PairedTTest>,
}

#[derive(Debug)]
pub struct ComparisonReport {
    pub by_placement: Vec<PlacementComparison>,
}

/// Runs both strategies under random and worst-case placement with paired
/// seeds: replicate `i` of either arm uses `derive_seed(base_seed, 0, i)`.
pub fn compare_strategies(
    scenario: &Scenario,
    default_strategy: SeedingStrategy,
    optimal_strategy: SeedingStrategy,
    n_reps: usize,
    base_seed: u64,
) -> Result<ComparisonReport> {
    if n_reps < 2 {
        return Err(Error::invalid("n_reps >= 2", n_reps));
    }
    let by_placement = [PlacementMode::Random, PlacementMode::WorstCase]
        .into_iter()
        .map(|placement| {
            let arm = |strategy: SeedingStrategy| -> Result<ArmSummary> {
                let sc = Scenario {
                    placement_mode: placement,
                    ..scenario.with_strategy(strategy)
                };
                let sim = Simulation::new(&sc)?;
                let results = (0..n_reps as u64)
                    .into_par_iter()
                    .map(|i| sim.run_with_seed(derive_seed(base_seed, 0, i)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ArmSummary::new(
                    strategy,
                    results.iter().map(|r| r.total_profit()).collect(),
                    results.iter().map(|r| r.mean_r0()).collect(),
                ))
            };
            let default_arm = arm(default_strategy)?;
            let optimal_arm = arm(optimal_strategy)?;
            let t_test = analytics::paired_t_test(&optimal_arm.profits, &default_arm.profits);
            Ok(PlacementComparison {
                placement,
                default_arm,
                optimal_arm,
                t_test,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport { by_placement })
}
