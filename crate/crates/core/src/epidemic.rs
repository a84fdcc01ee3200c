//! Round-based stochastic SIR dynamics on a plant lattice.
//!
//! Each round, every plant infected at the start of the round is removed
//! with probability `gamma`, and every susceptible plant `j` is infected
//! with probability `1 - prod_i (1 - p_ij)` over the start-of-round infected
//! plants `i`, where `p_ij = min(1, beta0 / d_ij)`. Removal draws happen
//! first (ascending plant index), then infection draws (ascending plant
//! index, only for plants with non-zero exposure). That order is fixed so
//! a seed reproduces a run exactly.

use rand::seq::index;
use rand::Rng;

use crate::analytics::{self, R0Series};
use crate::economics::{self, EconomicSeries};
use crate::error::{Error, Result};
use crate::field::{self, PlantGrid};
use crate::scenario::{PathogenParams, PlacementMode, Scenario};
use crate::seed::rng_from_seed;
use crate::worstcase;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlantStatus {
    Susceptible,
    Infected,
    Removed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PlantState {
    pub status: PlantStatus,
    /// Round at which the plant became infected; set for I and R.
    pub infected_at: Option<u32>,
}

impl PlantState {
    pub const SUSCEPTIBLE: PlantState = PlantState {
        status: PlantStatus::Susceptible,
        infected_at: None,
    };

    pub fn infected(round: u32) -> Self {
        Self {
            status: PlantStatus::Infected,
            infected_at: Some(round),
        }
    }

    pub fn is_susceptible(&self) -> bool {
        self.status == PlantStatus::Susceptible
    }

    pub fn is_infected(&self) -> bool {
        self.status == PlantStatus::Infected
    }
}

/// How infected plants leave the infected compartment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalRule {
    /// Removed with probability `gamma` each round (mean stay `1/gamma`).
    Geometric,
    /// Removed exactly this many rounds after infection.
    FixedDuration(u32),
}

impl RemovalRule {
    pub fn for_scenario(scenario: &Scenario) -> Self {
        if scenario.deterministic_duration {
            RemovalRule::FixedDuration((1.0 / scenario.pathogen.gamma).ceil() as u32)
        } else {
            RemovalRule::Geometric
        }
    }
}

/// Compartment counts for rounds `1..=T` (index 0 is round 1).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EpidemicTrajectory {
    pub s_count: Vec<usize>,
    pub i_count: Vec<usize>,
    pub r_count: Vec<usize>,
    /// Surviving plants `N - R(t)`.
    pub n_t: Vec<usize>,
}

impl EpidemicTrajectory {
    pub fn from_counts(rounds: impl IntoIterator<Item = (usize, usize, usize)>) -> Self {
        let mut traj = Self::default();
        for (s, i, r) in rounds {
            traj.push(s, i, r);
        }
        traj
    }

    fn push(&mut self, s: usize, i: usize, r: usize) {
        self.s_count.push(s);
        self.i_count.push(i);
        self.r_count.push(r);
        self.n_t.push(s + i);
    }

    fn record(&mut self, states: &[PlantState]) {
        let (mut s, mut i, mut r) = (0, 0, 0);
        for st in states {
            match st.status {
                PlantStatus::Susceptible => s += 1,
                PlantStatus::Infected => i += 1,
                PlantStatus::Removed => r += 1,
            }
        }
        self.push(s, i, r);
    }

    pub fn len(&self) -> usize {
        self.s_count.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s_count.is_empty()
    }

    /// Total plants, read from round 1.
    pub fn population(&self) -> usize {
        match self.len() {
            0 => 0,
            _ => self.s_count[0] + self.i_count[0] + self.r_count[0],
        }
    }
}

/// Infection probability from one infected plant at `distance_m`, capped at 1.
pub fn pairwise_infection_prob(beta0: f64, distance_m: f64) -> Result<f64> {
    if distance_m <= 0.0 {
        return Err(Error::ZeroDistance);
    }
    Ok((beta0 / distance_m).min(1.0))
}

/// Chooses the `k` initially infected plants, sorted by index.
pub fn place_initial_infected<R: Rng + ?Sized>(
    grid: &PlantGrid,
    k: usize,
    mode: PlacementMode,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if k == 0 || k > grid.count() {
        return Err(Error::TooManyInfected {
            requested: k,
            count: grid.count(),
        });
    }
    let mut chosen = match mode {
        PlacementMode::Random => index::sample(rng, grid.count(), k).into_vec(),
        PlacementMode::WorstCase => worstcase::kcenter_greedy(grid.positions(), k)?,
    };
    chosen.sort_unstable();
    Ok(chosen)
}

/// Probability that each plant is newly infected this round. Zero for
/// plants that are not susceptible or have no infected plant within the
/// grid's cutoff radius.
pub fn infection_probabilities(grid: &PlantGrid, states: &[PlantState], beta0: f64) -> Vec<f64> {
    if beta0 <= 0.0 {
        return vec![0.0; grid.count()];
    }
    let mut survival = vec![1.0_f64; grid.count()];
    let cutoff = grid.cutoff_radius_m();
    let all_pairs = cutoff >= grid.extent_diagonal_m();
    let mut expose = |j: usize, d: f64| {
        if states[j].is_susceptible() {
            let p = (beta0 / d).min(1.0);
            survival[j] *= 1.0 - p;
        }
    };
    for source in (0..states.len()).filter(|&i| states[i].is_infected()) {
        if all_pairs {
            for j in 0..states.len() {
                if j != source {
                    expose(j, grid.distance(source, j));
                }
            }
        } else {
            grid.for_each_neighbor(source, cutoff, &mut expose);
        }
    }
    survival.into_iter().map(|s| 1.0 - s).collect()
}

/// Advances `states` from round `round` to round `round + 1`.
pub fn step<R: Rng + ?Sized>(
    grid: &PlantGrid,
    states: &mut [PlantState],
    pathogen: &PathogenParams,
    removal: RemovalRule,
    round: u32,
    rng: &mut R,
) -> Result<()> {
    if states.len() != grid.count() {
        return Err(Error::LengthMismatch {
            left: states.len(),
            right: grid.count(),
        });
    }
    let exposure = infection_probabilities(grid, states, pathogen.beta0);

    for st in states.iter_mut().filter(|s| s.is_infected()) {
        let removed = match removal {
            RemovalRule::Geometric => rng.random::<f64>() < pathogen.gamma,
            RemovalRule::FixedDuration(rounds) => {
                let since = st.infected_at.map_or(0, |t0| round + 1 - t0);
                since >= rounds
            }
        };
        if removed {
            st.status = PlantStatus::Removed;
        }
    }

    for (st, &p) in states.iter_mut().zip(&exposure) {
        if p > 0.0 && rng.random::<f64>() < p {
            *st = PlantState::infected(round + 1);
        }
    }
    Ok(())
}

/// Everything one season produces.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub plant_count: usize,
    pub initial_infected: Vec<usize>,
    /// Spacing was below the minimal seeding distance; every plant died.
    pub died_early: bool,
    pub trajectory: EpidemicTrajectory,
    pub economics: EconomicSeries,
    pub r0: R0Series,
}

impl SimulationResult {
    pub fn total_profit(&self) -> f64 {
        self.economics.total_profit
    }

    pub fn mean_r0(&self) -> f64 {
        self.r0.mean_r0
    }
}

/// A scenario with its lattice (and worst-case placement) prepared once, so
/// replicates only pay for the dynamics.
#[derive(Debug, Clone)]
pub struct Simulation {
    scenario: Scenario,
    grid: PlantGrid,
    removal: RemovalRule,
    worst_case_seeds: Option<Vec<usize>>,
}

impl Simulation {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        scenario.validate()?;
        let grid = field::layout_grid(&scenario.field, &scenario.strategy, scenario.explicit_count)?
            .with_cutoff(scenario.infection_cutoff_m());
        let died_early = scenario.strategy.is_below_min_spacing(&scenario.field);
        let k = scenario.pathogen.initial_infected;
        let worst_case_seeds = if scenario.placement_mode == PlacementMode::WorstCase && !died_early {
            let mut unused = rng_from_seed(0);
            Some(place_initial_infected(&grid, k, PlacementMode::WorstCase, &mut unused)?)
        } else {
            None
        };
        Ok(Self {
            scenario: scenario.clone(),
            grid,
            removal: RemovalRule::for_scenario(scenario),
            worst_case_seeds,
        })
    }

    pub fn grid(&self) -> &PlantGrid {
        &self.grid
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// Runs one season with the scenario's own seed.
    pub fn run(&self) -> Result<SimulationResult> {
        self.run_with_seed(self.scenario.rng_seed)
    }

    pub fn run_with_seed(&self, seed: u64) -> Result<SimulationResult> {
        let sc = &self.scenario;
        let n = self.grid.count();
        let horizon = sc.horizon_steps;

        if sc.strategy.is_below_min_spacing(&sc.field) {
            let trajectory = EpidemicTrajectory::from_counts(
                std::iter::once((n, 0, 0)).chain(std::iter::repeat_n((0, 0, n), horizon - 1)),
            );
            return self.finish(Vec::new(), true, trajectory);
        }

        let mut rng = rng_from_seed(seed);
        let k = sc.pathogen.initial_infected;
        let seeds = match &self.worst_case_seeds {
            Some(s) => s.clone(),
            None => place_initial_infected(&self.grid, k, PlacementMode::Random, &mut rng)?,
        };

        let mut states = vec![PlantState::SUSCEPTIBLE; n];
        for &i in &seeds {
            states[i] = PlantState::infected(1);
        }
        let mut trajectory = EpidemicTrajectory::default();
        trajectory.record(&states);
        for round in 1..horizon as u32 {
            step(&self.grid, &mut states, &sc.pathogen, self.removal, round, &mut rng)?;
            trajectory.record(&states);
        }
        self.finish(seeds, false, trajectory)
    }

    fn finish(
        &self,
        initial_infected: Vec<usize>,
        died_early: bool,
        trajectory: EpidemicTrajectory,
    ) -> Result<SimulationResult> {
        let n = self.grid.count();
        let economics = economics::economic_series(&trajectory, &self.scenario.economics, n, died_early)?;
        let r0 = analytics::r0_series(&trajectory);
        Ok(SimulationResult {
            plant_count: n,
            initial_infected,
            died_early,
            trajectory,
            economics,
            r0,
        })
    }
}

/// Lays out the field, seeds the infection and runs `T - 1` rounds.
pub fn run(scenario: &Scenario) -> Result<SimulationResult> {
    Simulation::new(scenario)?.run()
}
