//! Seeding, growing, harvesting and selling, and the per-round output of a
//! season.
//!
//! Counts are real-valued so the same code prices simulated trajectories
//! and the analytic surviving-plant series. A round with fewer than one
//! surviving plant produces no output.

use crate::epidemic::EpidemicTrajectory;
use crate::error::{Error, Result};
use crate::scenario::EconomicParams;

/// Per-round output of one season and its sum.
#[derive(Debug, Clone, PartialEq)]
pub struct EconomicSeries {
    pub per_round_output: Vec<f64>,
    pub total_profit: f64,
}

impl EconomicSeries {
    fn from_rounds(per_round_output: Vec<f64>) -> Self {
        let total_profit = per_round_output.iter().sum();
        Self {
            per_round_output,
            total_profit,
        }
    }

    /// Running sum of the output up to and including each round.
    pub fn cumulative(&self) -> Vec<f64> {
        self.per_round_output
            .iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }
}

fn require_plants(n: f64) -> Result<()> {
    if n >= 1.0 {
        Ok(())
    } else {
        Err(Error::PlantCount { min: 1, got: n })
    }
}

pub fn seeding_cost(n: f64, econ: &EconomicParams) -> Result<f64> {
    require_plants(n)?;
    Ok(econ.seed_per_plant * n.ln() + econ.seed_overhead_coeff * n)
}

/// Cost of growing `n` plants for one round.
pub fn growing_cost(n: f64, econ: &EconomicParams) -> Result<f64> {
    require_plants(n)?;
    Ok(econ.grow_per_plant * n.ln() + econ.grow_overhead_coeff * n)
}

pub fn harvesting_cost(n: f64, econ: &EconomicParams) -> Result<f64> {
    require_plants(n)?;
    Ok(econ.harvest_per_plant * n.ln() + econ.harvest_overhead_coeff * n)
}

/// Revenue from selling `n` plants; zero when nothing is left.
pub fn sell_revenue(n: f64, econ: &EconomicParams) -> f64 {
    if n < 1.0 {
        return 0.0;
    }
    econ.sell_price * n - econ.sell_discount * n.ln()
}

/// Prices a surviving-plant series `n_t` (round 1 first).
///
/// Round 1 pays seeding and growing, middle rounds pay growing, and the last
/// round sells and harvests. With `died_early` only the seeding cost of the
/// initial population is paid.
pub fn economic_series_from_counts(
    n_t: &[f64],
    econ: &EconomicParams,
    died_early: bool,
) -> Result<EconomicSeries> {
    let horizon = n_t.len();
    if horizon < 2 {
        return Err(Error::ShortTrajectory {
            got: horizon,
            min: 2,
        });
    }
    let mut out = vec![0.0; horizon];
    if died_early {
        out[0] = -seeding_cost(n_t[0], econ)?;
        return Ok(EconomicSeries::from_rounds(out));
    }

    if n_t[0] >= 1.0 {
        out[0] = -seeding_cost(n_t[0], econ)? - growing_cost(n_t[0], econ)?;
    }
    for t in 1..horizon - 1 {
        if n_t[t] >= 1.0 {
            out[t] = -growing_cost(n_t[t], econ)?;
        }
    }
    let last = n_t[horizon - 1];
    if last >= 1.0 {
        out[horizon - 1] = sell_revenue(last, econ) - harvesting_cost(last, econ)?;
    }
    Ok(EconomicSeries::from_rounds(out))
}

/// Prices a simulated trajectory seeded with `n_initial` plants.
pub fn economic_series(
    trajectory: &EpidemicTrajectory,
    econ: &EconomicParams,
    n_initial: usize,
    died_early: bool,
) -> Result<EconomicSeries> {
    let population = trajectory.population();
    if population != n_initial {
        return Err(Error::PopulationMismatch {
            trajectory: population,
            expected: n_initial,
        });
    }
    let counts: Vec<f64> = if died_early {
        let mut c = vec![0.0; trajectory.len()];
        if let Some(first) = c.first_mut() {
            *first = n_initial as f64;
        }
        c
    } else {
        trajectory.n_t.iter().map(|&n| n as f64).collect()
    };
    economic_series_from_counts(&counts, econ, died_early)
}
