//! Grid and Monte Carlo search for the most profitable spacing on a small
//! field, scored analytically and by simulation.

use fieldopt::optimizer::{optimize, OptimizeConfig, ScoreMode, Search};
use fieldopt::{FieldSpec, Scenario};

fn main() -> fieldopt::Result<()> {
    let scenario = Scenario {
        field: FieldSpec::new(5.0, 4.0, 0.1),
        ..Scenario::default()
    };
    let runs = [
        ("grid/analytic", Search::Grid { delta_m: 0.05 }, ScoreMode::Analytic, 1),
        ("monte-carlo/analytic", Search::MonteCarlo { budget: 500 }, ScoreMode::Analytic, 1),
        ("grid/simulated", Search::Grid { delta_m: 0.5 }, ScoreMode::Simulated, 10),
    ];
    for (name, search, mode, n_reps) in runs {
        let config = OptimizeConfig {
            search,
            mode,
            n_reps,
            ..OptimizeConfig::default()
        };
        let best = optimize(&scenario, &config)?;
        println!(
            "{name:22} best dx={:.2} dy={:.2} profit={:.2} over {} candidates",
            best.best_strategy.dx_m,
            best.best_strategy.dy_m,
            best.best_profit,
            best.evaluations.len()
        );
    }
    Ok(())
}
