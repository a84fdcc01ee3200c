//! Stochastic simulation of a plant pathogen spreading through a seeded
//! field, the profit of the resulting season, and a search for the seeding
//! spacing that maximizes that profit.
//!
//! Plants sit on a rectangular lattice with spacing `(dx, dy)`. Each round,
//! every infected plant is removed with probability `gamma` and infects a
//! susceptible plant at distance `d` with probability `min(1, beta0 / d)`.
//! Surviving plants are priced with logarithmic overhead cost curves.
//!
//! ```
//! use fieldopt::{harness, Simulation};
//!
//! let scenario = harness::desk_scenario();
//! let result = Simulation::new(&scenario)?.run_with_seed(7)?;
//! assert_eq!(result.plant_count, 2601);
//! println!("profit {:.2}", result.total_profit());
//! # Ok::<(), fieldopt::Error>(())
//! ```
//!
//! The `examples/` directory has one runnable program per capability:
//! `simulate`, `scenario_file`, `worst_case_bound`, `optimize_spacing`,
//! `baseline`, `pathogen_sweep`, `economic_sweep` and `compare_strategies`.

pub mod analytics;
pub mod cli;
pub mod economics;
pub mod epidemic;
pub mod error;
pub mod field;
pub mod harness;
pub mod optimizer;
pub mod scenario;
pub mod seed;
pub mod worstcase;

pub use epidemic::{Simulation, SimulationResult};
pub use error::{Error, Result};
pub use optimizer::{optimize, OptimizeConfig, ScoreMode, Search};
pub use scenario::{
    load_scenario, scenario_default, EconomicParams, FieldSpec, PathogenParams, PlacementMode, Scenario,
    SeedingStrategy,
};
pub use worstcase::BoundVariant;
