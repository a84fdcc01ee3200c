//! Experiment configuration: field geometry, pathogen, economics, seeding
//! strategy and run options.
//!
//! Scenarios are read from a sectioned key-value (TOML) file:
//!
//! ```toml
//! [field]
//! width_m = 100.0
//! height_m = 100.0
//! min_spacing_m = 0.1
//!
//! [pathogen]
//! beta0 = 0.003
//! gamma = 0.023809523809523808
//! initial_infected = 3
//!
//! [economics]
//! seed_per_plant = 0.01
//! seed_overhead_coeff = 0.14
//! grow_per_plant = 0.033
//! grow_overhead_coeff = 0.019
//! harvest_per_plant = 0.06
//! harvest_overhead_coeff = 0.11
//! sell_price = 5.32
//! sell_discount = 1.71
//!
//! [strategy]
//! dx_m = 0.2
//! dy_m = 0.2
//!
//! [run]
//! horizon_steps = 3
//! placement_mode = "random"   # or "worst_case"
//! rng_seed = 0
//! # explicit_count = 25000
//! deterministic_duration = false
//! infection_epsilon = 1e-6
//! ```
//!
//! Every key is optional; missing keys take the defaults shown above.
//! Unknown sections or keys are rejected.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field;

/// Rectangular field and the minimal spacing plants need to survive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldSpec {
    pub width_m: f64,
    pub height_m: f64,
    pub min_spacing_m: f64,
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self {
            width_m: 100.0,
            height_m: 100.0,
            min_spacing_m: 0.1,
        }
    }
}

impl FieldSpec {
    pub fn new(width_m: f64, height_m: f64, min_spacing_m: f64) -> Self {
        Self {
            width_m,
            height_m,
            min_spacing_m,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check(self.width_m > 0.0 && self.width_m.is_finite(), "width_m > 0", self.width_m)?;
        check(self.height_m > 0.0 && self.height_m.is_finite(), "height_m > 0", self.height_m)?;
        check(
            self.min_spacing_m > 0.0 && self.min_spacing_m.is_finite(),
            "min_spacing_m > 0",
            self.min_spacing_m,
        )
    }
}

/// Transmission and removal parameters of the pathogen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathogenParams {
    /// Basic infection probability at unit distance.
    pub beta0: f64,
    /// Per-round removal probability of an infected plant.
    pub gamma: f64,
    /// Number of plants infected right after seeding (k).
    pub initial_infected: usize,
}

impl Default for PathogenParams {
    fn default() -> Self {
        Self {
            beta0: 0.003,
            gamma: 1.0 / 42.0,
            initial_infected: 3,
        }
    }
}

impl PathogenParams {
    pub fn validate(&self) -> Result<()> {
        check((0.0..=1.0).contains(&self.beta0), "0 <= beta0 <= 1", self.beta0)?;
        check(
            self.gamma > 0.0 && self.gamma <= 1.0,
            "0 < gamma <= 1",
            self.gamma,
        )?;
        check(
            self.initial_infected >= 1,
            "initial_infected >= 1",
            self.initial_infected,
        )
    }
}

/// Cost and revenue coefficients. Overheads are stored per plant and
/// multiplied by the population size when evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EconomicParams {
    pub seed_per_plant: f64,
    pub seed_overhead_coeff: f64,
    pub grow_per_plant: f64,
    pub grow_overhead_coeff: f64,
    pub harvest_per_plant: f64,
    pub harvest_overhead_coeff: f64,
    pub sell_price: f64,
    pub sell_discount: f64,
}

impl Default for EconomicParams {
    fn default() -> Self {
        Self {
            seed_per_plant: 0.01,
            seed_overhead_coeff: 0.14,
            grow_per_plant: 0.033,
            grow_overhead_coeff: 0.019,
            harvest_per_plant: 0.06,
            harvest_overhead_coeff: 0.11,
            sell_price: 5.32,
            sell_discount: 1.71,
        }
    }
}

impl EconomicParams {
    pub fn validate(&self) -> Result<()> {
        let non_negative = [
            (self.seed_per_plant, "seed_per_plant >= 0"),
            (self.seed_overhead_coeff, "seed_overhead_coeff >= 0"),
            (self.grow_per_plant, "grow_per_plant >= 0"),
            (self.grow_overhead_coeff, "grow_overhead_coeff >= 0"),
            (self.harvest_per_plant, "harvest_per_plant >= 0"),
            (self.harvest_overhead_coeff, "harvest_overhead_coeff >= 0"),
            (self.sell_discount, "sell_discount >= 0"),
        ];
        for (value, invariant) in non_negative {
            check(value >= 0.0 && value.is_finite(), invariant, value)?;
        }
        check(
            self.sell_price > 0.0 && self.sell_price.is_finite(),
            "sell_price > 0",
            self.sell_price,
        )
    }
}

/// Row and column spacing of the plant lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeedingStrategy {
    pub dx_m: f64,
    pub dy_m: f64,
}

impl Default for SeedingStrategy {
    fn default() -> Self {
        Self { dx_m: 0.2, dy_m: 0.2 }
    }
}

impl SeedingStrategy {
    pub fn new(dx_m: f64, dy_m: f64) -> Self {
        Self { dx_m, dy_m }
    }

    pub fn validate(&self) -> Result<()> {
        check(self.dx_m > 0.0 && self.dx_m.is_finite(), "dx_m > 0", self.dx_m)?;
        check(self.dy_m > 0.0 && self.dy_m.is_finite(), "dy_m > 0", self.dy_m)
    }

    /// Distance from a plant to its diagonal neighbour.
    pub fn diagonal_m(&self) -> f64 {
        self.dx_m.hypot(self.dy_m)
    }

    /// True when either spacing is below the minimal seeding distance.
    pub fn is_below_min_spacing(&self, field: &FieldSpec) -> bool {
        self.dx_m < field.min_spacing_m || self.dy_m < field.min_spacing_m
    }
}

/// How the initially infected plants are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementMode {
    /// Uniformly at random from the run's RNG stream.
    #[default]
    Random,
    /// Greedy metric k-center placement.
    WorstCase,
}

impl fmt::Display for PlacementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlacementMode::Random => "random",
            PlacementMode::WorstCase => "worst_case",
        })
    }
}

/// A complete, validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub field: FieldSpec,
    pub pathogen: PathogenParams,
    pub economics: EconomicParams,
    pub strategy: SeedingStrategy,
    /// Number of rounds T, seeding included.
    pub horizon_steps: usize,
    pub placement_mode: PlacementMode,
    pub rng_seed: u64,
    /// Keep only the first `n` lattice positions in row-major order.
    pub explicit_count: Option<usize>,
    /// Fixed infectious period of `ceil(1/gamma)` rounds instead of a
    /// per-round removal probability.
    pub deterministic_duration: bool,
    /// Pairs whose infection probability falls below this value are
    /// ignored. Zero disables the cutoff.
    pub infection_epsilon: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        scenario_default()
    }
}

/// The reference parameterization.
pub fn scenario_default() -> Scenario {
    Scenario {
        field: FieldSpec::default(),
        pathogen: PathogenParams::default(),
        economics: EconomicParams::default(),
        strategy: SeedingStrategy::default(),
        horizon_steps: 3,
        placement_mode: PlacementMode::Random,
        rng_seed: 0,
        explicit_count: None,
        deterministic_duration: false,
        infection_epsilon: 1e-6,
    }
}

impl Scenario {
    /// Checks every invariant, returning the first violation.
    pub fn validate(&self) -> Result<()> {
        self.field.validate()?;
        self.pathogen.validate()?;
        self.economics.validate()?;
        self.strategy.validate()?;
        check(self.horizon_steps >= 2, "horizon_steps >= 2", self.horizon_steps)?;
        check(
            self.infection_epsilon >= 0.0 && self.infection_epsilon.is_finite(),
            "infection_epsilon >= 0",
            self.infection_epsilon,
        )?;
        if let Some(n) = self.explicit_count {
            check(n >= 1, "explicit_count >= 1", n)?;
            let capacity = field::grid_capacity(&self.field, &self.strategy);
            if n > capacity {
                return Err(Error::CapacityExceeded {
                    requested: n,
                    capacity,
                });
            }
        }
        Ok(())
    }

    /// Radius beyond which a single infected plant's infection probability
    /// drops below `infection_epsilon`. Infinite when the cutoff is off.
    pub fn infection_cutoff_m(&self) -> f64 {
        if self.infection_epsilon > 0.0 {
            self.pathogen.beta0 / self.infection_epsilon
        } else {
            f64::INFINITY
        }
    }

    pub fn with_strategy(&self, strategy: SeedingStrategy) -> Scenario {
        Scenario {
            strategy,
            ..self.clone()
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Scenario> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
        Scenario::from_table(table)
    }

    /// Builds a scenario from an already parsed key-value table, e.g. after
    /// command-line overrides were merged into it.
    pub fn from_table(table: toml::Table) -> Result<Scenario> {
        let file: ScenarioFile = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
        let scenario = file.into_scenario();
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&ScenarioFile::from_scenario(self))
            .expect("scenario serialization cannot fail")
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let text = fs::read_to_string(path)?;
    Scenario::from_toml_str(&text)
}

/// Writes `scenario` in the format accepted by [`load_scenario`].
pub fn write_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, scenario.to_toml_string())?;
    Ok(())
}

fn check(ok: bool, invariant: &'static str, got: impl ToString) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(invariant, got))
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ScenarioFile {
    field: FieldSpec,
    pathogen: PathogenParams,
    economics: EconomicParams,
    strategy: SeedingStrategy,
    run: RunSection,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunSection {
    horizon_steps: usize,
    placement_mode: PlacementMode,
    #[serde(serialize_with = "ser_seed", deserialize_with = "de_seed")]
    rng_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    explicit_count: Option<usize>,
    deterministic_duration: bool,
    infection_epsilon: f64,
}

impl Default for RunSection {
    fn default() -> Self {
        let s = scenario_default();
        Self {
            horizon_steps: s.horizon_steps,
            placement_mode: s.placement_mode,
            rng_seed: s.rng_seed,
            explicit_count: s.explicit_count,
            deterministic_duration: s.deterministic_duration,
            infection_epsilon: s.infection_epsilon,
        }
    }
}

impl ScenarioFile {
    fn into_scenario(self) -> Scenario {
        Scenario {
            field: self.field,
            pathogen: self.pathogen,
            economics: self.economics,
            strategy: self.strategy,
            horizon_steps: self.run.horizon_steps,
            placement_mode: self.run.placement_mode,
            rng_seed: self.run.rng_seed,
            explicit_count: self.run.explicit_count,
            deterministic_duration: self.run.deterministic_duration,
            infection_epsilon: self.run.infection_epsilon,
        }
    }

    fn from_scenario(s: &Scenario) -> Self {
        Self {
            field: s.field,
            pathogen: s.pathogen,
            economics: s.economics,
            strategy: s.strategy,
            run: RunSection {
                horizon_steps: s.horizon_steps,
                placement_mode: s.placement_mode,
                rng_seed: s.rng_seed,
                explicit_count: s.explicit_count,
                deterministic_duration: s.deterministic_duration,
                infection_epsilon: s.infection_epsilon,
            },
        }
    }
}

// TOML integers are signed 64-bit; seeds above i64::MAX are written as strings.
fn ser_seed<S: Serializer>(seed: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(*seed) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&seed.to_string()),
    }
}

fn de_seed<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<u64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Int(v) => u64::try_from(v).map_err(|_| serde::de::Error::custom("rng_seed must be >= 0")),
        Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
    }
}
