use std::io;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// The scenario file is not well-formed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A configuration value violates a documented invariant. `invariant`
    /// is the invariant as written in the docs, e.g. `dx_m > 0`.
    #[error("validation error: {invariant} (got {got})")]
    Invalid { invariant: &'static str, got: String },

    #[error("explicit_count {requested} exceeds grid capacity {capacity}")]
    CapacityExceeded { requested: usize, capacity: usize },

    #[error("plant index {index} out of range for {count} plants")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("cannot place {requested} initial infections among {count} plants")]
    TooManyInfected { requested: usize, count: usize },

    #[error("infection probability undefined at distance 0")]
    ZeroDistance,

    #[error("plant count must be at least {min} (got {got})")]
    PlantCount { min: usize, got: f64 },

    #[error("trajectory has {got} rounds, need at least {min}")]
    ShortTrajectory { got: usize, min: usize },

    #[error("trajectory population {trajectory} does not match {expected} seeded plants")]
    PopulationMismatch { trajectory: usize, expected: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("normal equations are singular (collinear inputs)")]
    Singular,

    #[error("differences have zero variance")]
    ZeroVariance,

    #[error("infeasible: W or H below minimal seeding distance")]
    Infeasible,

    #[error("baseline cell (beta0={beta0}, gamma={gamma}) is not in the sweep grid")]
    MissingBaseline { beta0: f64, gamma: f64 },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(invariant: &'static str, got: impl ToString) -> Self {
        Error::Invalid {
            invariant,
            got: got.to_string(),
        }
    }

    /// True for failures caused by the filesystem rather than bad input.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_)) || matches!(self, Error::Csv(e) if e.is_io_error())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
