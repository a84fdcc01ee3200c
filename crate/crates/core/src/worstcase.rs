//! Worst-case placement and the analytic surviving-plant bound.
//!
//! The initially infected plants are placed by greedy metric k-center
//! (farthest-first traversal). Removals are bounded by letting the infected
//! population grow geometrically with ratio `q = beta0 / r`, where
//! `r = sqrt(dx² + dy²)`:
//!
//! ```text
//! removed(T) <= gamma * k * sum_{t=1..T} q^(t-1) = gamma * k * (q^T - 1) / (q - 1)
//! ```
//!
//! The closed form as commonly printed carries an extra `q` in the
//! denominator; it is available as [`BoundVariant::PaperExact`].

use crate::economics::{self, economic_series_from_counts};
use crate::error::{Error, Result};
use crate::field;
use crate::scenario::{EconomicParams, FieldSpec, PathogenParams, SeedingStrategy};

/// Below this distance from 1 the sum is expanded around `q = 1`.
const UNIT_RATIO_TOL: f64 = 1e-12;

/// Farthest-first traversal. Starts at the point nearest the centroid of
/// `positions`, then repeatedly adds the point farthest from its nearest
/// chosen center. Ties go to the lowest index. The resulting radius is at
/// most twice the optimal k-center radius.
pub fn kcenter_greedy(positions: &[(f64, f64)], k: usize) -> Result<Vec<usize>> {
    let n = positions.len();
    if k == 0 || k > n {
        return Err(Error::TooManyInfected {
            requested: k,
            count: n,
        });
    }
    let (sx, sy) = positions
        .iter()
        .fold((0.0, 0.0), |(ax, ay), &(x, y)| (ax + x, ay + y));
    let centroid = (sx / n as f64, sy / n as f64);
    let first = argmax_lowest(positions.iter().map(|&p| -dist(p, centroid)));

    let mut centers = Vec::with_capacity(k);
    centers.push(first);
    let mut nearest: Vec<f64> = positions.iter().map(|&p| dist(p, positions[first])).collect();
    while centers.len() < k {
        let next = argmax_lowest(nearest.iter().copied());
        centers.push(next);
        for (d, &p) in nearest.iter_mut().zip(positions) {
            *d = d.min(dist(p, positions[next]));
        }
    }
    Ok(centers)
}

/// Largest distance from any point to its nearest center.
pub fn kcenter_radius(positions: &[(f64, f64)], centers: &[usize]) -> f64 {
    positions
        .iter()
        .map(|&p| {
            centers
                .iter()
                .map(|&c| dist(p, positions[c]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

fn argmax_lowest(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Which closed form of the removal bound to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundVariant {
    /// `gamma * k * (q^T - 1) / (q - 1)`, the geometric sum itself.
    #[default]
    GeometricSum,
    /// `gamma * k * (q^T - 1) / (q * (q - 1))`.
    PaperExact,
}

/// Upper bound on plants removed after `horizon` rounds.
pub fn removal_bound(
    beta0: f64,
    gamma: f64,
    k: usize,
    r_m: f64,
    horizon: usize,
    variant: BoundVariant,
) -> Result<f64> {
    if r_m.is_nan() || r_m <= 0.0 {
        return Err(Error::invalid("r_m > 0", r_m));
    }
    let q = beta0 / r_m;
    let scale = gamma * k as f64;
    let t = horizon as f64;
    let sum = if horizon == 0 {
        0.0
    } else if (q - 1.0).abs() < UNIT_RATIO_TOL {
        // first-order expansion around q = 1; exactly T at q = 1
        t + t * (t - 1.0) / 2.0 * (q - 1.0)
    } else {
        // q^T - 1 via expm1/ln1p keeps full precision for q near 1
        (t * (q - 1.0).ln_1p()).exp_m1() / (q - 1.0)
    };
    Ok(match variant {
        BoundVariant::GeometricSum => scale * sum,
        BoundVariant::PaperExact => scale * sum / q,
    })
}

/// The bound evaluated for one seeding strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstCaseBound {
    pub r_m: f64,
    pub q: f64,
    /// Bound on removals by the end of the season.
    pub removed_total_bound: f64,
    /// `N_t` for rounds `1..=T`.
    pub n_t_series: Vec<f64>,
}

impl WorstCaseBound {
    pub fn compute(
        plant_count: usize,
        strategy: &SeedingStrategy,
        pathogen: &PathogenParams,
        horizon: usize,
        variant: BoundVariant,
    ) -> Result<Self> {
        let r_m = strategy.diagonal_m();
        let params = BoundParams {
            beta0: pathogen.beta0,
            gamma: pathogen.gamma,
            k: pathogen.initial_infected,
            r_m,
            variant,
        };
        let n_t_series = (1..=horizon)
            .map(|t| analytic_nt(plant_count as f64, &params, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            r_m,
            q: pathogen.beta0 / r_m,
            removed_total_bound: params.removed_by(horizon)?,
            n_t_series,
        })
    }
}

/// Inputs of [`removal_bound`] other than the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub beta0: f64,
    pub gamma: f64,
    pub k: usize,
    pub r_m: f64,
    pub variant: BoundVariant,
}

impl BoundParams {
    fn removed_by(&self, t: usize) -> Result<f64> {
        removal_bound(self.beta0, self.gamma, self.k, self.r_m, t, self.variant)
    }
}

/// Surviving plants at round `t`: `N - bound(t)`, never below zero.
pub fn analytic_nt(plant_count: f64, params: &BoundParams, t: usize) -> Result<f64> {
    Ok((plant_count - params.removed_by(t)?).max(0.0))
}

/// Season profit with surviving plants taken from the analytic bound.
///
/// Returns 0 when the spacing exceeds the field in either axis (nothing is
/// seeded) and only the seeding cost when the spacing is below the minimal
/// seeding distance.
pub fn analytic_profit(
    field: &FieldSpec,
    strategy: &SeedingStrategy,
    pathogen: &PathogenParams,
    econ: &EconomicParams,
    horizon: usize,
    variant: BoundVariant,
) -> Result<f64> {
    if strategy.dx_m > field.width_m || strategy.dy_m > field.height_m {
        return Ok(0.0);
    }
    let n = field::grid_capacity(field, strategy);
    if strategy.is_below_min_spacing(field) {
        return Ok(-economics::seeding_cost(n as f64, econ)?);
    }
    let bound = WorstCaseBound::compute(n, strategy, pathogen, horizon, variant)?;
    // Round 1 is priced on N - gamma*k as well: the bound's first term is
    // kept even though no removal has happened yet.
    Ok(economic_series_from_counts(&bound.n_t_series, econ, false)?.total_profit)
}
