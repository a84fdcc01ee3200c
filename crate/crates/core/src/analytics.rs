//! Reproduction numbers, plane fitting, paired t-tests and replicate
//! summaries.

use crate::epidemic::{EpidemicTrajectory, SimulationResult};
use crate::error::{Error, Result};

/// Per-round reproduction number for rounds `1..T` and its mean.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct R0Series {
    pub r0_t: Vec<f64>,
    pub mean_r0: f64,
}

/// R0(t) = (I(t+1) - I(t)) / (R(t+1) - R(t)) when removals grew, and
/// I(t+1) - I(t) otherwise. The last round has no successor and is left out.
pub fn r0_series(trajectory: &EpidemicTrajectory) -> R0Series {
    let i = &trajectory.i_count;
    let r = &trajectory.r_count;
    let r0_t: Vec<f64> = (0..trajectory.len().saturating_sub(1))
        .map(|t| {
            let di = i[t + 1] as f64 - i[t] as f64;
            if r[t + 1] > r[t] {
                di / (r[t + 1] - r[t]) as f64
            } else {
                di
            }
        })
        .collect();
    let mean_r0 = mean(&r0_t);
    R0Series { r0_t, mean_r0 }
}

/// Least-squares plane `y = coeff_beta0 * beta0 + coeff_gamma * gamma + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityFit {
    pub coeff_beta0: f64,
    pub coeff_gamma: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl SensitivityFit {
    pub fn predict(&self, beta0: f64, gamma: f64) -> f64 {
        self.coeff_beta0 * beta0 + self.coeff_gamma * gamma + self.intercept
    }
}

/// Ordinary least squares through the 3x3 normal equations, solved by
/// Gaussian elimination with partial pivoting.
///
/// R² is `1 - SS_res / SS_tot`, and 1 when the responses are constant.
pub fn fit_plane(xs: &[(f64, f64)], ys: &[f64]) -> Result<SensitivityFit> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 3 {
        return Err(Error::TooFewSamples {
            min: 3,
            got: xs.len(),
        });
    }

    // Columns are centred first: the normal matrix becomes block diagonal
    // and the conditioning no longer depends on how far the inputs sit from
    // the origin.
    let n = xs.len() as f64;
    let mx = xs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xs.iter().map(|p| p.1).sum::<f64>() / n;
    let ybar = mean(ys);

    let mut a = [[0.0_f64; 3]; 3];
    let mut b = [0.0_f64; 3];
    for (&(x1, x2), &y) in xs.iter().zip(ys) {
        let row = [x1 - mx, x2 - my, 1.0];
        for r in 0..3 {
            for c in 0..3 {
                a[r][c] += row[r] * row[c];
            }
            b[r] += row[r] * (y - ybar);
        }
    }
    let scale = a[0][0].max(a[1][1]).max(a[2][2]);
    let sol = solve3(a, b, scale)?;
    let (coeff_beta0, coeff_gamma) = (sol[0], sol[1]);
    let intercept = ybar + sol[2] - coeff_beta0 * mx - coeff_gamma * my;

    let ss_tot: f64 = ys.iter().map(|y| (y - ybar).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&(x1, x2), &y)| (y - (coeff_beta0 * x1 + coeff_gamma * x2 + intercept)).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };

    Ok(SensitivityFit {
        coeff_beta0,
        coeff_gamma,
        intercept,
        r_squared,
    })
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3], scale: f64) -> Result<[f64; 3]> {
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[pivot][col].abs() <= tol {
            return Err(Error::Singular);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for c in col..3 {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedTTest {
    pub t_statistic: f64,
    pub dof: usize,
    pub p_two_sided: f64,
    pub mean_difference: f64,
}

/// Paired two-sided t-test on `a[i] - b[i]`.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<PairedTTest> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::TooFewSamples { min: 2, got: a.len() });
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let stats = MeanStd::from_samples(&diffs);
    // Relative threshold: differences that agree to rounding error are a
    // constant shift, not a distribution.
    let magnitude = diffs.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    if stats.std <= 1e-12 * magnitude || stats.std == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let n = diffs.len() as f64;
    let t_statistic = stats.mean / (stats.std / n.sqrt());
    let dof = diffs.len() - 1;
    Ok(PairedTTest {
        t_statistic,
        dof,
        p_two_sided: student_t_two_sided_p(t_statistic, dof as f64),
        mean_difference: stats.mean,
    })
}

/// Two-sided tail probability `P(|T| >= |t|)` of Student's t with `dof`
/// degrees of freedom: `I_{dof/(dof+t²)}(dof/2, 1/2)`.
pub fn student_t_two_sided_p(t: f64, dof: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let x = dof / (dof + t * t);
    regularized_incomplete_beta(x, dof / 2.0, 0.5)
}

/// Student-t cumulative distribution function.
pub fn student_t_cdf(t: f64, dof: f64) -> f64 {
    let tail = 0.5 * student_t_two_sided_p(t, dof);
    if t >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Regularized incomplete beta `I_x(a, b)`.
///
/// Evaluated with the modified Lentz continued fraction, using the symmetry
/// `I_x(a, b) = 1 - I_{1-x}(b, a)` when `x > (a + 1) / (a + b + 2)` so the
/// fraction converges quickly. Iterates until the relative change drops
/// below 1e-15 (at most 10 000 terms).
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_continued_fraction(x, a, b) / a
    } else {
        1.0 - ln_front.exp() * beta_continued_fraction(1.0 - x, b, a) / b
    }
}

fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-15;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Lanczos approximation (g = 7, 9 coefficients) of `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEFFS[0];
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Sample mean and standard deviation (n - 1 denominator; 0 for one sample).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

impl MeanStd {
    pub fn from_samples(xs: &[f64]) -> Self {
        let count = xs.len();
        let m = mean(xs);
        let std = if count < 2 {
            0.0
        } else {
            (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        };
        Self { mean: m, std, count }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReplicateSummary {
    pub total_profit: MeanStd,
    pub mean_r0: MeanStd,
}

pub fn summarize_replicates(results: &[SimulationResult]) -> ReplicateSummary {
    let profits: Vec<f64> = results.iter().map(SimulationResult::total_profit).collect();
    let r0s: Vec<f64> = results.iter().map(SimulationResult::mean_r0).collect();
    ReplicateSummary {
        total_profit: MeanStd::from_samples(&profits),
        mean_r0: MeanStd::from_samples(&r0s),
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}
