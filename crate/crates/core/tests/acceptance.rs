//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when
//! any criterion fails. Runs as a plain binary (`harness = false`).

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use fieldopt::analytics::{fit_plane, paired_t_test};
use fieldopt::economics::{growing_cost, harvesting_cost, seeding_cost, sell_revenue};
use fieldopt::epidemic::{step, PlantState, RemovalRule, Simulation};
use fieldopt::field::layout_grid;
use fieldopt::harness::{self, EconomicRatio, EconomicSweepSpec, PathogenSweepSpec};
use fieldopt::optimizer::{self, OptimizeConfig, ScoreMode, Search};
use fieldopt::seed::{derive_seed, rng_from_seed};
use fieldopt::worstcase::{self, kcenter_greedy, kcenter_radius, removal_bound};
use fieldopt::{BoundVariant, EconomicParams, FieldSpec, PathogenParams, PlacementMode, Scenario, SeedingStrategy};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:.1?}, limit {limit:?}"))
}

fn desk_scenario_from(seed: u64) -> Scenario {
    let mut rng = rng_from_seed(seed);
    Scenario {
        field: FieldSpec::new(rng.random_range(1.0..10.0), rng.random_range(1.0..10.0), 0.1),
        pathogen: PathogenParams {
            beta0: rng.random_range(0.0..0.01),
            gamma: rng.random_range(1.0 / 65.0..=1.0),
            initial_infected: rng.random_range(1..=5),
        },
        // occasionally below the minimal spacing
        strategy: SeedingStrategy::new(rng.random_range(0.08..0.5), rng.random_range(0.08..0.5)),
        horizon_steps: rng.random_range(2..=10),
        placement_mode: if rng.random::<bool>() {
            PlacementMode::WorstCase
        } else {
            PlacementMode::Random
        },
        rng_seed: rng.random(),
        deterministic_duration: rng.random::<f64>() < 0.25,
        ..Scenario::default()
    }
}

fn conservation_and_determinism() -> Outcome {
    let start = Instant::now();
    let mut runs = 0;
    for i in 0..200 {
        let sc = desk_scenario_from(derive_seed(1, i, 0));
        let sim = Simulation::new(&sc).map_err(|e| format!("scenario {i}: {e}"))?;
        let a = sim.run().map_err(|e| e.to_string())?;
        let t = &a.trajectory;
        for r in 0..t.len() {
            ensure(t.s_count[r] + t.i_count[r] + t.r_count[r] == a.plant_count, || {
                format!("scenario {i}: S+I+R != N at round {}", r + 1)
            })?;
            ensure(r == 0 || t.r_count[r] >= t.r_count[r - 1], || {
                format!("scenario {i}: R decreased at round {}", r + 1)
            })?;
        }
        let b = Simulation::new(&sc).and_then(|s| s.run()).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("scenario {i}: rerun differs"))?;
        ensure(
            a.total_profit().to_bits() == b.total_profit().to_bits(),
            || format!("scenario {i}: profit bits differ"),
        )?;
        runs += 1;
    }
    within_time(start, Duration::from_secs(30))?;
    Ok(format!("{runs} scenarios in {:.1?}", start.elapsed()))
}

fn closed_form_economics() -> Outcome {
    let e = EconomicParams::default();
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for n in [1.0f64, 100.0, 25_000.0] {
        let ln = n.ln();
        let cases = [
            (seeding_cost(n, &e).unwrap(), 0.01 * ln + 0.14 * n),
            (growing_cost(n, &e).unwrap(), 0.033 * ln + 0.019 * n),
            (harvesting_cost(n, &e).unwrap(), 0.06 * ln + 0.11 * n),
            (sell_revenue(n, &e), 5.32 * n - 1.71 * ln),
        ];
        for (got, expect) in cases {
            worst = worst.max(rel(got, expect));
        }
    }
    ensure(worst <= 1e-9, || format!("max relative error {worst:e}"))?;
    let sell = sell_revenue(25_000.0, &e);
    ensure((sell - 132_982.683_5).abs() < 1e-3, || format!("sell(25000) = {sell}"))?;
    Ok(format!("max relative error {worst:.1e}, sell(25000) = {sell:.4}"))
}

fn bound_oracle() -> Outcome {
    let mut rng = rng_from_seed(3);
    let mut worst = 0.0f64;
    let mut degenerate = 0;
    for i in 0..10_000 {
        let gamma = rng.random_range(0.001..1.0);
        let k = rng.random_range(1..20usize);
        let horizon = rng.random_range(1..25usize);
        let r = rng.random_range(0.05..2.0);
        let beta0 = match i % 10 {
            0 => r,
            1 => r * (1.0 + rng.random_range(-5e-13..5e-13)),
            2 => r * (1.0 + rng.random_range(-1e-6..1e-6)),
            _ => rng.random_range(0.0..1.0),
        };
        let q = beta0 / r;
        let got = removal_bound(beta0, gamma, k, r, horizon, BoundVariant::GeometricSum).unwrap();
        let mut term = gamma * k as f64;
        let mut oracle = 0.0;
        for _ in 0..horizon {
            oracle += term;
            term *= q;
        }
        if (q - 1.0).abs() < 1e-12 {
            degenerate += 1;
        }
        worst = worst.max((got - oracle).abs() / oracle.abs().max(1.0));
        if q < 1.0 && q > 0.0 {
            let exact = removal_bound(beta0, gamma, k, r, horizon, BoundVariant::PaperExact).unwrap();
            let ratio_err = ((exact / got) - 1.0 / q).abs() * q;
            ensure(ratio_err <= 1e-12, || format!("PaperExact/GeometricSum off 1/q by {ratio_err:e} (q={q})"))?;
        }
    }
    ensure(worst <= 1e-12, || format!("max relative deviation {worst:e}"))?;
    ensure(degenerate > 0, || "degenerate branch never exercised".into())?;
    Ok(format!("10^4 tuples, {degenerate} on |q-1|<1e-12, max deviation {worst:.1e}"))
}

fn two_plant_calibration() -> Outcome {
    let start = Instant::now();
    let field = FieldSpec::new(0.2, 0.1, 0.1);
    let grid = layout_grid(&field, &SeedingStrategy::new(0.2, 0.2), None).map_err(|e| e.to_string())?;
    ensure(grid.count() == 2, || format!("{} plants", grid.count()))?;
    let pathogen = PathogenParams {
        beta0: 0.003,
        gamma: 1.0 / 42.0,
        initial_infected: 1,
    };
    let trials = 100_000u64;
    let mut hits = 0u64;
    for i in 0..trials {
        let mut rng = rng_from_seed(derive_seed(4, 0, i));
        let mut states = [PlantState::infected(1), PlantState::SUSCEPTIBLE];
        step(&grid, &mut states, &pathogen, RemovalRule::Geometric, 1, &mut rng).map_err(|e| e.to_string())?;
        hits += states[1].is_infected() as u64;
    }
    let p = 0.015;
    let freq = hits as f64 / trials as f64;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    ensure((freq - p).abs() <= 3.0 * sigma, || format!("frequency {freq} vs {p} (3 sigma = {:.5})", 3.0 * sigma))?;
    within_time(start, Duration::from_secs(10))?;
    Ok(format!("frequency {freq:.5} vs 0.015 (sigma {sigma:.5})"))
}

fn kcenter_quality() -> Outcome {
    fn exhaustive(points: &[(f64, f64)], k: usize) -> f64 {
        let n = points.len();
        let mut best = f64::INFINITY;
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            best = best.min(kcenter_radius(points, &combo));
            let mut i = k;
            loop {
                if i == 0 {
                    return best;
                }
                i -= 1;
                if combo[i] < n - k + i {
                    combo[i] += 1;
                    for j in i + 1..k {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    let mut rng = rng_from_seed(5);
    let mut instances = 0;
    let mut worst_ratio = 0.0f64;
    for n in 1..=12usize {
        for k in 1..=3usize.min(n) {
            for rep in 0..60 {
                let points: Vec<(f64, f64)> = if rep == 0 {
                    (0..n).map(|i| ((i % 4) as f64 * 0.2, (i / 4) as f64 * 0.2)).collect()
                } else {
                    (0..n).map(|_| (rng.random_range(0.0..10.0), rng.random_range(0.0..10.0))).collect()
                };
                let centers = kcenter_greedy(&points, k).map_err(|e| e.to_string())?;
                let greedy = kcenter_radius(&points, &centers);
                let best = exhaustive(&points, k);
                ensure(greedy <= 2.0 * best + 1e-12, || format!("n={n} k={k}: greedy {greedy} > 2 x {best}"))?;
                if best > 0.0 {
                    worst_ratio = worst_ratio.max(greedy / best);
                }
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} instances, worst greedy/optimal = {worst_ratio:.3}"))
}

fn sensitivity_trend() -> Outcome {
    let start = Instant::now();
    let spec = PathogenSweepSpec {
        base: harness::desk_scenario(),
        replicates: 50,
        ..PathogenSweepSpec::default()
    };
    let report = harness::run_pathogen_sweep(&spec, None).map_err(|e| e.to_string())?;
    for &gamma in &spec.gamma_values {
        let column: Vec<_> = spec
            .beta0_values
            .iter()
            .map(|&b| report.cell(b, gamma).expect("cell present"))
            .collect();
        for w in column.windows(2) {
            ensure(w[1].mean_r0.mean >= w[0].mean_r0.mean, || {
                format!("E[R0] fell from beta0={} to {} at gamma={gamma:.4}", w[0].beta0, w[1].beta0)
            })?;
            ensure(w[1].profit.mean <= w[0].profit.mean, || {
                format!("profit rose from beta0={} to {} at gamma={gamma:.4}", w[0].beta0, w[1].beta0)
            })?;
        }
    }
    let r0 = report.r0_fit.ok_or("no E[R0] fit")?;
    let profit = report.profit_fit.ok_or("no profit fit")?;
    ensure(r0.fit.coeff_beta0 > 0.0, || format!("E[R0] coeff_beta0 = {}", r0.fit.coeff_beta0))?;
    ensure(profit.fit.coeff_beta0 < 0.0, || format!("profit coeff_beta0 = {}", profit.fit.coeff_beta0))?;
    within_time(start, Duration::from_secs(120))?;
    Ok(format!(
        "coeff_beta0: E[R0] {:.3}, profit {:.4} ({:?} scale) in {:.1?}",
        r0.fit.coeff_beta0,
        profit.fit.coeff_beta0,
        r0.scale,
        start.elapsed()
    ))
}

fn economic_trends() -> Outcome {
    let spec = EconomicSweepSpec {
        base: harness::desk_scenario(),
        replicates: 50,
        ..EconomicSweepSpec::default()
    };
    let rows = harness::run_economic_sweep(&spec, None).map_err(|e| e.to_string())?;
    let means = |ratio: EconomicRatio| -> Vec<f64> {
        rows.iter().filter(|r| r.ratio == ratio).map(|r| r.profit.mean).collect()
    };
    let price = means(EconomicRatio::PriceToDiscount);
    let grow = means(EconomicRatio::GrowPerPlantToPrice);
    ensure(price.len() >= 2 && price.windows(2).all(|w| w[1] > w[0]), || {
        format!("psi1/psi2 means not strictly increasing: {price:?}")
    })?;
    ensure(grow.len() >= 2 && grow.windows(2).all(|w| w[1] <= w[0]), || {
        format!("a1g/psi1 means increase somewhere: {grow:?}")
    })?;
    Ok(format!("psi1/psi2 over {} values, a1g/psi1 over {} values", price.len(), grow.len()))
}

fn random_instance(seed: u64, w: (f64, f64)) -> Scenario {
    let mut rng = rng_from_seed(seed);
    Scenario {
        field: FieldSpec::new(rng.random_range(w.0..=w.1), rng.random_range(w.0..=w.1), 0.1),
        pathogen: PathogenParams {
            beta0: rng.random_range(0.001..=0.005),
            gamma: rng.random_range(1.0 / 65.0..=1.0 / 21.0),
            initial_infected: 3,
        },
        ..Scenario::default()
    }
}

fn optimizer_dominance() -> Outcome {
    let start = Instant::now();
    let default = SeedingStrategy::new(0.2, 0.2);
    let mut analytic_wins = 0;
    for i in 0..200 {
        let sc = random_instance(derive_seed(8, i, 0), (5.0, 20.0));
        let config = OptimizeConfig {
            include: vec![default],
            ..OptimizeConfig::default()
        };
        let best = optimizer::optimize(&sc, &config).map_err(|e| e.to_string())?;
        let default_profit = worstcase::analytic_profit(
            &sc.field,
            &default,
            &sc.pathogen,
            &sc.economics,
            sc.horizon_steps,
            BoundVariant::GeometricSum,
        )
        .map_err(|e| e.to_string())?;
        if best.best_profit >= default_profit {
            analytic_wins += 1;
        }
    }
    ensure(analytic_wins == 200, || format!("analytic: optimal >= default on {analytic_wins}/200"))?;

    // simulated scoring: search with the default among the candidates, then
    // compare both arms on fresh paired seeds
    let instances = 50;
    let mut simulated_wins = 0;
    for i in 0..instances {
        let sc = random_instance(derive_seed(9, i, 0), (2.0, 6.0));
        let config = OptimizeConfig {
            search: Search::MonteCarlo { budget: 40 },
            mode: ScoreMode::Simulated,
            n_reps: 30,
            base_seed: derive_seed(9, i, 1),
            include: vec![default],
            ..OptimizeConfig::default()
        };
        let best = optimizer::optimize(&sc, &config).map_err(|e| e.to_string())?;
        let report = optimizer::compare_strategies(&sc, default, best.best_strategy, 30, derive_seed(9, i, 2))
            .map_err(|e| e.to_string())?;
        let random = &report.by_placement[0];
        if random.optimal_arm.profit.mean >= random.default_arm.profit.mean {
            simulated_wins += 1;
        }
    }
    let share = simulated_wins as f64 / instances as f64;
    ensure(share >= 0.9, || format!("simulated: optimal >= default on {simulated_wins}/{instances}"))?;
    within_time(start, Duration::from_secs(300))?;
    Ok(format!(
        "analytic 200/200, simulated {simulated_wins}/{instances} in {:.1?}",
        start.elapsed()
    ))
}

fn plane_recovery() -> Outcome {
    let mut xs = Vec::new();
    for b in [0.001, 0.003, 0.005] {
        for g in [1.0 / 65.0, 1.0 / 42.0, 1.0 / 21.0] {
            xs.push((b, g));
        }
    }
    let planes = [(226.61, -42.88, 0.31), (-213.18, 38.52, 1.62), (1.0, 1.0, 0.0), (0.0, 0.0, 5.0)];
    let mut worst = 0.0f64;
    for (a, b, c) in planes {
        let ys: Vec<f64> = xs.iter().map(|&(x1, x2)| a * x1 + b * x2 + c).collect();
        let f = fit_plane(&xs, &ys).map_err(|e| e.to_string())?;
        worst = worst
            .max((f.coeff_beta0 - a).abs())
            .max((f.coeff_gamma - b).abs())
            .max((f.intercept - c).abs());
        ensure((f.r_squared - 1.0).abs() < 1e-12, || format!("R^2 = {}", f.r_squared))?;
    }
    ensure(worst <= 1e-8, || format!("max coefficient error {worst:e}"))?;
    Ok(format!("max coefficient error {worst:.1e}"))
}

fn baseline_density() -> Outcome {
    let start = Instant::now();
    let spec = harness::BaselineSpec {
        base: harness::desk_scenario(),
        sizes: vec![400, 2500, 10_000],
        replicates: 50,
        master_seed: 0,
    };
    let report = harness::run_baseline(&spec, None).map_err(|e| e.to_string())?;
    let r0: Vec<f64> = report.sizes.iter().map(|s| s.mean_r0.mean).collect();
    ensure(r0.windows(2).all(|w| w[1] >= w[0]), || format!("E[R0] by size: {r0:?}"))?;
    within_time(start, Duration::from_secs(120))?;
    Ok(format!("E[R0] for N = 400, 2500, 10000: {r0:.3?} in {:.1?}", start.elapsed()))
}

fn t_test_example() -> Outcome {
    let t = paired_t_test(&[1.0, 2.0, 3.0, 4.0, 5.0], &[0.0, 1.0, 2.0, 3.0, 3.0]).map_err(|e| e.to_string())?;
    ensure((t.t_statistic - 6.0).abs() <= 1e-9, || format!("t = {}", t.t_statistic))?;
    ensure(t.dof == 4, || format!("dof = {}", t.dof))?;
    Ok(format!("t = {:.12}, dof = {}, p = {:.6}", t.t_statistic, t.dof, t.p_two_sided))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("conservation and determinism over 200 scenarios", conservation_and_determinism),
        ("closed-form economics", closed_form_economics),
        ("removal bound vs term-by-term sum", bound_oracle),
        ("two-plant infection calibration", two_plant_calibration),
        ("k-center within twice the optimum", kcenter_quality),
        ("sensitivity trend and fit signs", sensitivity_trend),
        ("economic ratio trends", economic_trends),
        ("optimizer dominance", optimizer_dominance),
        ("plane fit recovers planted coefficients", plane_recovery),
        ("baseline E[R0] non-decreasing in N", baseline_density),
        ("paired t-test example", t_test_example),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
