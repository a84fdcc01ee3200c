use std::fs;
use std::path::Path;

use fieldopt::analytics::MeanStd;
use fieldopt::harness::*;
use fieldopt::optimizer::ScoreMode;
use fieldopt::{Error, FieldSpec, Scenario};

fn small_field() -> Scenario {
    Scenario {
        field: FieldSpec::new(3.0, 3.0, 0.1),
        ..Scenario::default()
    }
}

fn line_count(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count()
}

#[test]
fn baseline_has_one_row_per_size_and_round() {
    let dir = tempfile::tempdir().unwrap();
    let spec = BaselineSpec {
        base: small_field(),
        sizes: vec![16, 100, 400],
        replicates: 4,
        master_seed: 1,
    };
    let report = run_baseline(&spec, Some(dir.path())).unwrap();
    assert_eq!(report.rows.len(), 3 * 3);
    assert_eq!(line_count(&dir.path().join("baseline.csv")), 1 + 9);
    let text = fs::read_to_string(dir.path().join("baseline.csv")).unwrap();
    assert!(text.starts_with("t,size_label,mean_r0,std_r0,mean_profit,std_profit\n"));
    // R0 is undefined in the final round
    assert!(report.rows.iter().filter(|r| r.t == 3).all(|r| r.mean_r0.is_none()));
    assert_eq!(report.sizes.iter().map(|s| s.size).collect::<Vec<_>>(), [16, 100, 400]);
}

#[test]
fn single_replicate_has_zero_spread() {
    let spec = BaselineSpec {
        base: small_field(),
        sizes: vec![100],
        replicates: 1,
        master_seed: 0,
    };
    let report = run_baseline(&spec, None).unwrap();
    assert_eq!(report.rows.len(), 3);
    for r in &report.rows {
        assert_eq!(r.std_profit, 0.0);
        assert!(r.std_r0.unwrap_or(0.0) == 0.0);
    }
}

#[test]
fn baseline_rejects_empty_configuration() {
    let mut spec = BaselineSpec {
        base: small_field(),
        sizes: vec![],
        replicates: 2,
        master_seed: 0,
    };
    assert!(run_baseline(&spec, None).is_err());
    spec.sizes = vec![100];
    spec.replicates = 0;
    assert!(run_baseline(&spec, None).is_err());
}

fn sweep_spec() -> PathogenSweepSpec {
    PathogenSweepSpec {
        base: small_field(),
        beta0_values: vec![0.001, 0.003, 0.005],
        gamma_values: vec![1.0 / 65.0, 1.0 / 42.0, 1.0 / 21.0],
        replicates: 5,
        master_seed: 2,
    }
}

#[test]
fn pathogen_sweep_writes_cells_and_fits() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_pathogen_sweep(&sweep_spec(), Some(dir.path())).unwrap();
    assert_eq!(report.cells.len(), 9);
    assert!(report.r0_fit.is_some() && report.profit_fit.is_some());
    assert_eq!(line_count(&dir.path().join("pathogen_sweep.csv")), 10);
    assert_eq!(line_count(&dir.path().join("fits.csv")), 3);
    let base = report.cell(0.003, 1.0 / 42.0).unwrap();
    assert_eq!(base.rel_profit, 1.0);
}

#[test]
fn baseline_only_grid_is_relative_one() {
    let spec = PathogenSweepSpec {
        beta0_values: vec![0.003],
        gamma_values: vec![1.0 / 42.0],
        ..sweep_spec()
    };
    let report = run_pathogen_sweep(&spec, None).unwrap();
    assert_eq!(report.cells.len(), 1);
    assert_eq!(report.cells[0].rel_r0, 1.0);
    assert_eq!(report.cells[0].rel_profit, 1.0);
    assert!(report.r0_fit.is_none());
}

#[test]
fn sweep_without_baseline_cell_fails() {
    let spec = PathogenSweepSpec {
        beta0_values: vec![0.001, 0.002],
        ..sweep_spec()
    };
    assert!(matches!(
        run_pathogen_sweep(&spec, None),
        Err(Error::MissingBaseline { .. })
    ));
}

#[test]
fn planted_response_surface_is_recovered() {
    let (a_r0, b_r0, c_r0) = (300.0, -20.0, 2.0);
    let (a_p, b_p, c_p) = (-5000.0, 800.0, 100.0);
    let report = run_pathogen_sweep_with(&sweep_spec(), None, |sc, _, _| {
        let (b, g) = (sc.pathogen.beta0, sc.pathogen.gamma);
        let exact = |v: f64| MeanStd { mean: v, std: 0.0, count: 1 };
        Ok((exact(a_r0 * b + b_r0 * g + c_r0), exact(a_p * b + b_p * g + c_p)))
    })
    .unwrap();
    // relative responses: the plane divided by the baseline value
    let r0_base = a_r0 * 0.003 + b_r0 / 42.0 + c_r0;
    let p_base = a_p * 0.003 + b_p / 42.0 + c_p;
    let r0 = report.r0_fit.unwrap();
    let p = report.profit_fit.unwrap();
    assert_eq!(r0.scale, FitScale::Relative);
    assert!((r0.fit.coeff_beta0 - a_r0 / r0_base).abs() < 1e-8);
    assert!((r0.fit.coeff_gamma - b_r0 / r0_base).abs() < 1e-8);
    assert!((r0.fit.intercept - c_r0 / r0_base).abs() < 1e-8);
    assert!((p.fit.coeff_beta0 - a_p / p_base).abs() < 1e-8);
    assert!((p.fit.r_squared - 1.0).abs() < 1e-12);
}

#[test]
fn economic_sweep_rows_and_baseline_marker() {
    let dir = tempfile::tempdir().unwrap();
    let base = small_field();
    let spec = EconomicSweepSpec {
        base: base.clone(),
        sweeps: vec![
            (EconomicRatio::PriceToDiscount, vec![1.0, 2.0, 4.0]),
            (EconomicRatio::GrowPerPlantToOverhead, vec![EconomicRatio::GrowPerPlantToOverhead.value(&base.economics)]),
        ],
        replicates: 3,
        master_seed: 0,
    };
    let rows = run_economic_sweep(&spec, Some(dir.path())).unwrap();
    // three values plus the inserted baseline, then a single-point sweep
    assert_eq!(rows.len(), 4 + 1);
    assert_eq!(rows.iter().filter(|r| r.is_baseline).count(), 2);
    assert_eq!(line_count(&dir.path().join("econ_sweep.csv")), 6);
    let psi: Vec<f64> = rows[..4].iter().map(|r| r.profit.mean).collect();
    assert!(psi.windows(2).all(|w| w[1] > w[0]));
}

fn comparison_spec(instances: usize) -> ComparisonSpec {
    ComparisonSpec {
        base: small_field(),
        instances,
        width_range: (1.0, 3.0),
        height_range: (1.0, 3.0),
        replicates: 3,
        ..ComparisonSpec::default()
    }
}

#[test]
fn comparison_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_optimal_comparison(&comparison_spec(10), Some(dir.path())).unwrap();
    assert_eq!(out.rows.len(), 40);
    assert_eq!(out.summaries.len(), 2);
    assert_eq!(line_count(&dir.path().join("comparison.csv")), 1 + 40 + 2);
}

#[test]
fn collapsed_ranges_repeat_one_instance() {
    let spec = ComparisonSpec {
        width_range: (2.0, 2.0),
        height_range: (1.5, 1.5),
        beta0_range: (0.003, 0.003),
        gamma_range: (0.05, 0.05),
        ..comparison_spec(3)
    };
    let out = run_optimal_comparison(&spec, None).unwrap();
    let first: Vec<_> = out.rows.iter().filter(|r| r.instance == 0).collect();
    for r in &out.rows {
        assert_eq!(r.field, first[0].field);
        assert_eq!(r.beta0, 0.003);
    }
    for pair in out.rows.chunks(2) {
        assert!(pair[1].analytic_profit >= pair[0].analytic_profit);
    }
}

#[test]
fn no_transmission_means_no_new_infections() {
    let spec = ComparisonSpec {
        beta0_range: (0.0, 0.0),
        mode: ScoreMode::Analytic,
        ..comparison_spec(3)
    };
    let out = run_optimal_comparison(&spec, None).unwrap();
    assert!(out.rows.iter().all(|r| r.mean_r0 <= 0.0));
}

#[test]
fn reruns_are_byte_identical() {
    let run_all = |dir: &Path| {
        let base = small_field();
        run_experiment(&ExperimentSpec {
            experiment: Experiment::Baseline(BaselineSpec {
                base: base.clone(),
                sizes: vec![25, 100],
                replicates: 3,
                master_seed: 4,
            }),
            out_dir: dir.to_path_buf(),
        })
        .unwrap();
        run_experiment(&ExperimentSpec {
            experiment: Experiment::PathogenSweep(PathogenSweepSpec {
                replicates: 3,
                ..sweep_spec()
            }),
            out_dir: dir.to_path_buf(),
        })
        .unwrap();
        run_experiment(&ExperimentSpec {
            experiment: Experiment::EconomicSweep(EconomicSweepSpec {
                base,
                replicates: 3,
                ..EconomicSweepSpec::default()
            }),
            out_dir: dir.to_path_buf(),
        })
        .unwrap();
        run_experiment(&ExperimentSpec {
            experiment: Experiment::OptimalComparison(comparison_spec(4)),
            out_dir: dir.to_path_buf(),
        })
        .unwrap();
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_all(a.path());
    run_all(b.path());
    for name in ["baseline.csv", "pathogen_sweep.csv", "fits.csv", "econ_sweep.csv", "comparison.csv"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{name} differs between runs");
    }
}
