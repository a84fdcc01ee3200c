//! Same field, three population sizes: mean R0 per round and cumulative
//! profit, written to `results/baseline.csv`.

use fieldopt::harness::{run_baseline, BaselineSpec};

fn main() -> fieldopt::Result<()> {
    let spec = BaselineSpec {
        replicates: 20,
        ..BaselineSpec::default()
    };
    let report = run_baseline(&spec, Some("results".as_ref()))?;
    for row in &report.rows {
        println!(
            "N={:>6} t={} mean_r0={:>10} mean_profit={:>12.2}",
            row.size_label,
            row.t,
            row.mean_r0.map(|r| format!("{r:.3}")).unwrap_or_default(),
            row.mean_profit
        );
    }
    Ok(())
}
