//! Profit as each economic ratio moves, re-pricing one set of epidemics.

use fieldopt::harness::{run_economic_sweep, EconomicSweepSpec};

fn main() -> fieldopt::Result<()> {
    let spec = EconomicSweepSpec {
        replicates: 20,
        ..EconomicSweepSpec::default()
    };
    let rows = run_economic_sweep(&spec, Some("results".as_ref()))?;
    for r in rows {
        println!(
            "{:10} ({} varied) {:>8} -> {:>12.2} ± {:.2}{}",
            r.ratio.label(),
            r.ratio.varied(),
            r.ratio_value,
            r.profit.mean,
            r.profit.std,
            if r.is_baseline { "  <- baseline" } else { "" }
        );
    }
    Ok(())
}
