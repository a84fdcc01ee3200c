//! Replicated runs over a (beta0, gamma) grid and the plane fitted to the
//! relative responses.

use fieldopt::harness::{run_pathogen_sweep, PathogenSweepSpec};

fn main() -> fieldopt::Result<()> {
    let spec = PathogenSweepSpec {
        replicates: 20,
        ..PathogenSweepSpec::default()
    };
    let report = run_pathogen_sweep(&spec, Some("results".as_ref()))?;
    for c in &report.cells {
        println!(
            "beta0={:.3} gamma={:.4}  E[R0]={:8.3} ({:.3}x)  profit={:10.2} ({:.3}x)",
            c.beta0, c.gamma, c.mean_r0.mean, c.rel_r0, c.profit.mean, c.rel_profit
        );
    }
    for (name, fit) in [("E[R0]", report.r0_fit), ("profit", report.profit_fit)] {
        if let Some(f) = fit {
            println!(
                "{name}: {:.3} beta0 + {:.3} gamma + {:.3} (R^2 {:.3}, {:?})",
                f.fit.coeff_beta0, f.fit.coeff_gamma, f.fit.intercept, f.fit.r_squared, f.scale
            );
        }
    }
    Ok(())
}
