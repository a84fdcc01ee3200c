//! Default 0.2 m spacing against the searched optimum on random instances,
//! under random and worst-case placement of the first infections.

use fieldopt::harness::{run_optimal_comparison, ComparisonSpec};

fn main() -> fieldopt::Result<()> {
    let spec = ComparisonSpec {
        instances: 10,
        width_range: (3.0, 8.0),
        height_range: (3.0, 8.0),
        ..ComparisonSpec::default()
    };
    let out = run_optimal_comparison(&spec, Some("results".as_ref()))?;
    for s in &out.summaries {
        match &s.t_test {
            Some(t) => println!(
                "{}: optimal - default = {:.2}, t = {:.3}, p = {:.3e}",
                s.placement, s.mean_difference, t.t_statistic, t.p_two_sided
            ),
            None => println!("{}: optimal - default = {:.2} ({})", s.placement, s.mean_difference, s.note),
        }
    }
    Ok(())
}
