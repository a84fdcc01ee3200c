//! The analytic removal bound and the profit it implies for a few spacings.

use fieldopt::worstcase::{self, WorstCaseBound};
use fieldopt::{field, BoundVariant, Scenario, SeedingStrategy};

fn main() -> fieldopt::Result<()> {
    let sc = Scenario::default();
    println!("{:>6} {:>6} {:>8} {:>10} {:>14} {:>14}", "dx", "dy", "N", "q", "removed<=", "profit");
    for spacing in [0.1, 0.2, 0.5, 1.0, 2.0] {
        let s = SeedingStrategy::new(spacing, spacing);
        let n = field::grid_capacity(&sc.field, &s);
        let bound = WorstCaseBound::compute(n, &s, &sc.pathogen, sc.horizon_steps, BoundVariant::GeometricSum)?;
        let profit = worstcase::analytic_profit(
            &sc.field,
            &s,
            &sc.pathogen,
            &sc.economics,
            sc.horizon_steps,
            BoundVariant::GeometricSum,
        )?;
        println!(
            "{:>6} {:>6} {:>8} {:>10.5} {:>14.6} {:>14.2}",
            s.dx_m, s.dy_m, n, bound.q, bound.removed_total_bound, profit
        );
    }

    let positions: Vec<(f64, f64)> = (0..25).map(|i| ((i % 5) as f64, (i / 5) as f64)).collect();
    let centers = worstcase::kcenter_greedy(&positions, 3)?;
    println!(
        "k-center seeds on a 5x5 lattice: {centers:?}, radius {:.3}",
        worstcase::kcenter_radius(&positions, &centers)
    );
    Ok(())
}
