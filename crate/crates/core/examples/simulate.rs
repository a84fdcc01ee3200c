//! One seeded season on a 10 m x 10 m field, printed round by round.

use fieldopt::{harness, PlacementMode, Simulation};

fn main() -> fieldopt::Result<()> {
    let mut scenario = harness::desk_scenario();
    for placement in [PlacementMode::Random, PlacementMode::WorstCase] {
        scenario.placement_mode = placement;
        let result = Simulation::new(&scenario)?.run_with_seed(7)?;
        println!("{placement} placement, {} plants, seeds {:?}", result.plant_count, result.initial_infected);
        let t = &result.trajectory;
        let cumulative = result.economics.cumulative();
        for round in 0..t.len() {
            println!(
                "  t={} S={:5} I={:5} R={:5} profit so far {:10.2}",
                round + 1,
                t.s_count[round],
                t.i_count[round],
                t.r_count[round],
                cumulative[round]
            );
        }
        println!("  E[R0] = {:.3}", result.mean_r0());
    }
    Ok(())
}
