//! Writes a scenario to TOML, edits it as text and loads it back.
//!
//! ```text
//! cargo run --example scenario_file
//! ```

use fieldopt::{load_scenario, scenario::write_scenario, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("fieldopt-scenario-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("scenario.toml");

    write_scenario(&Scenario::default(), &path)?;
    let text = std::fs::read_to_string(&path)?;
    println!("{text}");

    let edited = text.replace("beta0 = 0.003", "beta0 = 0.005");
    std::fs::write(&path, edited)?;
    let loaded = load_scenario(&path)?;
    println!("reloaded beta0 = {}", loaded.pathogen.beta0);

    // Unknown keys and broken invariants are rejected with a named reason.
    for bad in ["[field]\nwidth = 3\n", "[pathogen]\ngamma = 0\n"] {
        match Scenario::from_toml_str(bad) {
            Ok(_) => println!("unexpectedly accepted {bad:?}"),
            Err(e) => println!("rejected: {e}"),
        }
    }
    Ok(())
}
