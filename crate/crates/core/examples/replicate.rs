//! Runs the default seeded soup and prints each replication as it happens.
//!
//! cargo run --release -p replicon-core --example replicate -- [rng_seed] [steps]

use std::ops::ControlFlow;

use replicon_core::{run_scenario_with, ReplicationRecord, RunObserver, Scenario, StepEvents, World};

struct Printer;

impl RunObserver for Printer {
    fn on_step(&mut self, _: &World, _: &StepEvents, found: &[ReplicationRecord]) -> ControlFlow<()> {
        for r in found {
            println!("step {:>7}: {} -> {}", r.step, r.parent_bits, r.daughter_bits);
        }
        ControlFlow::Continue(())
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let rng_seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let max_steps = args.next().map(|s| s.parse()).transpose()?.unwrap_or(150_000);
    let scenario = Scenario {
        rng_seed,
        max_steps,
        ..Scenario::seeded()
    };
    let report = run_scenario_with(&scenario, &mut Printer)?;
    println!("final strands: {:?}", report.final_census);
    Ok(())
}
