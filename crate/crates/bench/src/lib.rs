//! Fixtures shared by the benchmarks.

use replicon_core::{Scenario, Simulation, World};

/// The default seeded soup after `warmup` steps, so strands exist.
pub fn warmed_world(warmup: u64) -> World {
    let world = Scenario::seeded()
        .build_world()
        .expect("default scenario is valid");
    let mut sim = Simulation::new(world);
    sim.run(warmup).expect("default scenario is stable");
    sim.into_world()
}

/// A soup of `n` free codons in a square sized for the default density.
pub fn soup(n: usize) -> World {
    let side = 200.0 * (n as f64 / 88.0).sqrt();
    Scenario {
        seed_bits: None,
        free_codon_count: n,
        container: replicon_core::Container::new(side, side),
        ..Scenario::seeded()
    }
    .build_world()
    .expect("soup scenario is valid")
}
