//! Self-replicating codon strands in a 2-D viscous container.

pub mod bonding;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod model;
pub mod params;
pub mod signals;
pub mod spatial;
pub mod strands;
pub mod world;

pub use bonding::{BondEvent, BondKind};
pub use error::{BitsError, Result, SimError};
pub use harness::{
    run_scenario, run_scenario_with, run_world, ReplicationRecord, RunObserver, RunReport, Runner, Scenario,
    Simulation, StepEvents,
};
pub use model::{
    Arm, Codon, CodonId, CodonType, Container, FieldKind, FieldSize, LocationState, Pose, SplittingState,
    Vec2, Velocity,
};
pub use params::{FieldRadii, SimParams};
pub use signals::SplitEvent;
pub use strands::{extract_strands, mirror, negate, reverse, symmetrize, StrandRecord};
pub use world::World;
