//! Whole-state snapshots. A snapshot carries the RNG position and the
//! replication detector's bond ages, so resuming continues the exact
//! trajectory and event stream of the uninterrupted run.

use std::path::Path;

use anyhow::{bail, Context, Result};
use replicon_core::harness::{BondAge, ReplicationDetector, Runner};
use replicon_core::World;
use serde::{Deserialize, Serialize};

pub const SNAPSHOT_SCHEMA: &str = "replicon-snapshot";
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Snapshot {
    pub schema: String,
    pub version: u32,
    pub step: u64,
    pub normalized_time: f64,
    pub world: World,
    pub bond_ages: Vec<BondAge>,
}

impl Snapshot {
    pub fn capture(runner: &Runner) -> Self {
        let world = runner.world().clone();
        Self {
            schema: SNAPSHOT_SCHEMA.into(),
            version: SNAPSHOT_VERSION,
            step: world.step,
            normalized_time: world.normalized_time(),
            world,
            bond_ages: runner.detector.ages(),
        }
    }

    pub fn into_runner(self) -> Runner {
        Runner::resume(self.world, ReplicationDetector::from_ages(&self.bond_ages))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self)?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let snap: Snapshot =
            serde_json::from_str(&text).with_context(|| format!("parsing snapshot {}", path.display()))?;
        if snap.schema != SNAPSHOT_SCHEMA || snap.version != SNAPSHOT_VERSION {
            bail!(
                "{}: unsupported snapshot {} v{}",
                path.display(),
                snap.schema,
                snap.version
            );
        }
        if snap.step != snap.world.step {
            bail!(
                "{}: step {} disagrees with world step {}",
                path.display(),
                snap.step,
                snap.world.step
            );
        }
        snap.world
            .check_invariants()
            .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        snap.world.params.validate()?;
        Ok(snap)
    }
}
