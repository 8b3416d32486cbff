//! Step pipeline, scenarios, replication detection and calibration.
//!
//! One step runs, in order: spatial rebuild, bond breakage, red-blue and
//! vertical bond formation, field sizes, the four signal phases, then the
//! force phases (springs, yellow repulsion, brownian, viscosity) and the
//! integrator. State machines all read poses from before the integrator.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::ControlFlow;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bonding::{
    break_lost_contact_bonds, try_form_red_blue_bonds, try_form_vertical_bonds, update_field_sizes,
    BondEvent, BondKind,
};
use crate::dynamics::{
    apply_bond_springs, apply_brownian, apply_viscosity, apply_yellow_repulsion, integrate, ForceAccumulator,
};
use crate::error::{Result, SimError};
use crate::model::{Arm, CodonId, CodonType, Container, Pose};
use crate::params::SimParams;
use crate::signals::{
    apply_split_release, entered_z_this_step, tick_yellow_timers, update_splitting_states,
    update_strand_location_states, SplitEvent,
};
use crate::spatial::SpatialIndex;
use crate::strands::{bits_of, centered_seed_pose, extract_strands, place_seed, strand_of};
use crate::world::{seeded_rng, World, LAYOUT_STREAM};

/// The two strands of a double strand at the moment one of its codons
/// entered Z, before any vertical bond was released.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSnapshot {
    pub step: u64,
    pub strand: Vec<CodonId>,
    pub strand_bits: String,
    pub partner: Vec<CodonId>,
    pub partner_bits: String,
    /// Every member of each strand was vertically bonded into the other.
    pub complete: bool,
}

/// A red-blue bond that no template guided: the two codons were not held
/// by vertical bonds to two codons already bonded to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpontaneousBond {
    pub step: u64,
    pub a: CodonId,
    pub b: CodonId,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StepEvents {
    pub step: u64,
    pub bonds: Vec<BondEvent>,
    pub splits: Vec<SplitEvent>,
    pub split_snapshots: Vec<SplitSnapshot>,
    pub spontaneous: Vec<SpontaneousBond>,
}

impl StepEvents {
    pub fn is_empty(&self) -> bool {
        self.bonds.is_empty() && self.splits.is_empty()
    }
}

/// A world plus the scratch buffers one step needs.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub world: World,
    index: SpatialIndex,
    acc: ForceAccumulator,
}

impl Simulation {
    pub fn new(world: World) -> Self {
        let index = SpatialIndex::for_params(&world.params);
        let acc = ForceAccumulator::new(world.len());
        Self { world, index, acc }
    }

    pub fn into_world(self) -> World {
        self.world
    }

    pub fn step(&mut self) -> Result<StepEvents> {
        step(&mut self.world, &mut self.index, &mut self.acc)
    }

    pub fn run(&mut self, steps: u64) -> Result<Vec<StepEvents>> {
        let mut out = Vec::new();
        for _ in 0..steps {
            let ev = self.step()?;
            if !ev.is_empty() {
                out.push(ev);
            }
        }
        Ok(out)
    }
}

/// Advances the world by one step.
pub fn step(world: &mut World, index: &mut SpatialIndex, acc: &mut ForceAccumulator) -> Result<StepEvents> {
    world.step += 1;
    let mut events = StepEvents {
        step: world.step,
        ..StepEvents::default()
    };

    index.rebuild(world);
    events.bonds.extend(break_lost_contact_bonds(world));

    let red_before: Vec<Option<CodonId>> = world.codons.iter().map(|c| c.bond(Arm::Red)).collect();
    let formed = try_form_red_blue_bonds(world, index);
    for e in &formed {
        let templated = match (
            world.codon(e.a).bond(Arm::Vertical),
            world.codon(e.b).bond(Arm::Vertical),
        ) {
            (Some(p), Some(q)) => red_before[p.index()] == Some(q) || red_before[q.index()] == Some(p),
            _ => false,
        };
        if !templated {
            events.spontaneous.push(SpontaneousBond {
                step: e.step,
                a: e.a,
                b: e.b,
            });
        }
    }
    events.bonds.extend(formed);
    events.bonds.extend(try_form_vertical_bonds(world, index));
    update_field_sizes(world);

    update_strand_location_states(world);
    update_splitting_states(world);
    events.split_snapshots = split_snapshots(world)?;
    let (released, splits) = apply_split_release(world);
    events.bonds.extend(released);
    events.splits = splits;
    tick_yellow_timers(world);

    acc.reset(world.len());
    apply_bond_springs(world, acc);
    apply_yellow_repulsion(world, index, acc);
    apply_brownian(world);
    apply_viscosity(world);
    integrate(world, acc)?;
    Ok(events)
}

/// Structure of every double strand with a codon entering Z this step.
fn split_snapshots(world: &World) -> Result<Vec<SplitSnapshot>> {
    let mut out = Vec::new();
    let mut done: HashSet<CodonId> = HashSet::new();
    for c in world.codons.iter().filter(|c| entered_z_this_step(c)) {
        let Some(partner) = c.bond(Arm::Vertical) else {
            continue;
        };
        if done.contains(&c.id) {
            continue;
        }
        let strand = strand_of(world, c.id)?;
        let other = strand_of(world, partner)?;
        done.extend(strand.iter().copied());
        done.extend(other.iter().copied());
        let other_set: HashSet<CodonId> = other.iter().copied().collect();
        let strand_set: HashSet<CodonId> = strand.iter().copied().collect();
        let pairs_into = |ids: &[CodonId], set: &HashSet<CodonId>| {
            ids.iter().all(|&id| {
                world
                    .codon(id)
                    .bond(Arm::Vertical)
                    .is_some_and(|p| set.contains(&p))
            })
        };
        let complete =
            strand.len() == other.len() && pairs_into(&strand, &other_set) && pairs_into(&other, &strand_set);
        out.push(SplitSnapshot {
            step: world.step,
            strand_bits: bits_of(world, &strand),
            partner_bits: bits_of(world, &other),
            strand,
            partner: other,
            complete,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub step: u64,
    pub parent_ids: Vec<CodonId>,
    pub parent_bits: String,
    pub daughter_ids: Vec<CodonId>,
    pub daughter_bits: String,
}

/// Turns split snapshots into replication records. The daughter is the
/// strand whose newest red-blue bond is younger; bond ages come from the
/// event stream.
#[derive(Debug, Clone, Default)]
pub struct ReplicationDetector {
    bond_birth: HashMap<(CodonId, CodonId), u64>,
}

impl ReplicationDetector {
    /// Seeds bond ages from a world; existing bonds count as born now.
    pub fn new(world: &World) -> Self {
        let mut bond_birth = HashMap::new();
        for c in &world.codons {
            if let Some(b) = c.bond(Arm::Red) {
                bond_birth.insert(key(c.id, b), world.step);
            }
        }
        Self { bond_birth }
    }

    fn newest_bond(&self, strand: &[CodonId]) -> u64 {
        strand
            .windows(2)
            .filter_map(|w| self.bond_birth.get(&key(w[0], w[1])).copied())
            .max()
            .unwrap_or(0)
    }

    pub fn observe(&mut self, events: &StepEvents) -> Vec<ReplicationRecord> {
        let mut out = Vec::new();
        for snap in events.split_snapshots.iter().filter(|s| s.complete) {
            let a_age = self.newest_bond(&snap.strand);
            let b_age = self.newest_bond(&snap.partner);
            let a_min = snap.strand.iter().min();
            let b_min = snap.partner.iter().min();
            let a_is_parent = (a_age, a_min) < (b_age, b_min);
            let (parent, pbits, daughter, dbits) = if a_is_parent {
                (&snap.strand, &snap.strand_bits, &snap.partner, &snap.partner_bits)
            } else {
                (&snap.partner, &snap.partner_bits, &snap.strand, &snap.strand_bits)
            };
            out.push(ReplicationRecord {
                step: snap.step,
                parent_ids: parent.clone(),
                parent_bits: pbits.clone(),
                daughter_ids: daughter.clone(),
                daughter_bits: dbits.clone(),
            });
        }
        for e in &events.bonds {
            match e.kind {
                BondKind::RedBlueFormed => {
                    self.bond_birth.insert(key(e.a, e.b), e.step);
                }
                BondKind::RedBlueBroken => {
                    self.bond_birth.remove(&key(e.a, e.b));
                }
                _ => {}
            }
        }
        out
    }
}

/// Birth step of one red-blue bond, for persisting a detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BondAge {
    pub a: CodonId,
    pub b: CodonId,
    pub step: u64,
}

impl ReplicationDetector {
    /// Bond ages sorted by pair.
    pub fn ages(&self) -> Vec<BondAge> {
        let mut out: Vec<BondAge> = self
            .bond_birth
            .iter()
            .map(|(&(a, b), &step)| BondAge { a, b, step })
            .collect();
        out.sort_by_key(|x| (x.a, x.b));
        out
    }

    pub fn from_ages(ages: &[BondAge]) -> Self {
        Self {
            bond_birth: ages.iter().map(|x| (key(x.a, x.b), x.step)).collect(),
        }
    }
}

fn key(a: CodonId, b: CodonId) -> (CodonId, CodonId) {
    (a.min(b), a.max(b))
}

/// Replication records for a batch of step events.
pub fn detect_replication(events: &[StepEvents], world_at_start: &World) -> Vec<ReplicationRecord> {
    let mut det = ReplicationDetector::new(world_at_start);
    events.iter().flat_map(|e| det.observe(e)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub seed_bits: Option<String>,
    pub free_codon_count: usize,
    /// Fraction of free codons that are Type0.
    pub free_type_mix: f64,
    pub container: Container,
    pub params: SimParams,
    pub rng_seed: u64,
    pub max_steps: u64,
    /// 0 disables.
    pub snapshot_every: u64,
    /// 0 disables.
    pub frame_every: u64,
    /// Steps between world hashes in the log.
    pub hash_every: u64,
    /// Stop once this many replications were seen. 0 runs to `max_steps`.
    pub stop_after_replications: u32,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            name: "seeded".into(),
            seed_bits: Some("00011001".into()),
            free_codon_count: 80,
            free_type_mix: 0.5,
            container: Container::new(200.0, 200.0),
            params: SimParams::default(),
            rng_seed: 1,
            max_steps: 300_000,
            snapshot_every: 0,
            frame_every: 0,
            hash_every: 1000,
            stop_after_replications: 0,
        }
    }
}

impl Scenario {
    /// Seed strand "00011001" in a soup of 80 free codons.
    pub fn seeded() -> Self {
        Self::default()
    }

    /// 88 free codons, no seed.
    pub fn spontaneous() -> Self {
        Self {
            name: "spontaneous".into(),
            seed_bits: None,
            free_codon_count: 88,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.max_steps == 0 {
            return Err(SimError::InvalidScenario("max_steps must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.free_type_mix) {
            return Err(SimError::InvalidScenario(format!(
                "free_type_mix must lie in [0, 1], got {}",
                self.free_type_mix
            )));
        }
        let c = &self.container;
        if !(c.width() > 0.0 && c.height() > 0.0) {
            return Err(SimError::InvalidScenario(
                "container must have positive size".into(),
            ));
        }
        if let Some(bits) = &self.seed_bits {
            crate::strands::negate(bits)?;
        }
        Ok(())
    }

    /// Builds the initial world: optional seed strand through the container
    /// center, then free codons with uniform positions and angles.
    pub fn build_world(&self) -> Result<World> {
        self.validate()?;
        let mut world = World::new(self.container, self.params.clone(), self.rng_seed);
        if let Some(bits) = self.seed_bits.as_deref().filter(|b| !b.is_empty()) {
            let pose = centered_seed_pose(&world, bits.len(), self.container.center(), 0.0);
            place_seed(&mut world, bits, pose)?;
        }
        let mut rng = seeded_rng(self.rng_seed, LAYOUT_STREAM);
        let n = self.free_codon_count;
        let type0 = (self.free_type_mix * n as f64).round() as usize;
        let mut types: Vec<CodonType> = (0..n)
            .map(|i| {
                if i < type0 {
                    CodonType::Type0
                } else {
                    CodonType::Type1
                }
            })
            .collect();
        types.shuffle(&mut rng);
        let c = self.container;
        for t in types {
            let pose = Pose::new(
                rng.random_range(c.x_min..=c.x_max),
                rng.random_range(c.y_min..=c.y_max),
                rng.random_range(0.0..std::f64::consts::TAU),
            );
            world.add_codon(t, pose)?;
        }
        Ok(world)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub rng_seed: u64,
    pub steps_executed: u64,
    pub normalized_time: f64,
    pub replication_events: Vec<ReplicationRecord>,
    pub spontaneous_bonds: Vec<SpontaneousBond>,
    /// Bits of every strand at the end of the run, with counts.
    pub final_census: BTreeMap<String, usize>,
    pub final_hash: String,
    /// Set when the run stopped on a numeric error.
    pub aborted: Option<String>,
    pub wall_clock_secs: f64,
}

/// Hooks for logging, snapshots and early stopping.
pub trait RunObserver {
    fn on_start(&mut self, _world: &World) {}

    fn on_step(
        &mut self,
        _world: &World,
        _events: &StepEvents,
        _replications: &[ReplicationRecord],
    ) -> ControlFlow<()> {
        ControlFlow::Continue(())
    }

    fn on_finish(&mut self, _world: &World, _report: &RunReport) {}
}

/// Observer that does nothing.
pub struct Quiet;

impl RunObserver for Quiet {}

pub fn census(world: &World) -> Result<BTreeMap<String, usize>> {
    let mut out = BTreeMap::new();
    for s in extract_strands(world)? {
        *out.entry(s.bits).or_insert(0) += 1;
    }
    Ok(out)
}

/// A simulation together with everything a run accumulates.
#[derive(Debug, Clone)]
pub struct Runner {
    pub sim: Simulation,
    pub detector: ReplicationDetector,
    pub replications: Vec<ReplicationRecord>,
    pub spontaneous: Vec<SpontaneousBond>,
    pub aborted: Option<String>,
}

impl Runner {
    pub fn new(world: World) -> Self {
        let detector = ReplicationDetector::new(&world);
        Self::resume(world, detector)
    }

    /// Continues from a saved world and the detector state saved with it.
    pub fn resume(world: World, detector: ReplicationDetector) -> Self {
        Self {
            sim: Simulation::new(world),
            detector,
            replications: Vec::new(),
            spontaneous: Vec::new(),
            aborted: None,
        }
    }

    pub fn world(&self) -> &World {
        &self.sim.world
    }

    /// One step. Numeric blow-ups are recorded in `aborted` and end the run
    /// (`Ok(None)`); any other error is returned.
    pub fn step(&mut self) -> Result<Option<(StepEvents, Vec<ReplicationRecord>)>> {
        if self.aborted.is_some() {
            return Ok(None);
        }
        let events = match self.sim.step() {
            Ok(ev) => ev,
            Err(e @ SimError::NumericInstability { .. }) => {
                self.aborted = Some(e.to_string());
                return Ok(None);
            }
            Err(e) => return Err(e),
        };
        let found = self.detector.observe(&events);
        self.spontaneous.extend(events.spontaneous.iter().copied());
        self.replications.extend(found.iter().cloned());
        Ok(Some((events, found)))
    }

    pub fn report(
        &self,
        scenario: &str,
        rng_seed: u64,
        start_step: u64,
        wall_clock_secs: f64,
    ) -> Result<RunReport> {
        let world = self.world();
        Ok(RunReport {
            scenario: scenario.to_string(),
            rng_seed,
            steps_executed: world.step - start_step,
            normalized_time: world.normalized_time(),
            replication_events: self.replications.clone(),
            spontaneous_bonds: self.spontaneous.clone(),
            final_census: census(world)?,
            final_hash: world.state_hash(),
            aborted: self.aborted.clone(),
            wall_clock_secs,
        })
    }
}

/// Runs `world` until its step counter reaches `until_step`, a stop
/// condition fires, or the physics blows up.
pub fn run_world(
    world: World,
    until_step: u64,
    stop_after_replications: u32,
    scenario: &str,
    rng_seed: u64,
    observer: &mut dyn RunObserver,
) -> Result<(RunReport, World)> {
    let started = Instant::now();
    let start_step = world.step;
    let mut runner = Runner::new(world);
    observer.on_start(runner.world());
    while runner.world().step < until_step {
        let Some((events, found)) = runner.step()? else {
            break;
        };
        if observer.on_step(runner.world(), &events, &found).is_break() {
            break;
        }
        if stop_after_replications > 0 && runner.replications.len() >= stop_after_replications as usize {
            break;
        }
    }
    let report = runner.report(scenario, rng_seed, start_step, started.elapsed().as_secs_f64())?;
    let world = runner.sim.into_world();
    observer.on_finish(&world, &report);
    Ok((report, world))
}

pub fn run_scenario_with(s: &Scenario, observer: &mut dyn RunObserver) -> Result<RunReport> {
    let world = s.build_world()?;
    let (report, _) = run_world(
        world,
        s.max_steps,
        s.stop_after_replications,
        &s.name,
        s.rng_seed,
        observer,
    )?;
    Ok(report)
}

pub fn run_scenario(s: &Scenario) -> Result<RunReport> {
    run_scenario_with(s, &mut Quiet)
}

/// Runs independent scenarios on up to `threads` worker threads (all
/// available cores when `None`). Results keep the input order.
pub fn run_many(scenarios: &[Scenario], threads: Option<usize>) -> Vec<Result<RunReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .expect("thread pool");
    pool.install(|| scenarios.par_iter().map(run_scenario).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationCandidate {
    pub name: String,
    pub params: SimParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationScore {
    pub name: String,
    pub params: SimParams,
    /// Fraction of brownian-free trials whose seed kept every bond.
    pub intact: f64,
    /// Fraction of brownian trials in which the seed replicated.
    pub replicated: f64,
    /// Fraction of brownian trials without a spontaneous red-blue bond.
    pub quiet: f64,
    /// Mean step of the first replication over trials that replicated.
    pub mean_first_replication: Option<f64>,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPlan {
    pub seed_bits: String,
    pub free_codon_count: usize,
    pub trials: u32,
    pub intact_steps: u64,
    pub budget_steps: u64,
    pub base_seed: u64,
}

impl Default for CalibrationPlan {
    fn default() -> Self {
        Self {
            seed_bits: "00011001".into(),
            free_codon_count: 80,
            trials: 3,
            intact_steps: 5_000,
            budget_steps: 300_000,
            base_seed: 1,
        }
    }
}

fn score_candidate(c: &CalibrationCandidate, plan: &CalibrationPlan) -> Result<CalibrationScore> {
    let trials = plan.trials.max(1);
    let mut intact = 0u32;
    let mut replicated = 0u32;
    let mut quiet = 0u32;
    let mut first_steps = Vec::new();
    for t in 0..trials {
        let seed = plan.base_seed + u64::from(t);
        let lone = Scenario {
            name: format!("{}-intact", c.name),
            seed_bits: Some(plan.seed_bits.clone()),
            free_codon_count: 0,
            params: c.params.clone().without_brownian(),
            rng_seed: seed,
            max_steps: plan.intact_steps,
            ..Scenario::default()
        };
        let mut broke = BondWatch::default();
        run_scenario_with(&lone, &mut broke)?;
        if !broke.red_blue_broken {
            intact += 1;
        }

        let soup = Scenario {
            name: format!("{}-soup", c.name),
            seed_bits: Some(plan.seed_bits.clone()),
            free_codon_count: plan.free_codon_count,
            params: c.params.clone(),
            rng_seed: seed,
            max_steps: plan.budget_steps,
            ..Scenario::default()
        };
        let mut watch = LineageWatch {
            len: plan.seed_bits.len(),
            first: None,
        };
        let r = run_scenario_with(&soup, &mut watch)?;
        if let Some(first) = watch.first {
            replicated += 1;
            first_steps.push(first as f64);
        }
        if r.spontaneous_bonds.is_empty() {
            quiet += 1;
        }
    }
    let f = |n: u32| f64::from(n) / f64::from(trials);
    let (intact, replicated, quiet) = (f(intact), f(replicated), f(quiet));
    let mean_first_replication =
        (!first_steps.is_empty()).then(|| first_steps.iter().sum::<f64>() / first_steps.len() as f64);
    // Replication dominates; ties prefer stability, then speed.
    let speed = mean_first_replication.map_or(0.0, |m| 1.0 - m / plan.budget_steps as f64);
    let total = 4.0 * replicated + 2.0 * quiet + intact + 0.5 * speed;
    Ok(CalibrationScore {
        name: c.name.clone(),
        params: c.params.clone(),
        intact,
        replicated,
        quiet,
        mean_first_replication,
        total,
    })
}

/// Stops at the first replication of a strand as long as the seed.
pub struct LineageWatch {
    pub len: usize,
    pub first: Option<u64>,
}

impl RunObserver for LineageWatch {
    fn on_step(&mut self, _: &World, _: &StepEvents, found: &[ReplicationRecord]) -> ControlFlow<()> {
        match found.iter().find(|r| r.parent_bits.len() == self.len) {
            Some(r) => {
                self.first = Some(r.step);
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        }
    }
}

#[derive(Default)]
struct BondWatch {
    red_blue_broken: bool,
}

impl RunObserver for BondWatch {
    fn on_step(&mut self, _: &World, events: &StepEvents, _: &[ReplicationRecord]) -> ControlFlow<()> {
        if events.bonds.iter().any(|e| e.kind == BondKind::RedBlueBroken) {
            self.red_blue_broken = true;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    }
}

/// Scores every candidate and returns them best first.
pub fn calibrate(
    candidates: &[CalibrationCandidate],
    plan: &CalibrationPlan,
    threads: Option<usize>,
) -> Result<Vec<CalibrationScore>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .expect("thread pool");
    let mut scores = pool.install(|| {
        candidates
            .par_iter()
            .map(|c| score_candidate(c, plan))
            .collect::<Result<Vec<_>>>()
    })?;
    scores.sort_by(|a, b| b.total.total_cmp(&a.total).then_with(|| a.name.cmp(&b.name)));
    Ok(scores)
}

/// Cartesian product of named parameter axes around `base`.
pub fn candidate_grid(base: &SimParams, axes: &[(String, Vec<f64>)]) -> Result<Vec<CalibrationCandidate>> {
    let mut out = vec![CalibrationCandidate {
        name: "base".into(),
        params: base.clone(),
    }];
    for (key, values) in axes {
        let mut next = Vec::with_capacity(out.len() * values.len());
        for c in &out {
            for &v in values {
                let mut params = c.params.clone();
                params.set(key, v)?;
                let name = if c.name == "base" {
                    format!("{key}={v}")
                } else {
                    format!("{},{key}={v}", c.name)
                };
                next.push(CalibrationCandidate { name, params });
            }
        }
        out = next;
    }
    for c in &out {
        c.params.validate()?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_world_only_counts_steps() {
        let mut sim = Simulation::new(World::new(Container::new(10.0, 10.0), SimParams::default(), 0));
        let ev = sim.run(5).unwrap();
        assert!(ev.is_empty());
        assert_eq!(sim.world.step, 5);
    }

    #[test]
    fn identical_seeds_identical_hashes() {
        let s = Scenario {
            max_steps: 500,
            ..Scenario::seeded()
        };
        let mut a = Simulation::new(s.build_world().unwrap());
        let mut b = Simulation::new(s.build_world().unwrap());
        for _ in 0..500 {
            a.step().unwrap();
            b.step().unwrap();
            assert_eq!(a.world.state_hash(), b.world.state_hash());
        }
    }

    #[test]
    fn degenerate_run_reports_nothing() {
        let s = Scenario {
            seed_bits: None,
            free_codon_count: 0,
            max_steps: 10,
            ..Scenario::default()
        };
        let r = run_scenario(&s).unwrap();
        assert_eq!(r.steps_executed, 10);
        assert!(r.replication_events.is_empty());
        assert!(r.spontaneous_bonds.is_empty());
        assert_eq!(r.normalized_time, 10.0 * s.params.timestep_duration);
    }

    #[test]
    fn scenario_validation() {
        assert!(Scenario {
            max_steps: 0,
            ..Scenario::default()
        }
        .validate()
        .is_err());
        assert!(Scenario {
            free_type_mix: 1.5,
            ..Scenario::default()
        }
        .validate()
        .is_err());
        assert!(Scenario {
            seed_bits: Some("012".into()),
            ..Scenario::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn layout_respects_mix_and_container() {
        let s = Scenario::seeded();
        let w = s.build_world().unwrap();
        assert_eq!(w.len(), 88);
        let type0 = w.codons[8..]
            .iter()
            .filter(|c| c.ctype == CodonType::Type0)
            .count();
        assert_eq!(type0, 40);
        w.check_invariants().unwrap();
    }

    #[test]
    fn no_splits_means_no_replications() {
        let w = World::new(Container::new(10.0, 10.0), SimParams::default(), 0);
        assert!(detect_replication(&[StepEvents::default()], &w).is_empty());
    }

    #[test]
    fn grid_is_cartesian() {
        let axes = vec![
            ("k_attract".to_string(), vec![1.0, 2.0]),
            ("radius_small_red".to_string(), vec![0.01, 0.02, 0.03]),
        ];
        let g = candidate_grid(&SimParams::default(), &axes).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g[5].params.k_attract, 2.0);
        assert_eq!(g[5].params.radii[0].small, 0.03);
        assert!(candidate_grid(&SimParams::default(), &[("bogus".into(), vec![1.0])]).is_err());
        assert!(candidate_grid(&SimParams::default(), &[("mass".into(), vec![-1.0])]).is_err());
    }

    #[test]
    fn detector_ages_round_trip() {
        let w = Scenario::seeded().build_world().unwrap();
        let d = ReplicationDetector::new(&w);
        assert_eq!(d.ages().len(), 7);
        assert_eq!(ReplicationDetector::from_ages(&d.ages()).ages(), d.ages());
    }
}
