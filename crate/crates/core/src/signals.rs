//! The splitting protocol: strand-location states, splitting states, the
//! yellow field, and release of vertical bonds when a codon starts to split.
//!
//! All reads of neighbour states come from a snapshot taken before the pass,
//! so the result does not depend on iteration order. Splitting rules see the
//! location states computed earlier in the same step.
//!
//! A missing green/purple neighbour never counts as "in state 1" and never
//! counts as "in state 2". Missing red/blue neighbours are never in any
//! splitting state.

use serde::{Deserialize, Serialize};

use crate::bonding::{BondEvent, BondKind};
use crate::model::{Arm, CodonId, FieldKind, FieldSize, LocationState, SplittingState};
use crate::world::World;

/// Read-only per-codon view of bonds and protocol states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeighborView {
    pub red: Option<CodonId>,
    pub blue: Option<CodonId>,
    pub vertical: Option<CodonId>,
    pub location: LocationState,
    pub splitting: SplittingState,
}

impl NeighborView {
    pub fn snapshot(world: &World) -> Vec<NeighborView> {
        world
            .codons
            .iter()
            .map(|c| NeighborView {
                red: c.bond(Arm::Red),
                blue: c.bond(Arm::Blue),
                vertical: c.bond(Arm::Vertical),
                location: c.location,
                splitting: c.splitting,
            })
            .collect()
    }

    fn exactly_one_horizontal(&self) -> bool {
        self.red.is_some() != self.blue.is_some()
    }
}

/// A codon entered the Z state and released its vertical bond (if any).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitEvent {
    pub step: u64,
    pub codon: CodonId,
    pub released: Option<CodonId>,
}

/// One synchronous pass of the strand-location rules.
pub fn update_strand_location_states(world: &mut World) {
    let view = NeighborView::snapshot(world);
    for (c, me) in world.codons.iter_mut().zip(&view) {
        c.location = next_location(me, &view);
    }
}

fn next_location(me: &NeighborView, view: &[NeighborView]) -> LocationState {
    use LocationState::*;
    let one_horizontal = me.exactly_one_horizontal();
    let partner = me.vertical.map(|v| view[v.index()].location);
    let has_vertical = partner.is_some();
    match me.location {
        S0 => {
            if one_horizontal && has_vertical {
                S1
            } else {
                S0
            }
        }
        S1 => {
            if !one_horizontal || !has_vertical {
                S0
            } else if matches!(partner, Some(S1 | S2)) {
                S2
            } else {
                S1
            }
        }
        S2 => {
            if !one_horizontal || !has_vertical || partner == Some(S0) {
                S0
            } else {
                S2
            }
        }
    }
}

/// One synchronous pass of the splitting rules. Uses this step's location
/// states and the previous splitting states of neighbours. `z_timer` counts
/// whole steps spent in Z; it is zero on the step a codon enters Z.
pub fn update_splitting_states(world: &mut World) {
    let view = NeighborView::snapshot(world);
    let split_timer = world.params.split_timer;
    for (c, me) in world.codons.iter_mut().zip(&view) {
        let (next, timer) = next_splitting(me, c.z_timer, split_timer, &view);
        c.splitting = next;
        c.z_timer = timer;
    }
}

fn next_splitting(
    me: &NeighborView,
    z_timer: u32,
    split_timer: u32,
    view: &[NeighborView],
) -> (SplittingState, u32) {
    use LocationState::*;
    use SplittingState::*;
    let partner_loc = me.vertical.map(|v| view[v.index()].location);
    let red_split = me.red.map(|r| view[r.index()].splitting);
    let blue_split = me.blue.map(|b| view[b.index()].splitting);
    let both_ends = me.location == S2 && partner_loc == Some(S2);
    let unblocked = me.location != S1 && partner_loc != Some(S1);

    match me.splitting {
        X => {
            let start = both_ends && me.red.is_none();
            let spread = unblocked && red_split == Some(Y);
            if start || spread {
                (Y, 0)
            } else {
                (X, 0)
            }
        }
        Y => {
            let turn = both_ends && me.blue.is_none();
            let spread = unblocked && blue_split == Some(Z);
            if turn || spread {
                (Z, 0)
            } else {
                (Y, 0)
            }
        }
        Z => {
            let elapsed = z_timer.saturating_add(1);
            let timed_out = me.red.is_none() && elapsed >= split_timer;
            if timed_out || red_split == Some(X) {
                (X, 0)
            } else {
                (Z, elapsed)
            }
        }
    }
}

/// True on the step a codon enters Z.
pub fn entered_z_this_step(c: &crate::model::Codon) -> bool {
    c.splitting == SplittingState::Z && c.z_timer == 0
}

/// Every codon that entered Z this step turns its yellow field large, starts
/// the yellow timer, and releases its vertical bond. A released codon drops
/// out of S2, as the location rules would on the next step.
pub fn apply_split_release(world: &mut World) -> (Vec<BondEvent>, Vec<SplitEvent>) {
    let step = world.step;
    let split_timer = world.params.split_timer;
    let entering: Vec<CodonId> = world
        .codons
        .iter()
        .filter(|c| entered_z_this_step(c))
        .map(|c| c.id)
        .collect();

    let mut bonds = Vec::new();
    let mut splits = Vec::with_capacity(entering.len());
    for id in entering {
        let c = world.codon_mut(id);
        c.set_field(FieldKind::Yellow, FieldSize::Large);
        c.yellow_timer = split_timer;
        let released = c.bonds[Arm::Vertical.index()].take();
        if let Some(other) = released {
            if c.location == LocationState::S2 {
                c.location = LocationState::S0;
            }
            let o = world.codon_mut(other);
            o.bonds[Arm::Vertical.index()] = None;
            if o.location == LocationState::S2 {
                o.location = LocationState::S0;
            }
            bonds.push(BondEvent::new(step, BondKind::VerticalBroken, id, other));
        }
        splits.push(SplitEvent {
            step,
            codon: id,
            released,
        });
    }
    (bonds, splits)
}

/// Counts down large yellow fields; a field returns to small when its timer
/// runs out. Codons that entered Z this step are skipped, so an
/// uninterrupted yellow field stays large for exactly `split_timer` steps.
pub fn tick_yellow_timers(world: &mut World) {
    for c in &mut world.codons {
        if !c.field(FieldKind::Yellow).is_large() || entered_z_this_step(c) {
            continue;
        }
        c.yellow_timer = c.yellow_timer.saturating_sub(1);
        if c.yellow_timer == 0 {
            c.set_field(FieldKind::Yellow, FieldSize::Small);
        }
    }
}

/// The four signal phases in pipeline order.
pub fn run_signals(world: &mut World) -> (Vec<BondEvent>, Vec<SplitEvent>) {
    update_strand_location_states(world);
    update_splitting_states(world);
    let out = apply_split_release(world);
    tick_yellow_timers(world);
    out
}
