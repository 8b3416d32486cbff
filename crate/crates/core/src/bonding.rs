//! Bond formation, maintenance and breakage, and the field sizes that
//! follow from bond status.
//!
//! "Touching" is `distance <= r_a + r_b`; "lost contact" is the strict
//! complement. Candidate pairs that appear in the same step are accepted in
//! ascending `(min id, max id)` order, and only while both slots are free.

use serde::{Deserialize, Serialize};

use crate::model::{alignment_error, fields_touch, Arm, CodonId, CodonType, FieldKind, FieldSize};
use crate::spatial::SpatialIndex;
use crate::world::World;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BondKind {
    RedBlueFormed,
    RedBlueBroken,
    VerticalFormed,
    VerticalBroken,
}

/// A bond transition. `a < b` always.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BondEvent {
    pub step: u64,
    pub kind: BondKind,
    pub a: CodonId,
    pub b: CodonId,
}

impl BondEvent {
    pub fn new(step: u64, kind: BondKind, x: CodonId, y: CodonId) -> Self {
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        Self { step, kind, a, b }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    lo: CodonId,
    hi: CodonId,
    /// Owner of the red (or purple) side.
    first: CodonId,
    second: CodonId,
}

impl Candidate {
    fn new(first: CodonId, second: CodonId) -> Self {
        Self {
            lo: first.min(second),
            hi: first.max(second),
            first,
            second,
        }
    }
}

/// Bonds a small red field to a small blue field when the tips touch and
/// the arms are anti-parallel within `red_blue_angle`.
pub fn try_form_red_blue_bonds(world: &mut World, index: &SpatialIndex) -> Vec<BondEvent> {
    let params = &world.params;
    let mut candidates = Vec::new();
    let mut near = Vec::new();
    for a in &world.codons {
        if a.bond(Arm::Red).is_some() || a.field(FieldKind::Red).is_large() {
            continue;
        }
        let red_tip = a.tip(Arm::Red, params);
        let red_r = a.field_radius(FieldKind::Red, params);
        index.candidates_into(red_tip, red_r, &mut near);
        for &bid in &near {
            if bid == a.id {
                continue;
            }
            let b = world.codon(bid);
            if b.bond(Arm::Blue).is_some() || b.field(FieldKind::Blue).is_large() {
                continue;
            }
            let blue_tip = b.tip(Arm::Blue, params);
            let blue_r = b.field_radius(FieldKind::Blue, params);
            if fields_touch(red_tip, red_r, blue_tip, blue_r)
                && alignment_error(a, Arm::Red, b, Arm::Blue) <= params.red_blue_angle
            {
                candidates.push(Candidate::new(a.id, b.id));
            }
        }
    }
    candidates.sort_unstable();

    let step = world.step;
    let mut events = Vec::new();
    for c in candidates {
        let red_free = world.codon(c.first).bond(Arm::Red).is_none();
        let blue_free = world.codon(c.second).bond(Arm::Blue).is_none();
        if !(red_free && blue_free) {
            continue;
        }
        let a = world.codon_mut(c.first);
        a.bonds[Arm::Red.index()] = Some(c.second);
        a.set_field(FieldKind::Red, FieldSize::Large);
        let b = world.codon_mut(c.second);
        b.bonds[Arm::Blue.index()] = Some(c.first);
        b.set_field(FieldKind::Blue, FieldSize::Large);
        events.push(BondEvent::new(step, BondKind::RedBlueFormed, c.first, c.second));
    }
    events
}

/// Bonds a purple field to a green field when they touch and the vertical
/// arms point at each other within `purple_green_angle`. Two large fields
/// never initiate a bond.
pub fn try_form_vertical_bonds(world: &mut World, index: &SpatialIndex) -> Vec<BondEvent> {
    let params = &world.params;
    let mut candidates = Vec::new();
    let mut near = Vec::new();
    for a in &world.codons {
        if a.ctype != CodonType::Type0 || a.bond(Arm::Vertical).is_some() {
            continue;
        }
        let purple_tip = a.tip(Arm::Vertical, params);
        let purple_large = a.field(FieldKind::Purple).is_large();
        let purple_r = a.field_radius(FieldKind::Purple, params);
        index.candidates_into(purple_tip, purple_r, &mut near);
        for &bid in &near {
            let b = world.codon(bid);
            if b.ctype != CodonType::Type1 || b.bond(Arm::Vertical).is_some() {
                continue;
            }
            if purple_large && b.field(FieldKind::Green).is_large() {
                continue;
            }
            let green_tip = b.tip(Arm::Vertical, params);
            let green_r = b.field_radius(FieldKind::Green, params);
            if fields_touch(purple_tip, purple_r, green_tip, green_r)
                && alignment_error(a, Arm::Vertical, b, Arm::Vertical) <= params.purple_green_angle
            {
                candidates.push(Candidate::new(a.id, b.id));
            }
        }
    }
    candidates.sort_unstable();

    let step = world.step;
    let mut events = Vec::new();
    for c in candidates {
        if world.codon(c.first).bond(Arm::Vertical).is_some()
            || world.codon(c.second).bond(Arm::Vertical).is_some()
        {
            continue;
        }
        world.codon_mut(c.first).bonds[Arm::Vertical.index()] = Some(c.second);
        world.codon_mut(c.second).bonds[Arm::Vertical.index()] = Some(c.first);
        events.push(BondEvent::new(step, BondKind::VerticalFormed, c.first, c.second));
    }
    events
}

/// Clears every bond whose two field circles no longer intersect. Broken
/// red-blue bonds drop both fields back to small.
pub fn break_lost_contact_bonds(world: &mut World) -> Vec<BondEvent> {
    let params = &world.params;
    let mut red_blue = Vec::new();
    let mut vertical = Vec::new();
    for a in &world.codons {
        if let Some(bid) = a.bond(Arm::Red) {
            let b = world.codon(bid);
            let d = a.tip(Arm::Red, params).distance(b.tip(Arm::Blue, params));
            let reach = a.field_radius(FieldKind::Red, params) + b.field_radius(FieldKind::Blue, params);
            if d > reach {
                red_blue.push((a.id, bid));
            }
        }
        if let Some(bid) = a.bond(Arm::Vertical) {
            if a.id < bid {
                let b = world.codon(bid);
                let d = a
                    .tip(Arm::Vertical, params)
                    .distance(b.tip(Arm::Vertical, params));
                let reach =
                    a.field_radius(a.vertical_field(), params) + b.field_radius(b.vertical_field(), params);
                if d > reach {
                    vertical.push((a.id, bid));
                }
            }
        }
    }

    let step = world.step;
    let mut events = Vec::with_capacity(red_blue.len() + vertical.len());
    for (a, b) in red_blue {
        let ca = world.codon_mut(a);
        ca.bonds[Arm::Red.index()] = None;
        ca.set_field(FieldKind::Red, FieldSize::Small);
        let cb = world.codon_mut(b);
        cb.bonds[Arm::Blue.index()] = None;
        cb.set_field(FieldKind::Blue, FieldSize::Small);
        events.push(BondEvent::new(step, BondKind::RedBlueBroken, a, b));
    }
    for (a, b) in vertical {
        world.codon_mut(a).bonds[Arm::Vertical.index()] = None;
        world.codon_mut(b).bonds[Arm::Vertical.index()] = None;
        events.push(BondEvent::new(step, BondKind::VerticalBroken, a, b));
    }
    events.sort_by_key(|e| (e.a, e.b));
    events
}

/// Red and blue fields track their own bonds; the vertical field is large
/// while either horizontal arm is bonded. Yellow is left to the signals.
pub fn update_field_sizes(world: &mut World) {
    for c in &mut world.codons {
        let red = c.bond(Arm::Red).is_some();
        let blue = c.bond(Arm::Blue).is_some();
        c.set_field(FieldKind::Red, FieldSize::from_large(red));
        c.set_field(FieldKind::Blue, FieldSize::from_large(blue));
        let (vertical, unused) = match c.ctype {
            CodonType::Type0 => (FieldKind::Purple, FieldKind::Green),
            CodonType::Type1 => (FieldKind::Green, FieldKind::Purple),
        };
        c.set_field(vertical, FieldSize::from_large(red || blue));
        c.set_field(unused, FieldSize::Small);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Container, Pose, SimParams};
    use std::f64::consts::PI;

    fn world() -> World {
        World::new(Container::new(200.0, 200.0), SimParams::default(), 0)
    }

    fn index(w: &World) -> SpatialIndex {
        let mut idx = SpatialIndex::for_params(&w.params);
        idx.rebuild(w);
        idx
    }

    /// Places `b` so that its blue tip sits exactly on `a`'s red tip.
    fn chain_pose(a: Pose, params: &SimParams, angle: f64) -> Pose {
        let l = params.arm_length_horizontal;
        Pose::new(
            a.x + l * a.angle.cos() + l * angle.cos(),
            a.y + l * a.angle.sin() + l * angle.sin(),
            angle,
        )
    }

    #[test]
    fn aligned_touching_tips_bond() {
        let mut w = world();
        let pa = Pose::new(50.0, 50.0, 0.0);
        let a = w.add_codon(CodonType::Type0, pa).unwrap();
        let pb = chain_pose(pa, &w.params, 0.0);
        let b = w.add_codon(CodonType::Type1, pb).unwrap();
        let idx = index(&w);
        let ev = try_form_red_blue_bonds(&mut w, &idx);
        assert_eq!(ev, vec![BondEvent::new(0, BondKind::RedBlueFormed, a, b)]);
        assert_eq!(w.codon(a).bond(Arm::Red), Some(b));
        assert_eq!(w.codon(b).bond(Arm::Blue), Some(a));
        assert!(w.codon(a).field(FieldKind::Red).is_large());
        assert!(w.codon(b).field(FieldKind::Blue).is_large());
    }

    #[test]
    fn misaligned_by_eighth_turn_does_not_bond() {
        let mut w = world();
        let pa = Pose::new(50.0, 50.0, 0.0);
        w.add_codon(CodonType::Type0, pa).unwrap();
        let pb = chain_pose(pa, &w.params, PI / 8.0);
        w.add_codon(CodonType::Type1, pb).unwrap();
        let idx = index(&w);
        assert!(try_form_red_blue_bonds(&mut w, &idx).is_empty());
    }

    #[test]
    fn contention_goes_to_lower_id() {
        // Codon 0 owns the blue tip; codons 1 and 2 both put a red tip on it.
        let mut w = world();
        let p = w.params.clone();
        let l = p.arm_length_horizontal;
        let blue_owner = Pose::new(100.0, 100.0, 0.0);
        let target = (blue_owner.x - l, blue_owner.y);
        let c0 = w.add_codon(CodonType::Type0, blue_owner).unwrap();
        let c1 = w
            .add_codon(CodonType::Type0, Pose::new(target.0 - l, target.1, 0.0))
            .unwrap();
        let off = p.radius(FieldKind::Red, false);
        let c2 = w
            .add_codon(CodonType::Type1, Pose::new(target.0 - l, target.1 + off, 0.0))
            .unwrap();
        let idx = index(&w);
        let ev = try_form_red_blue_bonds(&mut w, &idx);
        assert_eq!(ev.len(), 1);
        assert_eq!(w.codon(c0).bond(Arm::Blue), Some(c1));
        assert_eq!(w.codon(c2).bond(Arm::Red), None);
    }

    #[test]
    fn contention_exhaustive_two_candidates() {
        // Every id permutation of (blue owner, red A, red B): the winner is
        // always the red codon forming the smaller (min, max) pair.
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for perm in perms {
            let mut w = world();
            let l = w.params.arm_length_horizontal;
            let mut poses = [Pose::default(); 3];
            poses[perm[0]] = Pose::new(100.0, 100.0, 0.0);
            poses[perm[1]] = Pose::new(100.0 - 2.0 * l, 100.0, 0.0);
            let off = w.params.radius(FieldKind::Red, false);
            poses[perm[2]] = Pose::new(100.0 - 2.0 * l, 100.0 + off, 0.0);
            for (i, pose) in poses.iter().enumerate() {
                let t = if i == 1 {
                    CodonType::Type1
                } else {
                    CodonType::Type0
                };
                w.add_codon(t, *pose).unwrap();
            }
            let idx = index(&w);
            try_form_red_blue_bonds(&mut w, &idx);
            let owner = CodonId(perm[0] as u32);
            let (ra, rb) = (CodonId(perm[1] as u32), CodonId(perm[2] as u32));
            let key = |r: CodonId| (owner.min(r), owner.max(r));
            let winner = if key(ra) < key(rb) { ra } else { rb };
            assert_eq!(w.codon(owner).bond(Arm::Blue), Some(winner), "perm {perm:?}");
        }
    }

    fn vertical_pair(w: &mut World, angle_offset: f64, t0: CodonType, t1: CodonType) -> (CodonId, CodonId) {
        // Codon a's vertical tip at (100, 105); codon b faces it from above.
        let l = w.params.arm_length_vertical;
        let a = w.add_codon(t0, Pose::new(100.0, 100.0, 0.0)).unwrap();
        let b_angle = PI + angle_offset;
        let dir = crate::model::Vec2::from_angle(b_angle + PI / 2.0);
        let tip = crate::model::Vec2::new(100.0, 100.0 + l);
        let mid = tip - dir * l;
        let b = w.add_codon(t1, Pose::new(mid.x, mid.y, b_angle)).unwrap();
        (a, b)
    }

    #[test]
    fn small_purple_small_green_bond() {
        let mut w = world();
        let (a, b) = vertical_pair(&mut w, 0.3, CodonType::Type0, CodonType::Type1);
        let idx = index(&w);
        let ev = try_form_vertical_bonds(&mut w, &idx);
        assert_eq!(ev.len(), 1);
        assert_eq!(w.codon(a).bond(Arm::Vertical), Some(b));
        assert_eq!(w.codon(b).bond(Arm::Vertical), Some(a));
    }

    #[test]
    fn vertical_beyond_third_turn_does_not_bond() {
        let mut w = world();
        vertical_pair(&mut w, PI / 3.0 + 0.01, CodonType::Type0, CodonType::Type1);
        let idx = index(&w);
        assert!(try_form_vertical_bonds(&mut w, &idx).is_empty());
    }

    #[test]
    fn large_large_cannot_initiate() {
        let mut w = world();
        let (a, b) = vertical_pair(&mut w, 0.0, CodonType::Type0, CodonType::Type1);
        w.codon_mut(a).set_field(FieldKind::Purple, FieldSize::Large);
        w.codon_mut(b).set_field(FieldKind::Green, FieldSize::Large);
        let idx = index(&w);
        assert!(try_form_vertical_bonds(&mut w, &idx).is_empty());
        // Small-large may initiate.
        w.codon_mut(b).set_field(FieldKind::Green, FieldSize::Small);
        assert_eq!(try_form_vertical_bonds(&mut w, &idx).len(), 1);
    }

    #[test]
    fn same_type_vertical_never_bonds() {
        for t in [CodonType::Type0, CodonType::Type1] {
            let mut w = world();
            vertical_pair(&mut w, 0.0, t, t);
            let idx = index(&w);
            assert!(try_form_vertical_bonds(&mut w, &idx).is_empty());
        }
    }

    #[test]
    fn break_is_strict() {
        let mut w = world();
        let l = w.params.arm_length_horizontal;
        let sum = 2.0 * w.params.radii[FieldKind::Red.index()].large;
        let a = w.add_codon(CodonType::Type0, Pose::new(50.0, 50.0, 0.0)).unwrap();
        let b = w
            .add_codon(CodonType::Type0, Pose::new(50.0 + 2.0 * l + sum, 50.0, 0.0))
            .unwrap();
        w.link(a, Arm::Red, b);
        assert!(break_lost_contact_bonds(&mut w).is_empty());
        assert_eq!(w.codon(a).bond(Arm::Red), Some(b));

        w.codon_mut(b).pose.x += 1e-9;
        let ev = break_lost_contact_bonds(&mut w);
        assert_eq!(ev, vec![BondEvent::new(0, BondKind::RedBlueBroken, a, b)]);
        assert!(!w.codon(a).field(FieldKind::Red).is_large());
        assert!(!w.codon(b).field(FieldKind::Blue).is_large());
        update_field_sizes(&mut w);
        w.check_invariants().unwrap();
    }

    #[test]
    fn small_vertical_bond_breaks_beyond_small_radii() {
        let mut w = world();
        let (a, b) = vertical_pair(&mut w, 0.0, CodonType::Type0, CodonType::Type1);
        w.link(a, Arm::Vertical, b);
        let small =
            w.params.radii[FieldKind::Purple.index()].small + w.params.radii[FieldKind::Green.index()].small;
        w.codon_mut(b).pose.y += small + 1e-6;
        let ev = break_lost_contact_bonds(&mut w);
        assert_eq!(ev, vec![BondEvent::new(0, BondKind::VerticalBroken, a, b)]);
        assert_eq!(w.codon(a).bond(Arm::Vertical), None);
    }

    #[test]
    fn field_sizes_follow_bonds() {
        let mut w = world();
        let a = w.add_codon(CodonType::Type1, Pose::new(50.0, 50.0, 0.0)).unwrap();
        let b = w.add_codon(CodonType::Type0, Pose::new(60.0, 50.0, 0.0)).unwrap();
        let free = w
            .add_codon(CodonType::Type0, Pose::new(150.0, 150.0, 0.0))
            .unwrap();
        w.codon_mut(a).bonds[Arm::Red.index()] = Some(b);
        w.codon_mut(b).bonds[Arm::Blue.index()] = Some(a);
        update_field_sizes(&mut w);
        assert!(w.codon(a).field(FieldKind::Green).is_large());
        assert!(w.codon(a).field(FieldKind::Red).is_large());
        assert!(w.codon(b).field(FieldKind::Purple).is_large());
        assert_eq!(w.codon(free).fields, [FieldSize::Small; 5]);

        // Losing the only horizontal bond shrinks the vertical field but
        // leaves a vertical bond in place.
        let c = w.add_codon(CodonType::Type0, Pose::new(50.0, 60.0, PI)).unwrap();
        w.codon_mut(a).bonds[Arm::Vertical.index()] = Some(c);
        w.codon_mut(c).bonds[Arm::Vertical.index()] = Some(a);
        w.codon_mut(a).bonds[Arm::Red.index()] = None;
        w.codon_mut(b).bonds[Arm::Blue.index()] = None;
        update_field_sizes(&mut w);
        assert!(!w.codon(a).field(FieldKind::Green).is_large());
        assert_eq!(w.codon(a).bond(Arm::Vertical), Some(c));
    }
}
