//! Strands are never stored: they are read back out of the red-blue bond
//! slots. A strand is listed from its blue end (empty blue slot) to its red
//! end, and bit `i` is the type of codon `i`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{BitsError, Result, SimError};
use crate::model::{Arm, CodonId, CodonType, Pose, Vec2};
use crate::world::World;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrandRecord {
    pub codon_ids: Vec<CodonId>,
    pub bits: String,
    /// A free strand, or one side of a double strand whose partners form
    /// exactly one strand of the same length.
    pub complete: bool,
    /// Vertical neighbour of each member, when any member has one.
    pub partner_ids: Option<Vec<Option<CodonId>>>,
}

impl StrandRecord {
    pub fn len(&self) -> usize {
        self.codon_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codon_ids.is_empty()
    }
}

/// Walks red links from `start` (which must have an empty blue slot).
fn walk_chain(world: &World, start: CodonId) -> Result<Vec<CodonId>> {
    let mut chain = vec![start];
    let mut cur = start;
    while let Some(next) = world.codon(cur).bond(Arm::Red) {
        if chain.len() > world.len() {
            return Err(SimError::StrandCycle(start));
        }
        chain.push(next);
        cur = next;
    }
    Ok(chain)
}

/// The red-blue chain containing `id`, blue end first.
pub fn strand_of(world: &World, id: CodonId) -> Result<Vec<CodonId>> {
    let mut start = id;
    let mut hops = 0;
    while let Some(prev) = world.codon(start).bond(Arm::Blue) {
        hops += 1;
        if hops > world.len() {
            return Err(SimError::StrandCycle(id));
        }
        start = prev;
    }
    walk_chain(world, start)
}

pub fn bits_of(world: &World, ids: &[CodonId]) -> String {
    ids.iter().map(|&id| world.codon(id).ctype.bit()).collect()
}

/// Partitions all codons into maximal red-blue chains, singletons
/// included, ordered by smallest member id.
pub fn extract_strands(world: &World) -> Result<Vec<StrandRecord>> {
    let mut chains = Vec::new();
    let mut seen = vec![false; world.len()];
    for c in &world.codons {
        if c.bond(Arm::Blue).is_none() {
            let chain = walk_chain(world, c.id)?;
            for id in &chain {
                seen[id.index()] = true;
            }
            chains.push(chain);
        }
    }
    // Anything unvisited sits on a loop with no blue end.
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(SimError::StrandCycle(CodonId(i as u32)));
    }

    let mut strand_index = vec![usize::MAX; world.len()];
    for (si, chain) in chains.iter().enumerate() {
        for id in chain {
            strand_index[id.index()] = si;
        }
    }

    let mut records: Vec<StrandRecord> = chains
        .iter()
        .map(|chain| {
            let partners: Vec<Option<CodonId>> = chain
                .iter()
                .map(|&id| world.codon(id).bond(Arm::Vertical))
                .collect();
            let any = partners.iter().any(Option::is_some);
            let complete = if !any {
                true
            } else if partners.iter().all(Option::is_some) {
                let owners: HashSet<usize> = partners
                    .iter()
                    .map(|p| strand_index[p.unwrap().index()])
                    .collect();
                owners.len() == 1 && chains[*owners.iter().next().unwrap()].len() == chain.len()
            } else {
                false
            };
            StrandRecord {
                codon_ids: chain.clone(),
                bits: bits_of(world, chain),
                complete,
                partner_ids: any.then_some(partners),
            }
        })
        .collect();
    records.sort_by_key(|r| r.codon_ids.iter().min().copied());
    Ok(records)
}

fn check_bits(bits: &str) -> Result<(), BitsError> {
    match bits.chars().enumerate().find(|(_, c)| *c != '0' && *c != '1') {
        Some((position, found)) => Err(BitsError { position, found }),
        None => Ok(()),
    }
}

/// Complement every bit.
pub fn negate(bits: &str) -> Result<String, BitsError> {
    check_bits(bits)?;
    Ok(bits.chars().map(|c| if c == '0' { '1' } else { '0' }).collect())
}

pub fn reverse(bits: &str) -> Result<String, BitsError> {
    check_bits(bits)?;
    Ok(bits.chars().rev().collect())
}

pub fn concat(x: &str, y: &str) -> Result<String, BitsError> {
    check_bits(x)?;
    check_bits(y)?;
    Ok(format!("{x}{y}"))
}

/// The negative mirror image: what a strand with these bits replicates into.
pub fn mirror(bits: &str) -> Result<String, BitsError> {
    reverse(&negate(bits)?)
}

/// `x` followed by its negative mirror image; replicates into itself.
pub fn symmetrize(bits: &str) -> Result<String, BitsError> {
    concat(bits, &mirror(bits)?)
}

/// Lays a straight, pre-bonded strand with its first codon at `pose` and
/// each next codon one bond length further along the red arm.
pub fn place_seed(world: &mut World, bits: &str, pose: Pose) -> Result<Vec<CodonId>> {
    check_bits(bits)?;
    let spacing = 2.0 * world.params.arm_length_horizontal;
    let dir = Vec2::from_angle(pose.angle);
    let start = pose.middle();
    for i in 0..bits.len() {
        let m = start + dir * (spacing * i as f64);
        if !world.container.contains(m) {
            return Err(SimError::OutOfBounds { x: m.x, y: m.y });
        }
    }
    let mut ids = Vec::with_capacity(bits.len());
    for (i, b) in bits.chars().enumerate() {
        let m = start + dir * (spacing * i as f64);
        let ctype = CodonType::from_bit(b).expect("checked bits");
        ids.push(world.add_codon(ctype, Pose::new(m.x, m.y, pose.angle))?);
    }
    for w in ids.windows(2) {
        world.link(w[0], Arm::Red, w[1]);
    }
    Ok(ids)
}

/// Pose that centers a strand of `len` codons on `center`.
pub fn centered_seed_pose(world: &World, len: usize, center: Vec2, angle: f64) -> Pose {
    let spacing = 2.0 * world.params.arm_length_horizontal;
    let half = spacing * (len.saturating_sub(1)) as f64 / 2.0;
    let start = center - Vec2::from_angle(angle) * half;
    Pose::new(start.x, start.y, angle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Container, SimParams};
    use proptest::prelude::*;

    fn world() -> World {
        World::new(Container::new(200.0, 200.0), SimParams::default(), 0)
    }

    #[test]
    fn free_codons_are_singletons() {
        let mut w = world();
        for i in 0..5 {
            w.add_codon(CodonType::Type0, Pose::new(10.0 + 20.0 * i as f64, 10.0, 0.0))
                .unwrap();
        }
        let s = extract_strands(&w).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s
            .iter()
            .all(|r| r.len() == 1 && r.complete && r.partner_ids.is_none()));
    }

    #[test]
    fn seed_round_trips() {
        let mut w = world();
        let pose = centered_seed_pose(&w, 8, w.container.center(), 0.0);
        place_seed(&mut w, "00011001", pose).unwrap();
        let s = extract_strands(&w).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].bits, "00011001");
        assert!(s[0].complete);
        w.check_invariants().unwrap();
    }

    #[test]
    fn single_bit_seed_is_free() {
        let mut w = world();
        let ids = place_seed(&mut w, "0", Pose::new(50.0, 50.0, 0.0)).unwrap();
        assert!(w.codon(ids[0]).is_free());
    }

    #[test]
    fn seed_overflow_rejected() {
        let mut w = world();
        let err = place_seed(&mut w, "00011001", Pose::new(190.0, 50.0, 0.0)).unwrap_err();
        assert!(matches!(err, SimError::OutOfBounds { .. }));
        assert!(w.is_empty());
    }

    #[test]
    fn seed_rejects_bad_bits() {
        let mut w = world();
        assert!(matches!(
            place_seed(&mut w, "01x", Pose::new(50.0, 50.0, 0.0)),
            Err(SimError::InvalidBits(_))
        ));
    }

    #[test]
    fn missing_interior_bond_gives_incomplete_fragments() {
        // Template of 8 with a daughter whose bond 3-4 is missing.
        let mut w = world();
        let t = place_seed(&mut w, "00011001", Pose::new(20.0, 50.0, 0.0)).unwrap();
        let mut d = Vec::new();
        for &tid in &t {
            let ty = w.codon(tid).ctype.complement();
            let m = w.codon(tid).middle() + Vec2::new(0.0, 10.0);
            let id = w
                .add_codon(ty, Pose::new(m.x, m.y, std::f64::consts::PI))
                .unwrap();
            w.link(tid, Arm::Vertical, id);
            d.push(id);
        }
        for i in 0..7 {
            if i != 3 {
                w.link(d[i + 1], Arm::Red, d[i]);
            }
        }
        let s = extract_strands(&w).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|r| !r.complete));

        // Filling the gap makes both sides complete.
        w.link(d[4], Arm::Red, d[3]);
        let s = extract_strands(&w).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|r| r.complete));
        let daughter = s.iter().find(|r| r.codon_ids[0] == d[7]).unwrap();
        assert_eq!(daughter.bits, mirror("00011001").unwrap());
    }

    #[test]
    fn cycle_is_reported() {
        let mut w = world();
        let a = w.add_codon(CodonType::Type0, Pose::new(10.0, 10.0, 0.0)).unwrap();
        let b = w.add_codon(CodonType::Type0, Pose::new(20.0, 10.0, 0.0)).unwrap();
        w.link(a, Arm::Red, b);
        w.link(b, Arm::Red, a);
        assert!(matches!(extract_strands(&w), Err(SimError::StrandCycle(_))));
    }

    #[test]
    fn string_function_examples() {
        assert_eq!(negate("00011001").unwrap(), "11100110");
        assert_eq!(negate("").unwrap(), "");
        assert_eq!(reverse("11100110").unwrap(), "01100111");
        assert_eq!(reverse(&negate("00011001").unwrap()).unwrap(), "01100111");
        assert_eq!(reverse("1").unwrap(), "1");
        assert_eq!(symmetrize("01").unwrap(), "0101");
        assert_eq!(symmetrize("").unwrap(), "");
        assert_eq!(symmetrize("0001").unwrap(), "00010111");
        assert_ne!(mirror("00011110").unwrap(), "00011110");
        assert_eq!(
            negate("012"),
            Err(BitsError {
                position: 2,
                found: '2'
            })
        );
    }

    proptest! {
        #[test]
        fn negate_is_involution(bits in "[01]{0,40}") {
            prop_assert_eq!(negate(&negate(&bits).unwrap()).unwrap(), bits);
        }

        #[test]
        fn symmetric_encoding_is_fixed_by_mirror(bits in "[01]{0,40}") {
            let g = symmetrize(&bits).unwrap();
            prop_assert_eq!(g.len(), 2 * bits.len());
            prop_assert_eq!(mirror(&g).unwrap(), g);
        }

        #[test]
        fn seed_round_trip(bits in "[01]{1,12}", angle in 0.0..std::f64::consts::TAU) {
            let mut w = World::new(Container::new(400.0, 400.0), SimParams::default(), 0);
            let pose = centered_seed_pose(&w, bits.len(), w.container.center(), angle);
            place_seed(&mut w, &bits, pose).unwrap();
            let s = extract_strands(&w).unwrap();
            prop_assert_eq!(s.len(), 1);
            prop_assert_eq!(&s[0].bits, &bits);
            prop_assert!(w.check_invariants().is_ok());
        }
    }
}
