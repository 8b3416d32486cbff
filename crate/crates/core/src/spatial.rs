//! Uniform grid over codon middles.
//!
//! A field is centered at most one arm length from its codon's middle and
//! reaches at most the largest radius beyond that, so a query only has to
//! look at codons whose middle lies within `radius + reach` of the query
//! point. Results are always sorted by id.

use std::collections::HashMap;

use crate::model::{CodonId, SimParams, Vec2};
use crate::world::World;

#[derive(Debug, Clone)]
pub struct SpatialIndex {
    cell_size: f64,
    inv_cell: f64,
    /// Furthest a field boundary can sit from its codon's middle.
    reach: f64,
    cells: HashMap<(i32, i32), Vec<CodonId>>,
    middles: Vec<Vec2>,
}

impl SpatialIndex {
    pub fn new(cell_size: f64, reach: f64) -> Self {
        assert!(
            cell_size > 0.0 && cell_size.is_finite(),
            "cell size must be positive"
        );
        Self {
            cell_size,
            inv_cell: 1.0 / cell_size,
            reach,
            cells: HashMap::new(),
            middles: Vec::new(),
        }
    }

    /// Cell size `2 * max radius + max arm length`; reach covers every field.
    pub fn for_params(params: &SimParams) -> Self {
        let r = params.max_radius();
        let arm = params.max_arm_length();
        Self::new(2.0 * r + arm, arm + r)
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn reach(&self) -> f64 {
        self.reach
    }

    pub fn cell_of(&self, p: Vec2) -> (i32, i32) {
        (
            (p.x * self.inv_cell).floor() as i32,
            (p.y * self.inv_cell).floor() as i32,
        )
    }

    pub fn cell(&self, key: (i32, i32)) -> &[CodonId] {
        self.cells.get(&key).map_or(&[], Vec::as_slice)
    }

    pub fn occupied_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn rebuild(&mut self, world: &World) {
        for bucket in self.cells.values_mut() {
            bucket.clear();
        }
        self.middles.clear();
        for c in &world.codons {
            let m = c.middle();
            self.middles.push(m);
            let key = self.cell_of(m);
            // Codons are visited in id order, so buckets stay sorted.
            self.cells.entry(key).or_default().push(c.id);
        }
        self.cells.retain(|_, v| !v.is_empty());
    }

    /// Every codon with a field that could intersect the circle at `center`
    /// with the given radius, in ascending id order.
    pub fn candidates_near(&self, center: Vec2, radius: f64) -> Vec<CodonId> {
        let mut out = Vec::new();
        self.candidates_into(center, radius, &mut out);
        out
    }

    pub fn candidates_into(&self, center: Vec2, radius: f64, out: &mut Vec<CodonId>) {
        out.clear();
        let span = radius + self.reach;
        let (x0, y0) = self.cell_of(Vec2::new(center.x - span, center.y - span));
        let (x1, y1) = self.cell_of(Vec2::new(center.x + span, center.y + span));
        for cx in x0..=x1 {
            for cy in y0..=y1 {
                for &id in self.cell((cx, cy)) {
                    if self.middles[id.index()].distance(center) <= span {
                        out.push(id);
                    }
                }
            }
        }
        out.sort_unstable();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CodonType, Container, Pose};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_world(n: usize, seed: u64) -> World {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = World::new(Container::new(200.0, 200.0), SimParams::default(), seed);
        for i in 0..n {
            let t = if i % 2 == 0 {
                CodonType::Type0
            } else {
                CodonType::Type1
            };
            let pose = Pose::new(
                rng.random_range(0.0..200.0),
                rng.random_range(0.0..200.0),
                rng.random_range(0.0..std::f64::consts::TAU),
            );
            w.add_codon(t, pose).unwrap();
        }
        w
    }

    fn brute_force(w: &World, center: Vec2, span: f64) -> Vec<CodonId> {
        w.codons
            .iter()
            .filter(|c| c.middle().distance(center) <= span)
            .map(|c| c.id)
            .collect()
    }

    #[test]
    fn empty_world_empty_grid() {
        let mut idx = SpatialIndex::new(10.0, 5.0);
        let w = World::new(Container::new(10.0, 10.0), SimParams::default(), 0);
        idx.rebuild(&w);
        assert_eq!(idx.occupied_cells(), 0);
        assert!(idx.candidates_near(Vec2::new(5.0, 5.0), 100.0).is_empty());
    }

    #[test]
    fn single_codon_lands_in_origin_cell() {
        let mut w = World::new(Container::centered(100.0, 100.0), SimParams::default(), 0);
        let id = w.add_codon(CodonType::Type0, Pose::new(0.0, 0.0, 0.0)).unwrap();
        let mut idx = SpatialIndex::new(10.0, 5.0);
        idx.rebuild(&w);
        assert_eq!(idx.cell((0, 0)), &[id]);
        assert!(idx.candidates_near(Vec2::ZERO, 0.0).contains(&id));
        assert!(idx.candidates_near(Vec2::new(40.0, 40.0), 1.0).is_empty());
    }

    #[test]
    fn matches_brute_force_on_random_configurations() {
        for seed in 0..100 {
            let w = random_world(50, seed);
            let mut idx = SpatialIndex::for_params(&w.params);
            idx.rebuild(&w);
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 1000);
            for _ in 0..10 {
                let center = Vec2::new(rng.random_range(-10.0..210.0), rng.random_range(-10.0..210.0));
                let radius = rng.random_range(0.0..6.0);
                let expected = brute_force(&w, center, radius + idx.reach());
                assert_eq!(idx.candidates_near(center, radius), expected);
            }
        }
    }

    #[test]
    fn no_false_negatives_for_field_pairs() {
        // Every pair of codons with any two intersecting field circles (at
        // large radius) must see each other.
        let w = random_world(200, 7);
        let p = &w.params;
        let mut idx = SpatialIndex::for_params(p);
        idx.rebuild(&w);
        let r = p.max_radius();
        for a in &w.codons {
            for arm_a in crate::model::Arm::ALL {
                let tip_a = a.tip(arm_a, p);
                let near = idx.candidates_near(tip_a, r);
                for b in &w.codons {
                    let hit = crate::model::Arm::ALL
                        .iter()
                        .any(|&arm_b| b.tip(arm_b, p).distance(tip_a) <= 2.0 * r);
                    if hit {
                        assert!(near.contains(&b.id));
                    }
                }
            }
        }
    }

    #[test]
    fn rebuild_is_deterministic() {
        let w = random_world(80, 3);
        let mut a = SpatialIndex::for_params(&w.params);
        let mut b = SpatialIndex::for_params(&w.params);
        a.rebuild(&w);
        b.rebuild(&w);
        let q = Vec2::new(100.0, 100.0);
        assert_eq!(a.candidates_near(q, 50.0), b.candidates_near(q, 50.0));
    }
}
