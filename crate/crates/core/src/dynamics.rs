//! Virtual physics: brownian kicks, viscosity, bond springs with
//! straightening and dampening, yellow repulsion, and explicit Euler
//! integration with bouncing walls.
//!
//! Forces act at arm tips; torque about the middle is `r x F`.

use rand_distr::{Distribution, Normal};

use crate::error::{Result, SimError};
use crate::model::{normalize_angle, signed_angle, Arm, Codon, CodonId, FieldKind, SimParams, Vec2};
use crate::spatial::SpatialIndex;
use crate::world::World;

/// Per-codon force and torque for one step.
#[derive(Debug, Clone, Default)]
pub struct ForceAccumulator {
    force: Vec<Vec2>,
    torque: Vec<f64>,
}

impl ForceAccumulator {
    pub fn new(n: usize) -> Self {
        Self {
            force: vec![Vec2::ZERO; n],
            torque: vec![0.0; n],
        }
    }

    /// Zeroes every entry and resizes to `n` codons.
    pub fn reset(&mut self, n: usize) {
        self.force.clear();
        self.force.resize(n, Vec2::ZERO);
        self.torque.clear();
        self.torque.resize(n, 0.0);
    }

    pub fn len(&self) -> usize {
        self.force.len()
    }

    pub fn is_empty(&self) -> bool {
        self.force.is_empty()
    }

    pub fn force(&self, id: CodonId) -> Vec2 {
        self.force[id.index()]
    }

    pub fn torque(&self, id: CodonId) -> f64 {
        self.torque[id.index()]
    }

    /// Applies `f` at world point `at` on codon `c`.
    pub fn apply_at(&mut self, c: &Codon, at: Vec2, f: Vec2) {
        let i = c.id.index();
        self.force[i] += f;
        self.torque[i] += (at - c.middle()).cross(f);
    }

    pub fn add_torque(&mut self, id: CodonId, t: f64) {
        self.torque[id.index()] += t;
    }

    pub fn total_force(&self) -> Vec2 {
        self.force.iter().fold(Vec2::ZERO, |acc, &f| acc + f)
    }
}

/// Adds an independent Gaussian kick to each velocity component, drawing
/// from the world's RNG in codon-id order.
pub fn apply_brownian(world: &mut World) {
    let p = &world.params;
    let linear = Normal::new(0.0, p.brownian_linear_sigma).expect("validated sigma");
    let angular = Normal::new(0.0, p.brownian_angular_sigma).expect("validated sigma");
    let rng = &mut world.rng;
    for c in &mut world.codons {
        c.vel.vx += linear.sample(rng);
        c.vel.vy += linear.sample(rng);
        c.vel.omega += angular.sample(rng);
    }
}

pub fn apply_viscosity(world: &mut World) {
    let lin = world.params.linear_viscosity;
    let ang = world.params.angular_viscosity;
    for c in &mut world.codons {
        c.vel.vx *= lin;
        c.vel.vy *= lin;
        c.vel.omega *= ang;
    }
}

/// Signed angle from the middle-to-middle line to the bonded arm.
pub fn straightening_angle(c: &Codon, arm: Arm, other: &Codon) -> f64 {
    let line = other.middle() - c.middle();
    if line.norm() == 0.0 {
        return 0.0;
    }
    signed_angle(line, c.arm_direction(arm))
}

/// Bonded pairs in deterministic order: each red-blue bond once (from its
/// red side), each vertical bond once (from the lower id).
pub fn bonded_pairs(world: &World) -> Vec<(CodonId, Arm, CodonId)> {
    let mut pairs = Vec::new();
    for c in &world.codons {
        if let Some(b) = c.bond(Arm::Red) {
            pairs.push((c.id, Arm::Red, b));
        }
        if let Some(b) = c.bond(Arm::Vertical) {
            if c.id < b {
                pairs.push((c.id, Arm::Vertical, b));
            }
        }
    }
    pairs
}

/// Spring attraction between bonded tips, straightening torques, then
/// dampening of the pair's relative and angular velocities.
pub fn apply_bond_springs(world: &mut World, acc: &mut ForceAccumulator) {
    let pairs = bonded_pairs(world);
    let p = world.params.clone();
    for (a_id, arm_a, b_id) in pairs {
        let arm_b = arm_a.partner();
        let a = world.codon(a_id);
        let b = world.codon(b_id);
        let tip_a = a.tip(arm_a, &p);
        let tip_b = b.tip(arm_b, &p);
        let pull = (tip_b - tip_a) * p.k_attract;
        acc.apply_at(a, tip_a, pull);
        acc.apply_at(b, tip_b, -pull);
        acc.add_torque(a_id, -p.k_straighten * straightening_angle(a, arm_a, b));
        acc.add_torque(b_id, -p.k_straighten * straightening_angle(b, arm_b, a));

        let avg = (a.vel.linear() + b.vel.linear()) * 0.5;
        for id in [a_id, b_id] {
            let c = world.codon_mut(id);
            let v = avg + (c.vel.linear() - avg) * p.linear_dampening;
            c.vel.vx = v.x;
            c.vel.vy = v.y;
            c.vel.omega *= p.angular_dampening;
        }
    }
}

/// Every pair of intersecting large yellow fields pushes apart with a
/// force that falls linearly to zero at the sum of the radii.
pub fn apply_yellow_repulsion(world: &World, index: &SpatialIndex, acc: &mut ForceAccumulator) {
    let p = &world.params;
    let mut near = Vec::new();
    for a in world
        .codons
        .iter()
        .filter(|c| c.field(FieldKind::Yellow).is_large())
    {
        let ca = a.field_center(FieldKind::Yellow, p);
        let ra = a.field_radius(FieldKind::Yellow, p);
        index.candidates_into(ca, ra, &mut near);
        for &bid in near.iter().filter(|&&b| b > a.id) {
            let b = world.codon(bid);
            if !b.field(FieldKind::Yellow).is_large() {
                continue;
            }
            let cb = b.field_center(FieldKind::Yellow, p);
            let rb = b.field_radius(FieldKind::Yellow, p);
            let d = ca.distance(cb);
            if d > ra + rb {
                continue;
            }
            let dir = repulsion_direction(a, ca, b, cb);
            let f = dir * (p.k_repel * (ra + rb - d));
            acc.apply_at(b, cb, f);
            acc.apply_at(a, ca, -f);
        }
    }
}

/// Unit vector from A's yellow center toward B's. Coincident centers fall
/// back to the middle-to-middle line, then to +x.
fn repulsion_direction(a: &Codon, ca: Vec2, b: &Codon, cb: Vec2) -> Vec2 {
    for v in [cb - ca, b.middle() - a.middle()] {
        let n = v.norm();
        if n > 1e-12 {
            return v * (1.0 / n);
        }
    }
    Vec2::new(1.0, 0.0)
}

/// Semi-implicit Euler step and wall bounce.
pub fn integrate(world: &mut World, acc: &ForceAccumulator) -> Result<()> {
    let p: &SimParams = &world.params;
    let dt = p.timestep_duration;
    let (inv_m, inv_i) = (1.0 / p.mass, 1.0 / p.moment_of_inertia);
    let bounds = world.container;
    let step = world.step;
    for c in &mut world.codons {
        let i = c.id.index();
        let f = acc.force[i];
        let t = acc.torque[i];
        if !(f.is_finite() && t.is_finite()) {
            return Err(SimError::NumericInstability {
                step,
                codon: c.id,
                quantity: "force",
            });
        }
        c.vel.vx += f.x * inv_m * dt;
        c.vel.vy += f.y * inv_m * dt;
        c.vel.omega += t * inv_i * dt;
        c.pose.x += c.vel.vx * dt;
        c.pose.y += c.vel.vy * dt;
        c.pose.angle = normalize_angle(c.pose.angle + c.vel.omega * dt);
        if !(c.pose.x.is_finite() && c.pose.y.is_finite() && c.pose.angle.is_finite() && c.vel.is_finite()) {
            return Err(SimError::NumericInstability {
                step,
                codon: c.id,
                quantity: "position",
            });
        }
        if c.pose.x < bounds.x_min {
            c.pose.x = bounds.x_min;
            c.vel.vx = c.vel.vx.abs();
        } else if c.pose.x > bounds.x_max {
            c.pose.x = bounds.x_max;
            c.vel.vx = -c.vel.vx.abs();
        }
        if c.pose.y < bounds.y_min {
            c.pose.y = bounds.y_min;
            c.vel.vy = c.vel.vy.abs();
        } else if c.pose.y > bounds.y_max {
            c.pose.y = bounds.y_max;
            c.vel.vy = -c.vel.vy.abs();
        }
    }
    Ok(())
}

/// Sum of translational and rotational kinetic energy.
pub fn kinetic_energy(world: &World) -> f64 {
    let p = &world.params;
    world
        .codons
        .iter()
        .map(|c| {
            0.5 * p.mass * (c.vel.vx * c.vel.vx + c.vel.vy * c.vel.vy)
                + 0.5 * p.moment_of_inertia * c.vel.omega * c.vel.omega
        })
        .sum()
}
