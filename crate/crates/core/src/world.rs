use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, SimError};
use crate::model::{
    make_codon, Arm, Codon, CodonId, CodonType, Container, FieldKind, FieldSize, LocationState, Pose,
    SimParams,
};

/// RNG stream consumed by the per-step physics.
pub const DYNAMICS_STREAM: u64 = 0;
/// RNG stream consumed while laying out a scenario's initial soup.
pub const LAYOUT_STREAM: u64 = 1;

/// Seeds a ChaCha8 generator from `seed` on the given stream. One world owns
/// exactly one dynamics stream; layout draws from its own stream so the
/// number of codons placed does not shift the physics draws.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct World {
    pub codons: Vec<Codon>,
    pub container: Container,
    pub params: SimParams,
    pub rng: ChaCha8Rng,
    pub step: u64,
}

impl World {
    pub fn new(container: Container, params: SimParams, rng_seed: u64) -> Self {
        Self {
            codons: Vec::new(),
            container,
            params,
            rng: seeded_rng(rng_seed, DYNAMICS_STREAM),
            step: 0,
        }
    }

    /// Adds a free codon. Ids are dense and equal to the insertion index.
    pub fn add_codon(&mut self, ctype: CodonType, pose: Pose) -> Result<CodonId> {
        let id = CodonId(self.codons.len() as u32);
        self.codons.push(make_codon(ctype, pose, id, &self.container)?);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.codons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codons.is_empty()
    }

    pub fn codon(&self, id: CodonId) -> &Codon {
        &self.codons[id.index()]
    }

    pub fn codon_mut(&mut self, id: CodonId) -> &mut Codon {
        &mut self.codons[id.index()]
    }

    pub fn get(&self, id: CodonId) -> Result<&Codon> {
        self.codons.get(id.index()).ok_or(SimError::UnknownCodon(id))
    }

    /// Step count times `timestep_duration`.
    pub fn normalized_time(&self) -> f64 {
        self.step as f64 * self.params.timestep_duration
    }

    /// Links `a`'s `arm` to the matching arm of `b` and sets field sizes as
    /// the bond rules would. Used to build seeds and test fixtures; the
    /// simulation itself forms bonds through the bonding module.
    pub fn link(&mut self, a: CodonId, arm: Arm, b: CodonId) {
        let partner_arm = arm.partner();
        self.codon_mut(a).bonds[arm.index()] = Some(b);
        self.codon_mut(b).bonds[partner_arm.index()] = Some(a);
        for (id, arm) in [(a, arm), (b, partner_arm)] {
            let c = self.codon_mut(id);
            match arm {
                Arm::Red => c.set_field(FieldKind::Red, FieldSize::Large),
                Arm::Blue => c.set_field(FieldKind::Blue, FieldSize::Large),
                Arm::Vertical => {}
            }
            let vertical = c.vertical_field();
            let size = FieldSize::from_large(c.horizontal_bond_count() > 0);
            c.set_field(vertical, size);
        }
    }

    /// SHA-256 over every state variable, bit-exact for floats.
    pub fn state_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.step.to_le_bytes());
        h.update(self.rng.get_seed());
        h.update(self.rng.get_stream().to_le_bytes());
        h.update(self.rng.get_word_pos().to_le_bytes());
        for c in &self.codons {
            h.update(c.id.0.to_le_bytes());
            h.update([c.ctype as u8]);
            for v in [c.pose.x, c.pose.y, c.pose.angle, c.vel.vx, c.vel.vy, c.vel.omega] {
                h.update(v.to_bits().to_le_bytes());
            }
            for f in c.fields {
                h.update([f as u8]);
            }
            for b in c.bonds {
                h.update(b.map_or(u32::MAX, |id| id.0).to_le_bytes());
            }
            h.update([c.location as u8, c.splitting as u8]);
            h.update(c.yellow_timer.to_le_bytes());
            h.update(c.z_timer.to_le_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Checks the bond and field-size consistency rules. Returns a
    /// description of the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for c in &self.codons {
            if !self.container.contains(c.middle()) {
                return Err(format!("codon {} middle outside container", c.id));
            }
            for arm in Arm::ALL {
                let Some(other) = c.bond(arm) else { continue };
                let Some(o) = self.codons.get(other.index()) else {
                    return Err(format!("codon {} bonded to missing codon {}", c.id, other));
                };
                if other == c.id {
                    return Err(format!("codon {} bonded to itself", c.id));
                }
                if o.bond(arm.partner()) != Some(c.id) {
                    return Err(format!(
                        "bond asymmetry: {} {:?} -> {} but not back",
                        c.id, arm, other
                    ));
                }
                if arm == Arm::Vertical && o.ctype == c.ctype {
                    return Err(format!(
                        "vertical bond between same-type codons {} and {}",
                        c.id, other
                    ));
                }
            }
            let red = c.bond(Arm::Red).is_some();
            let blue = c.bond(Arm::Blue).is_some();
            if c.field(FieldKind::Red).is_large() != red {
                return Err(format!("codon {}: red field size disagrees with red bond", c.id));
            }
            if c.field(FieldKind::Blue).is_large() != blue {
                return Err(format!(
                    "codon {}: blue field size disagrees with blue bond",
                    c.id
                ));
            }
            if c.field(c.vertical_field()).is_large() != (red || blue) {
                return Err(format!(
                    "codon {}: vertical field size disagrees with horizontal bonds",
                    c.id
                ));
            }
            let unused = match c.vertical_field() {
                FieldKind::Purple => FieldKind::Green,
                _ => FieldKind::Purple,
            };
            if c.field(unused).is_large() {
                return Err(format!(
                    "codon {}: {} field set on wrong type",
                    c.id,
                    unused.name()
                ));
            }
            if c.location == LocationState::S2
                && !(c.horizontal_bond_count() == 1 && c.bond(Arm::Vertical).is_some())
            {
                return Err(format!(
                    "codon {} in S2 but not at the end of a double strand",
                    c.id
                ));
            }
        }
        Ok(())
    }
}
