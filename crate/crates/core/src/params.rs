//! Physical and protocol constants.
//!
//! Viscosity and dampening factors are per-step multipliers, not rates per
//! unit time. Changing `timestep_duration` therefore changes how much
//! dissipation happens per unit of normalized time, and a profile tuned at
//! one timestep has to be re-tuned at another.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::model::FieldKind;

/// Small and large radius of one field kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldRadii {
    pub small: f64,
    pub large: f64,
}

impl FieldRadii {
    pub const fn new(small: f64, large: f64) -> Self {
        Self { small, large }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub timestep_duration: f64,
    pub arm_length_horizontal: f64,
    pub arm_length_vertical: f64,
    /// Indexed by [`FieldKind::index`].
    pub radii: [FieldRadii; 5],
    pub k_attract: f64,
    pub k_repel: f64,
    pub k_straighten: f64,
    pub linear_viscosity: f64,
    pub angular_viscosity: f64,
    pub linear_dampening: f64,
    pub angular_dampening: f64,
    pub brownian_linear_sigma: f64,
    pub brownian_angular_sigma: f64,
    pub red_blue_angle: f64,
    pub purple_green_angle: f64,
    /// Steps a yellow field stays large, and steps a strand end waits in Z.
    pub split_timer: u32,
    pub mass: f64,
    pub moment_of_inertia: f64,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            timestep_duration: 0.05,
            arm_length_horizontal: 5.0,
            arm_length_vertical: 5.0,
            // Red, blue, green, purple, yellow.
            radii: [
                FieldRadii::new(0.02, 2.5),
                FieldRadii::new(0.02, 2.5),
                FieldRadii::new(0.5, 3.5),
                FieldRadii::new(0.5, 3.5),
                FieldRadii::new(0.5, 2.5),
            ],
            k_attract: 3.0,
            k_repel: 3.0,
            k_straighten: 100.0,
            linear_viscosity: 0.99,
            angular_viscosity: 0.9,
            linear_dampening: 0.5,
            angular_dampening: 0.5,
            brownian_linear_sigma: 0.1,
            brownian_angular_sigma: 0.02,
            red_blue_angle: PI / 256.0,
            purple_green_angle: PI / 3.0,
            split_timer: 150,
            mass: 1.0,
            moment_of_inertia: 1.0,
        }
    }
}

impl SimParams {
    pub fn radius(&self, kind: FieldKind, large: bool) -> f64 {
        let r = self.radii[kind.index()];
        if large {
            r.large
        } else {
            r.small
        }
    }

    pub fn max_arm_length(&self) -> f64 {
        self.arm_length_horizontal.max(self.arm_length_vertical)
    }

    pub fn max_radius(&self) -> f64 {
        self.radii
            .iter()
            .map(|r| r.large.max(r.small))
            .fold(0.0, f64::max)
    }

    /// Reads a scalar constant by its configuration key.
    pub fn get(&self, key: &str) -> Option<f64> {
        if let Some((kind, large)) = radius_key(key) {
            let r = self.radii[kind.index()];
            return Some(if large { r.large } else { r.small });
        }
        Some(match key {
            "timestep_duration" => self.timestep_duration,
            "arm_length_horizontal" => self.arm_length_horizontal,
            "arm_length_vertical" => self.arm_length_vertical,
            "k_attract" => self.k_attract,
            "k_repel" => self.k_repel,
            "k_straighten" => self.k_straighten,
            "linear_viscosity" => self.linear_viscosity,
            "angular_viscosity" => self.angular_viscosity,
            "linear_dampening" => self.linear_dampening,
            "angular_dampening" => self.angular_dampening,
            "brownian_linear_sigma" => self.brownian_linear_sigma,
            "brownian_angular_sigma" => self.brownian_angular_sigma,
            "red_blue_angle" => self.red_blue_angle,
            "purple_green_angle" => self.purple_green_angle,
            "split_timer" => f64::from(self.split_timer),
            "mass" => self.mass,
            "moment_of_inertia" => self.moment_of_inertia,
            _ => return None,
        })
    }

    /// Sets a scalar constant by its configuration key. Does not validate.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if let Some((kind, large)) = radius_key(key) {
            let r = &mut self.radii[kind.index()];
            *(if large { &mut r.large } else { &mut r.small }) = value;
            return Ok(());
        }
        let slot = match key {
            "timestep_duration" => &mut self.timestep_duration,
            "arm_length_horizontal" => &mut self.arm_length_horizontal,
            "arm_length_vertical" => &mut self.arm_length_vertical,
            "k_attract" => &mut self.k_attract,
            "k_repel" => &mut self.k_repel,
            "k_straighten" => &mut self.k_straighten,
            "linear_viscosity" => &mut self.linear_viscosity,
            "angular_viscosity" => &mut self.angular_viscosity,
            "linear_dampening" => &mut self.linear_dampening,
            "angular_dampening" => &mut self.angular_dampening,
            "brownian_linear_sigma" => &mut self.brownian_linear_sigma,
            "brownian_angular_sigma" => &mut self.brownian_angular_sigma,
            "red_blue_angle" => &mut self.red_blue_angle,
            "purple_green_angle" => &mut self.purple_green_angle,
            "mass" => &mut self.mass,
            "moment_of_inertia" => &mut self.moment_of_inertia,
            "split_timer" => {
                if !(value >= 0.0 && value.fract() == 0.0 && value <= f64::from(u32::MAX)) {
                    return Err(SimError::InvalidParam {
                        name: "split_timer",
                        reason: format!("must be a whole number, got {value}"),
                    });
                }
                self.split_timer = value as u32;
                return Ok(());
            }
            _ => {
                return Err(SimError::InvalidParam {
                    name: "key",
                    reason: format!("unknown parameter `{key}`"),
                })
            }
        };
        *slot = value;
        Ok(())
    }

    /// Brownian motion disabled, everything else unchanged.
    pub fn without_brownian(mut self) -> Self {
        self.brownian_linear_sigma = 0.0;
        self.brownian_angular_sigma = 0.0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(SimError::InvalidParam {
                    name,
                    reason: format!("must be finite and > 0, got {v}"),
                })
            }
        }
        fn non_negative(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(SimError::InvalidParam {
                    name,
                    reason: format!("must be finite and >= 0, got {v}"),
                })
            }
        }
        fn fraction(name: &'static str, v: f64) -> Result<()> {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(SimError::InvalidParam {
                    name,
                    reason: format!("must lie in (0, 1), got {v}"),
                })
            }
        }
        fn angle(name: &'static str, v: f64) -> Result<()> {
            if v > 0.0 && v < PI {
                Ok(())
            } else {
                Err(SimError::InvalidParam {
                    name,
                    reason: format!("must lie in (0, pi), got {v}"),
                })
            }
        }

        positive("timestep_duration", self.timestep_duration)?;
        positive("arm_length_horizontal", self.arm_length_horizontal)?;
        positive("arm_length_vertical", self.arm_length_vertical)?;
        for kind in FieldKind::ALL {
            let r = self.radii[kind.index()];
            positive(kind.small_key(), r.small)?;
            positive(kind.large_key(), r.large)?;
            if r.small >= r.large {
                return Err(SimError::InvalidParam {
                    name: kind.small_key(),
                    reason: format!("small radius {} must be below large radius {}", r.small, r.large),
                });
            }
        }
        non_negative("k_attract", self.k_attract)?;
        non_negative("k_repel", self.k_repel)?;
        non_negative("k_straighten", self.k_straighten)?;
        fraction("linear_viscosity", self.linear_viscosity)?;
        fraction("angular_viscosity", self.angular_viscosity)?;
        fraction("linear_dampening", self.linear_dampening)?;
        fraction("angular_dampening", self.angular_dampening)?;
        non_negative("brownian_linear_sigma", self.brownian_linear_sigma)?;
        non_negative("brownian_angular_sigma", self.brownian_angular_sigma)?;
        angle("red_blue_angle", self.red_blue_angle)?;
        angle("purple_green_angle", self.purple_green_angle)?;
        if self.split_timer == 0 {
            return Err(SimError::InvalidParam {
                name: "split_timer",
                reason: "must be at least one step".into(),
            });
        }
        positive("mass", self.mass)?;
        positive("moment_of_inertia", self.moment_of_inertia)?;
        Ok(())
    }
}

fn radius_key(key: &str) -> Option<(FieldKind, bool)> {
    FieldKind::ALL.into_iter().find_map(|k| {
        if key == k.small_key() {
            Some((k, false))
        } else if key == k.large_key() {
            Some((k, true))
        } else {
            None
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        SimParams::default().validate().unwrap();
    }

    #[test]
    fn rejects_inverted_radii() {
        let mut p = SimParams::default();
        p.radii[FieldKind::Yellow.index()] = FieldRadii::new(3.0, 2.0);
        let err = p.validate().unwrap_err();
        assert!(matches!(
            err,
            SimError::InvalidParam {
                name: "radius_small_yellow",
                ..
            }
        ));
    }

    #[test]
    fn rejects_out_of_range_fraction() {
        let p = SimParams {
            linear_viscosity: 1.0,
            ..SimParams::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn rejects_zero_timestep() {
        let p = SimParams {
            timestep_duration: 0.0,
            ..SimParams::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn keyed_access_round_trips() {
        let mut p = SimParams::default();
        for key in [
            "k_attract",
            "radius_small_red",
            "radius_large_yellow",
            "split_timer",
        ] {
            let v = p.get(key).unwrap() + 1.0;
            p.set(key, v).unwrap();
            assert_eq!(p.get(key), Some(v));
        }
        assert!(p.get("nope").is_none());
        assert!(p.set("nope", 1.0).is_err());
        assert!(p.set("split_timer", 1.5).is_err());
    }
}
