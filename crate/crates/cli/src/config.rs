//! Flat `key = value` configuration covering a scenario and every
//! physical constant. Missing keys take their defaults; unknown keys are
//! rejected.

use std::path::Path;

use anyhow::{Context, Result};
use replicon_core::{Container, FieldRadii, Scenario, SimParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub name: String,
    /// Empty for no seed strand.
    pub seed_bits: String,
    pub free_codon_count: usize,
    pub free_type_mix: f64,
    pub container_width: f64,
    pub container_height: f64,
    pub rng_seed: u64,
    pub max_steps: u64,
    pub snapshot_every: u64,
    pub frame_every: u64,
    pub hash_every: u64,
    pub stop_after_replications: u32,

    pub timestep_duration: f64,
    pub arm_length_horizontal: f64,
    pub arm_length_vertical: f64,
    pub radius_small_red: f64,
    pub radius_large_red: f64,
    pub radius_small_blue: f64,
    pub radius_large_blue: f64,
    pub radius_small_green: f64,
    pub radius_large_green: f64,
    pub radius_small_purple: f64,
    pub radius_large_purple: f64,
    pub radius_small_yellow: f64,
    pub radius_large_yellow: f64,
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
    pub split_timer: u32,
    pub mass: f64,
    pub moment_of_inertia: f64,
}

impl Default for ConfigFile {
    fn default() -> Self {
        Self::from_scenario(&Scenario::default())
    }
}

impl ConfigFile {
    pub fn from_scenario(s: &Scenario) -> Self {
        let p = &s.params;
        let r = |i: usize| p.radii[i];
        Self {
            name: s.name.clone(),
            seed_bits: s.seed_bits.clone().unwrap_or_default(),
            free_codon_count: s.free_codon_count,
            free_type_mix: s.free_type_mix,
            container_width: s.container.width(),
            container_height: s.container.height(),
            rng_seed: s.rng_seed,
            max_steps: s.max_steps,
            snapshot_every: s.snapshot_every,
            frame_every: s.frame_every,
            hash_every: s.hash_every,
            stop_after_replications: s.stop_after_replications,
            timestep_duration: p.timestep_duration,
            arm_length_horizontal: p.arm_length_horizontal,
            arm_length_vertical: p.arm_length_vertical,
            radius_small_red: r(0).small,
            radius_large_red: r(0).large,
            radius_small_blue: r(1).small,
            radius_large_blue: r(1).large,
            radius_small_green: r(2).small,
            radius_large_green: r(2).large,
            radius_small_purple: r(3).small,
            radius_large_purple: r(3).large,
            radius_small_yellow: r(4).small,
            radius_large_yellow: r(4).large,
            k_attract: p.k_attract,
            k_repel: p.k_repel,
            k_straighten: p.k_straighten,
            linear_viscosity: p.linear_viscosity,
            angular_viscosity: p.angular_viscosity,
            linear_dampening: p.linear_dampening,
            angular_dampening: p.angular_dampening,
            brownian_linear_sigma: p.brownian_linear_sigma,
            brownian_angular_sigma: p.brownian_angular_sigma,
            red_blue_angle: p.red_blue_angle,
            purple_green_angle: p.purple_green_angle,
            split_timer: p.split_timer,
            mass: p.mass,
            moment_of_inertia: p.moment_of_inertia,
        }
    }

    pub fn params(&self) -> SimParams {
        SimParams {
            timestep_duration: self.timestep_duration,
            arm_length_horizontal: self.arm_length_horizontal,
            arm_length_vertical: self.arm_length_vertical,
            radii: [
                FieldRadii::new(self.radius_small_red, self.radius_large_red),
                FieldRadii::new(self.radius_small_blue, self.radius_large_blue),
                FieldRadii::new(self.radius_small_green, self.radius_large_green),
                FieldRadii::new(self.radius_small_purple, self.radius_large_purple),
                FieldRadii::new(self.radius_small_yellow, self.radius_large_yellow),
            ],
            k_attract: self.k_attract,
            k_repel: self.k_repel,
            k_straighten: self.k_straighten,
            linear_viscosity: self.linear_viscosity,
            angular_viscosity: self.angular_viscosity,
            linear_dampening: self.linear_dampening,
            angular_dampening: self.angular_dampening,
            brownian_linear_sigma: self.brownian_linear_sigma,
            brownian_angular_sigma: self.brownian_angular_sigma,
            red_blue_angle: self.red_blue_angle,
            purple_green_angle: self.purple_green_angle,
            split_timer: self.split_timer,
            mass: self.mass,
            moment_of_inertia: self.moment_of_inertia,
        }
    }

    /// The scenario this file describes, validated.
    pub fn scenario(&self) -> Result<Scenario> {
        let s = Scenario {
            name: self.name.clone(),
            seed_bits: (!self.seed_bits.is_empty()).then(|| self.seed_bits.clone()),
            free_codon_count: self.free_codon_count,
            free_type_mix: self.free_type_mix,
            container: Container::new(self.container_width, self.container_height),
            params: self.params(),
            rng_seed: self.rng_seed,
            max_steps: self.max_steps,
            snapshot_every: self.snapshot_every,
            frame_every: self.frame_every,
            hash_every: self.hash_every,
            stop_after_replications: self.stop_after_replications,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ConfigFile = toml::from_str(text)?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg = Self::parse(&text).with_context(|| format!("in config {}", path.display()))?;
        cfg.scenario()
            .with_context(|| format!("in config {}", path.display()))?;
        Ok(cfg)
    }
}
