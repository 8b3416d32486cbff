//! Closed-form and statistical checks of the rigid-body update.

use replicon_core::dynamics::{apply_brownian, kinetic_energy};
use replicon_core::{Arm, CodonType, Container, Pose, SimParams, Simulation, World};

fn quiet_params() -> SimParams {
    SimParams::default().without_brownian()
}

#[test]
fn free_codon_drifts_by_geometric_series() {
    let p = quiet_params();
    let (f, dt) = (p.linear_viscosity, p.timestep_duration);
    let mut w = World::new(Container::new(400.0, 400.0), p, 0);
    let id = w
        .add_codon(CodonType::Type1, Pose::new(100.0, 200.0, 0.0))
        .unwrap();
    w.codon_mut(id).vel.vx = 0.3;
    let mut sim = Simulation::new(w);
    sim.run(500).unwrap();
    // x_k = x_0 + dt * v0 * (f + f^2 + ... + f^k)
    let expect = 100.0 + dt * 0.3 * f * (1.0 - f.powi(500)) / (1.0 - f);
    let got = sim.world.codon(id).pose.x;
    assert!((got - expect).abs() < 1e-9, "{got} vs {expect}");
}

/// A bonded pair with every per-step loss switched off is a plain spring;
/// halving the step should roughly halve the error at a fixed time.
#[test]
fn spring_pair_converges_in_timestep() {
    fn end_gap(dt: f64) -> f64 {
        let mut p = quiet_params();
        p.timestep_duration = dt;
        p.linear_viscosity = 1.0;
        p.angular_viscosity = 1.0;
        p.linear_dampening = 1.0;
        p.angular_dampening = 1.0;
        let lh = p.arm_length_horizontal;
        let mut w = World::new(Container::new(400.0, 400.0), p, 0);
        let a = w
            .add_codon(CodonType::Type0, Pose::new(200.0, 200.0, 0.0))
            .unwrap();
        let b = w
            .add_codon(CodonType::Type0, Pose::new(200.0 + 2.0 * lh + 0.8, 200.0, 0.0))
            .unwrap();
        w.link(a, Arm::Red, b);
        let steps = (1.0 / dt).round() as u64;
        let mut sim = Simulation::new(w);
        sim.run(steps).unwrap();
        sim.world.codon(b).pose.x - sim.world.codon(a).pose.x
    }
    let reference = end_gap(0.05 / 64.0);
    let errs: Vec<f64> = [0.05, 0.025, 0.0125]
        .iter()
        .map(|&dt| (end_gap(dt) - reference).abs())
        .collect();
    assert!(errs[0] > 1e-6, "coarse error suspiciously small: {errs:?}");
    for pair in errs.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!((1.6..2.6).contains(&ratio), "ratio {ratio} in {errs:?}");
    }
}

#[test]
fn kinetic_energy_never_grows_without_noise() {
    let mut w = World::new(Container::new(200.0, 200.0), quiet_params(), 0);
    for i in 0..25 {
        let (x, y) = (20.0 + 35.0 * (i % 5) as f64, 20.0 + 35.0 * (i / 5) as f64);
        let id = w
            .add_codon(CodonType::Type0, Pose::new(x, y, 0.1 * i as f64))
            .unwrap();
        let v = &mut w.codon_mut(id).vel;
        v.vx = ((i * 7) % 5) as f64 * 0.1 - 0.2;
        v.vy = ((i * 3) % 5) as f64 * 0.1 - 0.2;
        v.omega = ((i * 11) % 5) as f64 * 0.05 - 0.1;
    }
    let mut sim = Simulation::new(w);
    let mut last = kinetic_energy(&sim.world);
    assert!(last > 0.0);
    for _ in 0..2000 {
        sim.step().unwrap();
        let e = kinetic_energy(&sim.world);
        assert!(
            e <= last * (1.0 + 1e-12),
            "{e} > {last} at step {}",
            sim.world.step
        );
        last = e;
    }
    assert!(last < 1e-6);
}

#[test]
fn brownian_kicks_are_centered_with_the_configured_spread() {
    let p = SimParams::default();
    let (sl, sa) = (p.brownian_linear_sigma, p.brownian_angular_sigma);
    let mut w = World::new(Container::new(200.0, 200.0), p, 42);
    let id = w
        .add_codon(CodonType::Type0, Pose::new(100.0, 100.0, 0.0))
        .unwrap();
    let n = 100_000;
    let (mut sx, mut sxx, mut sw, mut sww) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..n {
        w.codon_mut(id).vel = Default::default();
        apply_brownian(&mut w);
        let v = w.codon(id).vel;
        sx += v.vx;
        sxx += v.vx * v.vx;
        sw += v.omega;
        sww += v.omega * v.omega;
    }
    let nf = n as f64;
    let se = |sigma: f64| sigma / nf.sqrt();
    assert!((sx / nf).abs() < 4.0 * se(sl), "linear mean {}", sx / nf);
    assert!((sw / nf).abs() < 4.0 * se(sa), "angular mean {}", sw / nf);
    // Standard error of a sample variance is about sigma^2 * sqrt(2 / n).
    let var_se = |sigma: f64| sigma * sigma * (2.0 / nf).sqrt();
    assert!((sxx / nf - sl * sl).abs() < 4.0 * var_se(sl));
    assert!((sww / nf - sa * sa).abs() < 4.0 * var_se(sa));
}
