use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use replicon_bench::{soup, warmed_world};
use replicon_core::Simulation;

fn step_throughput(c: &mut Criterion) {
    let mut g = c.benchmark_group("step");
    g.throughput(Throughput::Elements(100));
    let world = warmed_world(20_000);
    g.bench_function("seeded_x100", |b| {
        b.iter_batched(
            || Simulation::new(world.clone()),
            |mut sim| sim.run(100).unwrap(),
            BatchSize::LargeInput,
        )
    });
    for n in [88, 352, 1408] {
        let world = soup(n);
        g.bench_function(format!("soup_{n}_x100"), |b| {
            b.iter_batched(
                || Simulation::new(world.clone()),
                |mut sim| sim.run(100).unwrap(),
                BatchSize::LargeInput,
            )
        });
    }
    g.finish();
}

criterion_group!(benches, step_throughput);
criterion_main!(benches);
