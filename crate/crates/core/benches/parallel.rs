use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dyadic_bellman::verification::probe_supremum_with;
use dyadic_bellman::{run_sweep, BellmanConfig, Execution, Params, SweepParam, SweepSpec};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn probe(c: &mut Criterion) {
    let params = Params::new(2.0, 1.0, 2.0, 0.5).unwrap();
    let mut group = c.benchmark_group("probe_supremum");
    group.sample_size(10);
    for trials in [256, 2048] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, trials), &trials, |b, &t| {
                b.iter(|| probe_supremum_with(&params, 64, t, 0, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let cfg = BellmanConfig::default();
    let mut group = c.benchmark_group("run_sweep");
    group.sample_size(10);
    for steps in [64, 512] {
        let spec = SweepSpec {
            param: SweepParam::K,
            start: 0.01,
            stop: 1.0,
            steps,
            base: [3.0, 1.0, 2.5, 0.0],
        };
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, steps), &spec, |b, s| {
                b.iter(|| run_sweep(s, &cfg, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, probe, sweep);
criterion_main!(benches);
