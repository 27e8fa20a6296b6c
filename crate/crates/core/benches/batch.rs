use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use twocentre::checks::{commutation_check, conservation_check};
use twocentre::quantum::{build_h, MonopoleBasis, QuadratureConfig};
use twocentre::{Execution, SystemParams};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn brackets(c: &mut Criterion) {
    let p = SystemParams::spherical(2.0, 1.0, 1.0).unwrap();
    let mut g = c.benchmark_group("commutation-1000");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| commutation_check(&p, 1000, 1, exec)));
    }
    g.finish();
}

fn trajectories(c: &mut Criterion) {
    let p = SystemParams::spherical(2.0, 1.0, -1.0).unwrap();
    let mut g = c.benchmark_group("flows-8x10");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| conservation_check(&p, 0.0, 8, 1, 1e-10, 10.0, 0.1, exec))
        });
    }
    g.finish();
}

fn matrices(c: &mut Criterion) {
    let p = SystemParams::spherical(2.0, 1.0, 1.0).unwrap();
    let basis = MonopoleBasis::new(0, 16).unwrap();
    let h = build_h(p, &basis, QuadratureConfig { n_theta: 64, n_phi: 64 }).unwrap();
    let mut g = c.benchmark_group("matmul-81");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| h.matmul_with(&h, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, brackets, trajectories, matrices);
criterion_main!(benches);
