//! Sequential against parallel execution of the hot loops. Without the
//! `parallel` feature both variants run the same sequential code.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dislodyn::curves::{self, Curve, TestFamily, VelocityField};
use dislodyn::gb2d::{self, GBState};
use dislodyn::micro2d;
use dislodyn::spectral;
use dislodyn::{ElasticConstants, Execution};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn stress(c: &mut Criterion) {
    let k = ElasticConstants::new(1.0, 1.0).unwrap();
    let mut group = c.benchmark_group("spectral_stress");
    for n in [128usize, 256] {
        let state = GBState::random_smooth(n, n, 1.0, 0.8, 4, 1).unwrap();
        let diff = state.density_difference();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &diff, |b, d| {
                b.iter(|| gb2d::stress_from_density_difference(black_box(d), &k, exec))
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("riesz_transform");
    let state = GBState::random_smooth(256, 256, 1.0, 0.8, 4, 2).unwrap();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| spectral::riesz_transform_with(black_box(&state.theta_plus), 1, exec).unwrap())
        });
    }
    group.finish();
}

fn mean_field_step(c: &mut Criterion) {
    let k = ElasticConstants::new(1.0, 1.0).unwrap();
    let mut group = c.benchmark_group("gb2d_step");
    let state = GBState::random_smooth(256, 256, 1.0, 0.8, 4, 3).unwrap();
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| gb2d::step_with(black_box(&state), 1e-4, &k, exec).unwrap()));
    }
    group.finish();
}

fn particles(c: &mut Criterion) {
    let k = ElasticConstants::new(1.0, 1.0).unwrap();
    let mut group = c.benchmark_group("micro2d_velocity");
    for count in [500usize, 2000] {
        let sys = micro2d::random_system(count, 4).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, count), &sys, |b, s| {
                b.iter(|| micro2d::pairwise_velocity_with(black_box(s), &k, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn curve_residuals(c: &mut Criterion) {
    let field = VelocityField::Constant(1.0);
    let initial = Curve::circle([0.0, 0.0], 1.0, 512, false).unwrap();
    let traj = curves::evolve_trajectory(&initial, &field, 0.005, 20, false).unwrap();
    let family = TestFamily::default_family(5);
    let mut group = c.benchmark_group("curves_transport_residual");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| curves::transport_residual(black_box(&traj), &field, &family, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, stress, mean_field_step, particles, curve_residuals);
criterion_main!(benches);
