use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use graphreal_core::denselin::{eigh, SymMatrix};
use graphreal_core::eopt::{solve, Sense, SolverOptions};
use graphreal_core::extract::{realize, DEFAULT_GROUP_TOL};
use graphreal_core::graph::{generate, laplacian, Family, WeightVector};

fn eigensolver(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigh");
    for n in [10usize, 20, 40, 60] {
        // deterministic dense symmetric test matrix
        let a = SymMatrix::from_fn(n, |i, j| ((i * 7 + j * 13) % 17) as f64 / 17.0 - 0.5);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| eigh(black_box(a)).unwrap()));
    }
    group.finish();
}

fn laplacian_spectrum(c: &mut Criterion) {
    let g = generate(Family::Dodecahedral).unwrap();
    let w = WeightVector::uniform(g.phi());
    c.bench_function("laplacian_spectrum/dodecahedral", |b| {
        b.iter(|| eigh(&laplacian(black_box(&g), black_box(&w)).unwrap()).unwrap())
    });
}

fn solves(c: &mut Criterion) {
    let opts = SolverOptions::default();
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    let cases = [
        ("cycle12", Family::Cycle(12)),
        ("petersen", Family::Petersen),
        ("cube", Family::Cube),
        ("dodecahedral", Family::Dodecahedral),
        ("icosahedral", Family::Icosahedral),
    ];
    for (name, family) in cases {
        let g = generate(family).unwrap();
        for sense in [Sense::MaxLambda2, Sense::MinLambdaN] {
            let id = BenchmarkId::new(sense.as_str(), name);
            group.bench_with_input(id, &g, |b, g| b.iter(|| solve(g, g.phi(), sense, &opts).unwrap()));
        }
    }
    group.finish();
}

fn realization(c: &mut Criterion) {
    let mut group = c.benchmark_group("realize");
    for (name, family) in [("petersen", Family::Petersen), ("icosahedral", Family::Icosahedral)] {
        let g = generate(family).unwrap();
        let result = solve(&g, g.phi(), Sense::MaxLambda2, &SolverOptions::default()).unwrap();
        group.bench_function(name, |b| b.iter(|| realize(&g, g.phi(), black_box(&result), DEFAULT_GROUP_TOL).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, eigensolver, laplacian_spectrum, solves, realization);
criterion_main!(benches);
