use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ehrhart::{
    brute_count, determined_sets, polytope_quasi, simplex_coefficients, CountQuery, CountTarget,
    Kind, Rational, DEFAULT_BUDGET,
};
use ehrhart_bench::{example_simplex, random_fixtures, unit_cube};

fn bench_simplex(c: &mut Criterion) {
    let simplex = example_simplex();
    let mut group = c.benchmark_group("simplex");
    for kind in [Kind::Closed, Kind::Open] {
        group.bench_with_input(
            BenchmarkId::new("determined_sets", kind),
            &kind,
            |b, &kind| {
                b.iter(|| determined_sets(black_box(&simplex), kind, DEFAULT_BUDGET).unwrap())
            },
        );
        group.bench_with_input(BenchmarkId::new("coefficients", kind), &kind, |b, &kind| {
            b.iter(|| simplex_coefficients(black_box(&simplex), kind, DEFAULT_BUDGET).unwrap())
        });
    }
    group.finish();
}

fn bench_polytope(c: &mut Criterion) {
    let mut group = c.benchmark_group("polytope_quasi");
    group.sample_size(20);
    let cube = unit_cube();
    group.bench_function("unit_cube", |b| {
        b.iter(|| polytope_quasi(black_box(&cube), Kind::Closed, DEFAULT_BUDGET).unwrap())
    });
    for (i, p) in random_fixtures(2, 3).into_iter().enumerate() {
        group.bench_with_input(BenchmarkId::new("random_2d", i), &p, |b, p| {
            b.iter(|| polytope_quasi(black_box(p), Kind::Closed, DEFAULT_BUDGET).unwrap())
        });
    }
    group.finish();
}

fn bench_evaluation(c: &mut Criterion) {
    let cube = unit_cube();
    let quasi = polytope_quasi(&cube, Kind::Closed, DEFAULT_BUDGET).unwrap();
    let t = Rational::frac(-37, 11);
    c.bench_function("eval/unit_cube", |b| b.iter(|| quasi.eval(black_box(&t))));
}

fn bench_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_count");
    let simplex = example_simplex();
    for t in [3i64, 6, 12] {
        let query = CountQuery::new(
            CountTarget::Simplex(simplex.clone()),
            Rational::from(t),
            Kind::Closed,
        )
        .unwrap();
        group.bench_with_input(BenchmarkId::new("example_simplex", t), &query, |b, q| {
            b.iter(|| brute_count(black_box(q), DEFAULT_BUDGET).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_simplex,
    bench_polytope,
    bench_evaluation,
    bench_oracle
);
criterion_main!(benches);
