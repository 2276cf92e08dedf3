use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use matmoment::certificates::{search_certificate, SearchOptions};
use matmoment::flat::extract_atoms;
use matmoment::moments::moments_of_measure;
use matmoment::random::{random_certificate_instance, random_measure, seeded};
use matmoment::{solve, SetDescription, SolverOptions, TmmpInput, Tolerances};

fn set() -> SetDescription {
    SetDescription::interval_point(0.0, 1.0, 2.0).unwrap()
}

fn bench_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    for p in [1, 2, 3] {
        for n in [8, 9] {
            let mu = random_measure(&mut seeded(7), &set(), p, 3).unwrap();
            let input = TmmpInput {
                gamma: moments_of_measure(&mu, n),
                set: set(),
                options: SolverOptions::default(),
            };
            group.bench_with_input(BenchmarkId::new(format!("p{p}"), n), &input, |b, input| {
                b.iter(|| solve(black_box(input)).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_extract(c: &mut Criterion) {
    let mut group = c.benchmark_group("extract_atoms");
    for atoms in [2, 4, 6] {
        let mu = random_measure(&mut seeded(11), &set(), 2, atoms).unwrap();
        let gamma = moments_of_measure(&mu, 2 * atoms + 2);
        group.bench_with_input(BenchmarkId::from_parameter(atoms), &gamma, |b, g| {
            b.iter(|| extract_atoms(black_box(g), 1, &Tolerances::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search_certificate");
    group.sample_size(20);
    for degree in [2, 4, 6] {
        let (f, _) = random_certificate_instance(&mut seeded(13), &set(), degree, 2).unwrap();
        let opts = SearchOptions::default();
        group.bench_with_input(BenchmarkId::from_parameter(degree), &f, |b, f| {
            b.iter(|| search_certificate(black_box(f), &set(), None, &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_solve, bench_extract, bench_search);
criterion_main!(benches);
