use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use star_coxeter::batch::{compare_classifiers, reduce_batch, verify_invariance_batch, Execution};
use star_coxeter::graph::{Character, ExtendedType, GeneralizedCharacter, StarGraph};
use star_coxeter::rational::{frac, Rational};
use star_coxeter::spectral::DEFAULT_TOL;
use star_coxeter::InvariantFunctional;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn random_character(g: &StarGraph, rng: &mut ChaCha8Rng) -> Character {
    let branches = g
        .branch_lengths()
        .iter()
        .map(|&k| {
            let mut acc = frac(0, 1);
            (0..k)
                .map(|_| {
                    acc += frac(rng.gen_range(1..50), rng.gen_range(1..12));
                    acc.clone()
                })
                .collect()
        })
        .collect();
    Character::new(g, branches).unwrap()
}

fn classifier_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("classifier_sweep");
    group.sample_size(10);
    for total in [10usize, 14] {
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, total), &total, |b, &total| {
                b.iter(|| compare_classifiers(total, DEFAULT_TOL, mode))
            });
        }
    }
    group.finish();
}

fn invariance_batch(c: &mut Criterion) {
    let g = ExtendedType::E8.graph();
    let omega = InvariantFunctional::exact(&g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let chars: Vec<GeneralizedCharacter> = (0..2000)
        .map(|_| random_character(&g, &mut rng).into_generalized())
        .collect();
    let mut group = c.benchmark_group("invariance_e8");
    for (name, mode) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| verify_invariance_batch(&omega, &chars, 0.0, mode))
        });
    }
    group.finish();
}

fn reduction_batch(c: &mut Criterion) {
    let g = ExtendedType::E7.graph();
    let omega = InvariantFunctional::exact(&g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let inputs: Vec<(Character, Rational)> = (0..200)
        .map(|_| {
            let chi = random_character(&g, &mut rng);
            let w = omega.evaluate_exact(&chi).unwrap();
            let lambda = w * frac(rng.gen_range(80..99), 100);
            (chi, lambda)
        })
        .collect();
    let mut group = c.benchmark_group("reduction_e7");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(name, |b| b.iter(|| reduce_batch(&g, &inputs, 10_000, mode)));
    }
    group.finish();
}

criterion_group!(benches, classifier_sweep, invariance_batch, reduction_batch);
criterion_main!(benches);
