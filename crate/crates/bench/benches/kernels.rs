use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use oddnl_core::boolfn::WalshWorkspace;
use oddnl_core::encoding::tree::ramped_half_and_half;
use oddnl_core::encoding::{TreeEvaluator, TreeParams};
use oddnl_core::{walsh_transform, OrbitTable, TruthTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_table(n: u32, rng: &mut ChaCha8Rng) -> TruthTable {
    TruthTable::from_fn(n, |_| rng.random_bool(0.5)).unwrap()
}

fn walsh(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("walsh_transform");
    for n in [7u32, 9, 11, 13] {
        let tt = random_table(n, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(n), &tt, |b, tt| {
            b.iter(|| walsh_transform(black_box(tt)))
        });
    }
    group.finish();
}

fn fitness(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut group = c.benchmark_group("fitness_workspace");
    for n in [7u32, 9, 11, 13] {
        let tt = random_table(n, &mut rng);
        let mut ws = WalshWorkspace::new();
        group.bench_with_input(BenchmarkId::from_parameter(n), &tt, |b, tt| {
            b.iter(|| ws.fitness(black_box(tt)))
        });
    }
    group.finish();
}

fn trees(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let params = TreeParams::default();
    let mut group = c.benchmark_group("tree_evaluate");
    for n in [7u32, 9, 11] {
        let forest: Vec<_> = (0..64).map(|_| ramped_half_and_half(n, &params, &mut rng)).collect();
        let mut eval = TreeEvaluator::new(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &forest, |b, forest| {
            b.iter(|| {
                for t in forest {
                    black_box(eval.evaluate(t).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn rs_expand(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut group = c.benchmark_group("rs_expand");
    for n in [7u32, 9, 11, 13] {
        let orbits = OrbitTable::cached(n).unwrap();
        let bits: Vec<bool> = (0..orbits.num_orbits()).map(|_| rng.random_bool(0.5)).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &bits, |b, bits| {
            b.iter(|| orbits.expand(black_box(bits)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, walsh, fitness, trees, rs_expand);
criterion_main!(benches);
