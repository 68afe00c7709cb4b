use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use freeknot::census::census;
use freeknot::{
    eval_word, f_project_movie, invariant_l, orbit, parse_word, random_valid_movie, search_slice_movie, verify,
    RandomBounds,
};
use freeknot_bench::{complete, k1};

fn group(c: &mut Criterion) {
    let w = parse_word("(b' a)^7 b' b (a b)^7").unwrap();
    c.bench_function("eval_word/k1", |b| b.iter(|| eval_word(black_box(&w))));
}

fn invariant(c: &mut Criterion) {
    let k = k1();
    c.bench_function("invariant_l/k1", |b| b.iter(|| invariant_l(black_box(&k)).unwrap()));
    let big = complete(40);
    c.bench_function("invariant_l/complete40", |b| b.iter(|| invariant_l(black_box(&big)).unwrap()));
    c.bench_function("canonical_key/k1", |b| b.iter(|| black_box(&k).canonical_key()));
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    g.bench_function("census6", |b| b.iter(|| census(black_box(6))));
    g.finish();
    let start = "1 2 2 3 3 1".parse().unwrap();
    c.bench_function("orbit/r3_fixture", |b| b.iter(|| orbit(black_box(&start), 4, 10_000)));
}

fn movies(c: &mut Criterion) {
    let bounds = RandomBounds::default();
    c.bench_function("random_valid_movie", |b| {
        let mut seed = 0;
        b.iter(|| {
            seed += 1;
            random_valid_movie(seed, &bounds)
        })
    });
    let m = random_valid_movie(3, &RandomBounds { genus_zero: false, ..bounds });
    c.bench_function("verify", |b| b.iter(|| verify(black_box(&m), false)));
    c.bench_function("f_project_movie", |b| {
        b.iter_batched(|| m.clone(), |m| f_project_movie(&m).unwrap(), BatchSize::SmallInput)
    });
    let knot = "1 2 1 2".parse().unwrap();
    c.bench_function("search/odd_pair", |b| b.iter(|| search_slice_movie(black_box(&knot), 4, 4)));
}

criterion_group!(benches, group, invariant, enumeration, movies);
criterion_main!(benches);
