use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qsnake_core::kronecker::{Kronecker, KroneckerGraph};
use qsnake_core::qarith::qbinom;
use qsnake_core::snake::MatchingLattice;

fn bench_matchings(c: &mut Criterion) {
    c.bench_function("enumerate matchings G_6", |b| {
        b.iter(|| KroneckerGraph::g(black_box(6)).matchings().len())
    });
}

fn bench_routes(c: &mut Criterion) {
    let kr = Kronecker::new();
    c.bench_function("x_9 via quantum binomials", |b| {
        b.iter(|| kr.x_via_qbinom(black_box(6)))
    });
    c.bench_function("x_9 via matchings", |b| {
        b.iter(|| kr.x_via_matchings(black_box(6)))
    });
    c.bench_function("x_9 via mutation", |b| {
        b.iter(|| kr.x_elem(black_box(9)).unwrap())
    });
}

fn bench_qbinom(c: &mut Criterion) {
    c.bench_function("qbinom 30 choose 15", |b| {
        b.iter(|| qbinom(black_box(30), black_box(15)).unwrap())
    });
}

fn bench_lattice(c: &mut Criterion) {
    let kg = KroneckerGraph::g(4);
    c.bench_function("lattice build G_4", |b| {
        b.iter(|| MatchingLattice::build(kg.graph(), kg.p_min()).unwrap())
    });
}

criterion_group!(benches, bench_matchings, bench_routes, bench_qbinom, bench_lattice);
criterion_main!(benches);
