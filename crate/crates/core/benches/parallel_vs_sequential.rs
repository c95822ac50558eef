use asymcol_core::kernels;
use asymcol_core::PermGroup;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn bench_closure(c: &mut Criterion) {
    let g = PermGroup::symmetric(7);
    let mut group = c.benchmark_group("closure_sym7");
    group.sample_size(10);
    group.bench_function("dispatch", |b| {
        b.iter(|| kernels::closure_elements(7, black_box(g.generators()), 1_000_000).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| kernels::closure_elements_seq(7, black_box(g.generators()), 1_000_000).unwrap())
    });
    group.finish();
}

fn bench_motion(c: &mut Criterion) {
    let g = PermGroup::symmetric(8);
    let elements = g.elements().unwrap().to_vec();
    let mut group = c.benchmark_group("motion_sym8");
    group.sample_size(10);
    group.bench_function("dispatch", |b| {
        b.iter(|| kernels::motion_of_elements(black_box(&elements)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| kernels::motion_of_elements_seq(black_box(&elements)))
    });
    group.finish();
}

fn bench_asymmetry_check(c: &mut Criterion) {
    use asymcol_core::colouring::{Colouring, Provenance};
    let g = PermGroup::symmetric(8);
    let elements = g.elements().unwrap().to_vec();
    // A colouring with one marked point: almost every element needs the
    // full witness scan, which is the expensive path.
    let mut colouring = Colouring::new(8, 2);
    for p in 0..8 {
        colouring.set(p, if p == 0 { 1 } else { 0 }, Provenance::Search);
    }
    let mut group = c.benchmark_group("asymmetry_sym8");
    group.sample_size(10);
    group.bench_function("dispatch", |b| {
        b.iter(|| kernels::is_asymmetric(black_box(&colouring), black_box(&elements)).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| kernels::is_asymmetric_seq(black_box(&colouring), black_box(&elements)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_closure, bench_motion, bench_asymmetry_check);
criterion_main!(benches);
