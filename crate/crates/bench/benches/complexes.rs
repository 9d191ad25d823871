use criterion::{black_box, criterion_group, criterion_main, Criterion};
use obdim_core::complexes::{build_c, build_sc, extract_l};

fn bench(c: &mut Criterion) {
    c.bench_function("build_c 5", |b| b.iter(|| build_c(black_box(5))));
    let c4 = build_c(4);
    c.bench_function("build_sc C(4)", |b| b.iter(|| build_sc(black_box(&c4))));
    c.bench_function("betti C(4)", |b| b.iter(|| black_box(&c4).betti().unwrap()));
    let l4 = extract_l(4);
    c.bench_function("betti L(4)", |b| b.iter(|| black_box(&l4.complex).betti().unwrap()));
    c.bench_function("extract_l 6 + isomorphism", |b| {
        b.iter(|| extract_l(black_box(6)).is_isomorphic_to_model())
    });
}

criterion_group!(benches, bench);
criterion_main!(benches);
