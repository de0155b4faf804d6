use criterion::{black_box, criterion_group, criterion_main, Criterion};

use lubkit::category::{general_exp, pointwise_exp, product};
use lubkit::fixtures;
use lubkit::gallery::{run_gallery, GalleryId};
use lubkit::harness::{realization_exhaustive, validity_agreement};

fn spaces(c: &mut Criterion) {
    let d4 = fixtures::by_name("d4").unwrap();
    let c3 = fixtures::by_name("c3").unwrap();
    let mut g = c.benchmark_group("spaces");
    g.bench_function("product/d4xd4", |b| b.iter(|| black_box(product(&d4, &d4).unwrap())));
    g.bench_function("pointwise/c3=>c3", |b| b.iter(|| black_box(pointwise_exp(&c3, &c3).unwrap())));
    g.bench_function("general/c3=>c3", |b| b.iter(|| black_box(general_exp(&c3, &c3).unwrap())));
    g.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweeps");
    g.sample_size(10);
    g.bench_function("validity-agreement/3", |b| b.iter(|| black_box(validity_agreement(3).unwrap())));
    g.bench_function("realization/4", |b| b.iter(|| black_box(realization_exhaustive(4).unwrap())));
    g.bench_function("gallery/g2-64", |b| b.iter(|| black_box(run_gallery(GalleryId::G2, Some(64)).unwrap())));
    g.bench_function("gallery/g4-16", |b| b.iter(|| black_box(run_gallery(GalleryId::G4, Some(16)).unwrap())));
    g.finish();
}

criterion_group!(benches, spaces, sweeps);
criterion_main!(benches);
