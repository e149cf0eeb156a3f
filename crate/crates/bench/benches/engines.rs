use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use partfn_bench::cubic;
use partfn_core::exact::int;
use partfn_core::graph::{heawood, prism};
use partfn_core::llt::{convolution_power, gnedenko_deviation};
use partfn_core::localview::local_view_distribution;
use partfn_core::lp::{build_lp, stability_constant};
use partfn_core::observables::size_distribution;
use partfn_core::polys::{coeffs, kdd_match_coeffs};
use partfn_core::Kind;

fn polys(c: &mut Criterion) {
    let gs = cubic(10);
    c.bench_function("match coeffs, cubic n=10 class", |b| {
        b.iter(|| gs.iter().map(|g| coeffs(g, Kind::Match).unwrap().top()).sum::<usize>())
    });
    c.bench_function("ind coeffs, Heawood", |b| b.iter(|| coeffs(black_box(&heawood()), Kind::Ind).unwrap()));
    c.bench_function("potts(3) coeffs, prism", |b| b.iter(|| coeffs(black_box(&prism()), Kind::Potts(3)).unwrap()));
}

fn enumeration(c: &mut Criterion) {
    c.bench_function("enumerate cubic n=10", |b| b.iter(|| cubic(black_box(10)).len()));
}

fn lp(c: &mut Criterion) {
    c.bench_function("solve matching LP d=3", |b| b.iter(|| build_lp(3, Kind::Match, &int(1)).unwrap().solve().unwrap()));
    c.bench_function("stability constant ind d=3", |b| b.iter(|| stability_constant(3, Kind::Ind, &int(1)).unwrap()));
    c.bench_function("local views, matchings on Heawood", |b| {
        b.iter(|| local_view_distribution(black_box(&heawood()), Kind::Match, &int(1)).unwrap())
    });
}

fn llt(c: &mut Criterion) {
    let base = size_distribution(&kdd_match_coeffs(3), &int(1)).unwrap();
    c.bench_function("convolution power K=100", |b| b.iter(|| convolution_power(&base, black_box(100)).unwrap()));
    c.bench_function("gnedenko K=25", |b| b.iter(|| gnedenko_deviation(&base, black_box(25)).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = polys, enumeration, lp, llt
}
criterion_main!(benches);
