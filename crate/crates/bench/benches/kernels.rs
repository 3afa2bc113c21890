use criterion::{black_box, criterion_group, criterion_main, Criterion};

use fgva_core::associate::assoc_from_p;
use fgva_core::fields::{closure_generate, ClosureParams, FockSpace};
use fgva_core::harness::weak_assoc;
use fgva_core::vertex::borcherds_build;
use fgva_core::zhu::exp_associate;
use fgva_core::{DerivationAlgebra, FormalGroupLaw, GSeries, LaurentSeries, Vector, Window2};

fn series(c: &mut Criterion) {
    let g = GSeries::log1p(16);
    c.bench_function("reversion log1p order 16", |b| b.iter(|| black_box(&g).reversion(16).unwrap()));
    c.bench_function("log of F_m order 16", |b| b.iter(|| FormalGroupLaw::multiplicative().log(black_box(16)).unwrap()));
    c.bench_function("from_log log1p order 10", |b| b.iter(|| FormalGroupLaw::from_log(black_box(&GSeries::log1p(10)), 10).unwrap()));
}

fn associates(c: &mut Criterion) {
    let p = LaurentSeries::monomial(fgva_core::scalar::q(1), 2);
    let fm = FormalGroupLaw::multiplicative();
    c.bench_function("assoc_from_p F_m x^2 z-order 6", |b| b.iter(|| assoc_from_p(&fm, black_box(&p), 6, (-2, 10)).unwrap()));
}

fn vertex(c: &mut Criterion) {
    let alg = DerivationAlgebra::poly_t(8);
    let fm = FormalGroupLaw::multiplicative();
    c.bench_function("borcherds poly_t F_m order 6", |b| b.iter(|| borcherds_build(black_box(&alg), &fm, 6).unwrap()));
    let v = borcherds_build(&alg, &fm, 6).unwrap();
    let t = Vector::basis(1);
    let one = Vector::basis(v.vacuum);
    c.bench_function("weak assoc (t, t, 1) over F_m", |b| b.iter(|| weak_assoc(&v, &t, &t, &one, 8, Window2::square(-4, 4))));
}

fn fields(c: &mut Criterion) {
    let h = FockSpace::new(3, 6).unwrap().heisenberg();
    let phi = exp_associate(12).unwrap();
    let mut g = c.benchmark_group("closure");
    g.sample_size(10);
    g.bench_function("heisenberg depth 2", |b| {
        b.iter(|| closure_generate(&[("h".into(), h.clone())], &phi, &ClosureParams::default()).unwrap())
    });
    g.finish();
}

criterion_group!(benches, series, associates, vertex, fields);
criterion_main!(benches);
