use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use drcm::drmonoid::build_dr_monoid;
use drcm::mvector::{build_modular_vector, ModularVectorSpec};
use drcm::numeric::Cx;
use drcm::quadfield::{QuadField, QuadIdeal, Rat};
use drcm::recognize::{recognize, RecognitionConfig};
use drcm::symplectic::SiegelPoint;
use drcm::theta::{j_invariant, siegel_from_f64, theta, Lattice, ThetaChar, TorsionIndex};

fn theta_kernel(c: &mut Criterion) {
    let mut g = c.benchmark_group("theta");
    for prec in [128u32, 256, 512] {
        let tau = SiegelPoint::scalar(Cx::from_f64(prec, 0.1, 1.05)).unwrap();
        let u = [Cx::from_f64(prec, 0.3, 0.05)];
        let k = ThetaChar::free(vec![Rat::new(1, 3)]);
        g.bench_with_input(BenchmarkId::new("g1", prec), &prec, |b, &p| b.iter(|| theta(&k, black_box(&u), &tau, p).unwrap()));
    }
    for prec in [128u32, 256] {
        let tau = siegel_from_f64(&[vec![(0.1, 1.1), (0.2, 0.3)], vec![(0.2, 0.3), (-0.15, 1.2)]], prec).unwrap();
        let u = [Cx::from_f64(prec, 0.3, 0.05), Cx::from_f64(prec, 0.7, -0.02)];
        let k = ThetaChar::free(vec![Rat::new(1, 2), Rat::new(1, 4)]);
        g.bench_with_input(BenchmarkId::new("g2", prec), &prec, |b, &p| b.iter(|| theta(&k, black_box(&u), &tau, p).unwrap()));
    }
    g.finish();
}

fn monoids(c: &mut Criterion) {
    let mut g = c.benchmark_group("dr_monoid");
    for (d, n) in [(1i64, 12i128), (5, 6), (7, 10)] {
        let k = QuadField::new(d).unwrap();
        let f = QuadIdeal::rational(k, n);
        g.bench_function(format!("d{d}_N{n}"), |b| b.iter(|| build_dr_monoid(k, black_box(&f)).unwrap()));
    }
    g.finish();
}

fn recognition(c: &mut Criterion) {
    let prec = 256;
    let j = j_invariant(&Lattice::from_tau(Cx::from_f64(prec + 64, 0.0, 2.0)).unwrap(), prec + 32).unwrap().with_prec(prec);
    let cfg = RecognitionConfig::default();
    c.bench_function("recognize_j_2i", |b| b.iter(|| recognize(black_box(&j), &cfg).unwrap()));
}

fn modular_vectors(c: &mut Criterion) {
    let k = QuadField::gaussian();
    let t = build_dr_monoid(k, &QuadIdeal::rational(k, 3)).unwrap();
    let spec = ModularVectorSpec::weber(TorsionIndex::new(vec![Rat::new(0, 3)], vec![Rat::new(1, 3)]));
    let cfg = RecognitionConfig::default();
    c.bench_function("weber_vector_gaussian_N3", |b| b.iter(|| build_modular_vector(black_box(&spec), &t, 256, &cfg).unwrap()));
}

criterion_group!(benches, theta_kernel, monoids, recognition, modular_vectors);
criterion_main!(benches);
