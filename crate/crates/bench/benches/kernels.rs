use cesaro_core::instances;
use cesaro_core::kernels::KernelTable;
use cesaro_core::scalar::{Rational, Scalar};
use cesaro_core::seq::{weyl_difference, weyl_sum, FiniteSeq};
use cesaro_core::weights::{certify_omega_alpha_loc, q_alpha_norm, Weight};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn bench_kernel_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernel_table");
    group.bench_function("float_4096", |b| {
        b.iter(|| KernelTable::new(black_box(&0.5f64), 4096).unwrap())
    });
    let half = Rational::from_ratio(1, 2);
    group.bench_function("exact_256", |b| {
        b.iter(|| KernelTable::new(black_box(&half), 256).unwrap())
    });
    group.finish();
}

fn bench_convolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("convolve");
    let mut rng = instances::seeded_rng(1);
    let f_float = instances::float_seq(&mut rng, 1024, 1.0);
    let g_float = instances::float_seq(&mut rng, 1024, 1.0);
    group.bench_function("float_1024", |b| {
        b.iter(|| black_box(&f_float).convolve(black_box(&g_float)))
    });
    let f_exact: FiniteSeq<Rational> = instances::rational_seq(&mut rng, 64, 4, 4);
    let g_exact: FiniteSeq<Rational> = instances::rational_seq(&mut rng, 64, 4, 4);
    group.bench_function("exact_64", |b| {
        b.iter(|| black_box(&f_exact).convolve(black_box(&g_exact)))
    });
    group.finish();
}

fn bench_weyl(c: &mut Criterion) {
    let mut group = c.benchmark_group("weyl");
    let mut rng = instances::seeded_rng(2);
    let f: FiniteSeq<Rational> = instances::rational_seq(&mut rng, 64, 4, 4);
    let half = Rational::from_ratio(1, 2);
    group.bench_function("roundtrip_exact_64", |b| {
        b.iter(|| {
            let up = weyl_sum(black_box(&f), &half).unwrap();
            weyl_difference(&up, &half).unwrap()
        })
    });
    group.bench_function("q_norm_exact_64", |b| {
        b.iter(|| q_alpha_norm(black_box(&f), &half).unwrap())
    });
    group.finish();
}

fn bench_weight_certification(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    group.sample_size(20);
    let phi = Weight::cesaro(&1.5f64, 256).unwrap();
    group.bench_function("float_p128", |b| {
        b.iter(|| certify_omega_alpha_loc(black_box(&phi), &0.5f64, 128).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_kernel_tables,
    bench_convolution,
    bench_weyl,
    bench_weight_certification
);
criterion_main!(benches);
