use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use loewner_lab::energy::energy_quadrature;
use loewner_lab::loewner_flow::{base_images, hitting_time, trace_curve_sampled, trace_tip};
use loewner_lab::sle_zero::emw_sle44;
use loewner_lab_bench::{emw_up, wang_down, wang_up};

fn tracing(c: &mut Criterion) {
    let d = wang_down();
    let t = d.horizon();
    let mut g = c.benchmark_group("trace");
    for n in [2_000usize, 20_000] {
        g.bench_with_input(BenchmarkId::new("tip", n), &n, |b, &n| {
            b.iter(|| trace_tip(&d, t, black_box(n)).unwrap())
        });
    }
    g.sample_size(10);
    g.bench_function("curve_20000x200", |b| {
        b.iter(|| trace_curve_sampled(&d, t, 20_000, black_box(200)).unwrap())
    });
    g.finish();
}

fn quadrature(c: &mut Criterion) {
    let xi = wang_up();
    let t = xi.horizon();
    c.bench_function("energy_quadrature_64", |b| {
        b.iter(|| energy_quadrature(&xi, t, black_box(64)).unwrap())
    });
}

fn flows(c: &mut Criterion) {
    let xi = emw_up();
    c.bench_function("hitting_time_emw", |b| {
        b.iter(|| hitting_time(&xi, black_box(-1.0)).unwrap())
    });
    let d = wang_down();
    let t = d.horizon();
    c.bench_function("base_images_2000", |b| {
        b.iter(|| base_images(&d, t, black_box(2000)).unwrap())
    });
}

fn sle(c: &mut Criterion) {
    c.bench_function("sle0_minus4_4000", |b| {
        b.iter(|| emw_sle44(-1.0, 2.0, 1.0, black_box(4000)).unwrap())
    });
}

criterion_group!(benches, tracing, quadrature, flows, sle);
criterion_main!(benches);
