use criterion::{criterion_group, criterion_main, Criterion};
use orthlab_core::series::weierstrass::prepare;
use orthlab_core::{Line, SeriesContext};
use std::hint::black_box;

fn series(c: &mut Criterion) {
    let ctx = SeriesContext::new(5, 12, 16).unwrap();
    let mut f = ctx.one();
    for i in 0..16 {
        for j in 0..16 - i {
            f.set_coeff(i, j, ctx.scalar((3 * i as i64 + 7 * j as i64) % 23 - 11));
        }
    }
    f.set_coeff(0, 0, ctx.scalar(1));
    let g = f.tau();
    c.bench_function("two_var_mul", |b| b.iter(|| black_box(&f).mul(black_box(&g))));
    c.bench_function("two_var_inverse", |b| b.iter(|| black_box(&f).inverse().unwrap()));
    c.bench_function("tau", |b| b.iter(|| black_box(&f).tau()));

    let l = ctx.line(Line::Anti);
    let h = l.from_integers(&[25, -10, 5, 7, 1, -3, 2, 4, -1, 6, 0, 3, 1, -2, 5, 1]);
    c.bench_function("weierstrass_prepare", |b| b.iter(|| prepare(black_box(&h)).unwrap()));
}

criterion_group!(benches, series);
criterion_main!(benches);
