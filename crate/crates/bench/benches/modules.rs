use criterion::{criterion_group, criterion_main, Criterion};
use orthlab_core::linalg::smith_line;
use orthlab_core::orthogonal::selmer_cokernel;
use orthlab_core::regulators::{random_eigen_gram, regulator_det};
use orthlab_core::scenario::{generate, golden, run_verifications, GenerateParams};
use orthlab_core::{Line, PAdicContext};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn modules(c: &mut Criterion) {
    let worked = golden::rank3_worked(golden::default_context()).unwrap();
    c.bench_function("verify_worked", |b| b.iter(|| run_verifications(black_box(&worked))));

    let restricted = selmer_cokernel(&worked.module).unwrap().restrict(Line::Anti);
    c.bench_function("smith_line_rank3", |b| b.iter(|| smith_line(black_box(&restricted)).unwrap()));

    let params = GenerateParams::new(5, 3, 2, vec!["T^2".into(), "T".into()]);
    c.bench_function("generate_rank5", |b| b.iter(|| generate(black_box(&params), 11).unwrap()));

    let ctx = PAdicContext::new(5, 10).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = random_eigen_gram(&mut rng, ctx, 4, 3).unwrap();
    c.bench_function("regulator_det_rank7", |b| b.iter(|| regulator_det(black_box(&g)).unwrap()));
}

criterion_group!(benches, modules);
criterion_main!(benches);
