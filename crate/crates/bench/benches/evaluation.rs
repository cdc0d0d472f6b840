use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;
use teamlogic::eso::{eval_eso, translate};
use teamlogic::generate::random_dense_team;
use teamlogic::{evaluate, parse, sentence_sat, Semantics, Structure, Var, VarTuple};

fn scope() -> Vec<Var> {
    ["x", "y", "z"].iter().map(|n| Var::new(n)).collect()
}

fn independence_atoms(c: &mut Criterion) {
    let mut group = c.benchmark_group("ind_atom");
    let f = parse("ind(x ; y ; z)").unwrap();
    for domain in [2usize, 4, 8] {
        let m = Structure::of_size(domain);
        let team = random_dense_team(&mut ChaCha8Rng::seed_from_u64(1), &scope(), domain, 0.5);
        group.bench_with_input(BenchmarkId::from_parameter(domain), &team, |b, t| {
            b.iter(|| evaluate(&m, black_box(t), &f, Semantics::Lax).unwrap())
        });
    }
    group.finish();
}

fn sentences(c: &mut Criterion) {
    let mut group = c.benchmark_group("sentence");
    let valid = parse("forall x. forall y. exists z. (ind(z ;; x) and z = y)").unwrap();
    for n in [2usize, 3, 4] {
        let m = Structure::of_size(n);
        for mode in [Semantics::Lax, Semantics::Strict] {
            group.bench_function(BenchmarkId::new(mode.to_string(), n), |b| {
                b.iter(|| sentence_sat(&m, black_box(&valid), mode).unwrap())
            });
        }
    }
    group.finish();
}

fn eso(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval_eso");
    let f = parse("exists w. (ind(w ;; x) and dep(y ; z))").unwrap();
    let s = translate(&f, &VarTuple::new(scope())).unwrap();
    for domain in [2usize, 3] {
        let m = Structure::of_size(domain);
        let team = random_dense_team(&mut ChaCha8Rng::seed_from_u64(2), &scope(), domain, 0.4);
        group.bench_with_input(BenchmarkId::from_parameter(domain), &team, |b, t| {
            b.iter(|| eval_eso(&m, black_box(t), &s).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, independence_atoms, sentences, eso);
criterion_main!(benches);
