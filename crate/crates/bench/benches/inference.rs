use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use teamlogic::atoms::{armstrong_closure, rule_closure, AtomStatement, Universe, DEFAULT_MAX_STEPS};
use teamlogic::VarTuple;

/// `=(v0, v1), =(v1, v2), …`: a chain whose closure from `v0` is everything.
fn chain(n: usize) -> (Vec<String>, Vec<AtomStatement>) {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let atoms = names
        .windows(2)
        .map(|w| AtomStatement::dep(&[&w[0]], &[&w[1]]))
        .collect();
    (names, atoms)
}

fn armstrong(c: &mut Criterion) {
    let mut group = c.benchmark_group("armstrong_closure");
    for n in [8usize, 32, 128] {
        let (names, t) = chain(n);
        let start = VarTuple::from_names(&[&names[0]]);
        group.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| armstrong_closure(black_box(t), &start).unwrap())
        });
    }
    group.finish();
}

fn closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("rule_closure");
    group.sample_size(10);
    for n in [3usize, 4] {
        let (names, mut t) = chain(n);
        t.push(AtomStatement::ind(&[&names[0]], &[], &[&names[n - 1]]));
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let u = Universe::from_names(&refs).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| rule_closure(black_box(t), &u, DEFAULT_MAX_STEPS).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, armstrong, closure);
criterion_main!(benches);
