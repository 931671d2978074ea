use criterion::{criterion_group, criterion_main, Criterion};
use dsym_bench::dense_text;
use dsym_core::symexpr::{parse_ratfun, Var};
use std::hint::black_box;

fn cas(c: &mut Criterion) {
    for d in [2, 4] {
        let text = dense_text(d);
        c.bench_function(&format!("parse_ratfun/deg{d}"), |b| {
            b.iter(|| parse_ratfun(black_box(&text)).unwrap())
        });
        let r = parse_ratfun(&text).unwrap();
        let s = parse_ratfun("(u(0)-n)/(u(1)^2+1)").unwrap();
        c.bench_function(&format!("add_rf/deg{d}"), |b| {
            b.iter(|| black_box(&r).add_rf(&s))
        });
        c.bench_function(&format!("mul_rf/deg{d}"), |b| {
            b.iter(|| black_box(&r).mul_rf(&s))
        });
        c.bench_function(&format!("diff/deg{d}"), |b| {
            b.iter(|| black_box(&r).diff(Var::u(1)))
        });
        c.bench_function(&format!("shift/deg{d}"), |b| {
            b.iter(|| black_box(&r).shift(1))
        });
    }
}

criterion_group!(benches, cas);
criterion_main!(benches);
