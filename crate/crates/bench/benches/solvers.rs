use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gammasplit::periodicity::{pisano, t_k};
use gammasplit::sequences::{fibonacci, term_mod};
use gammasplit::split::DEFAULT_ORACLE_CAP;
use gammasplit::{brute_force_split, density, gamma, nat, solve_split, Ratio, SequenceSpec};

fn split_solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("split");
    for &(a, b) in &[(55u64, 89u64), (199, 197), (987, 1597)] {
        let (a, b) = (nat(a), nat(b));
        group.bench_with_input(BenchmarkId::new("solve_split", &a), &(&a, &b), |bench, (a, b)| {
            bench.iter(|| solve_split(black_box(a), black_box(b)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("brute_force", &a), &(&a, &b), |bench, (a, b)| {
            bench.iter(|| brute_force_split(black_box(a), black_box(b), DEFAULT_ORACLE_CAP).unwrap())
        });
    }
    let (a, b) = (fibonacci(1000), fibonacci(1001));
    group.bench_function("gamma_fib1000", |bench| {
        bench.iter(|| gamma(black_box(&a), black_box(&b)).unwrap())
    });
    group.finish();
}

fn periods(c: &mut Criterion) {
    c.bench_function("pisano_1000", |b| b.iter(|| pisano(black_box(1000)).unwrap()));
    let fib = SequenceSpec::fibonacci();
    c.bench_function("t_k_fib_7", |b| b.iter(|| t_k(black_box(7), &fib, None).unwrap()));
    c.bench_function("factpow_mod", |b| {
        b.iter(|| term_mod(&SequenceSpec::FactorialPower, black_box(1_000), &nat(9_699_690)).unwrap())
    });
}

fn density_trace(c: &mut Criterion) {
    let p = Ratio::from_u64(1, 3).unwrap();
    c.bench_function("density_500", |b| {
        b.iter(|| density::build_density_sequence(black_box(&p), 500).unwrap())
    });
}

criterion_group!(benches, split_solvers, periods, density_trace);
criterion_main!(benches);
