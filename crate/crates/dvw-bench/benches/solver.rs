use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use dvw_bench::{line_problem, setup, square_problem};
use dvw_core::timeint::rk4_steps;

fn rhs_line(c: &mut Criterion) {
    let mut group = c.benchmark_group("rhs_1d");
    for order in [2, 4, 6] {
        for n in [161, 641] {
            let (sd, state) = setup(&line_problem(n), order);
            let mut out = vec![0.0; sd.len()];
            group.bench_with_input(BenchmarkId::new(format!("order{order}"), n), &n, |b, _| {
                b.iter(|| sd.rhs(0.0, black_box(&state.v), black_box(&state.w), &mut out).unwrap())
            });
        }
    }
    group.finish();
}

fn rhs_square(c: &mut Criterion) {
    let mut group = c.benchmark_group("rhs_2d");
    for n in [41, 101] {
        let (sd, state) = setup(&square_problem(n), 4);
        let mut out = vec![0.0; sd.len()];
        group.bench_with_input(BenchmarkId::new("order4", n), &n, |b, _| {
            b.iter(|| sd.rhs(0.0, black_box(&state.v), black_box(&state.w), &mut out).unwrap())
        });
    }
    group.finish();
}

fn rk4(c: &mut Criterion) {
    let mut group = c.benchmark_group("rk4_10_steps");
    group.sample_size(20);
    let (sd, state) = setup(&line_problem(321), 4);
    group.bench_function("1d_n321", |b| b.iter(|| rk4_steps(&sd, state.clone(), 1e-5, 10, &[], false).unwrap()));
    let (sd, state) = setup(&square_problem(61), 4);
    group.bench_function("2d_n61", |b| b.iter(|| rk4_steps(&sd, state.clone(), 1e-4, 10, &[], false).unwrap()));
    group.finish();
}

criterion_group!(benches, rhs_line, rhs_square, rk4);
criterion_main!(benches);
