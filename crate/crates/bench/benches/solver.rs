use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mad_bench::{random_matrix, random_vector};
use mad_core::engine::solve_gamma;
use mad_core::kkt::assemble_residual;
use mad_core::problems::ToyIdfProblem;
use mad_core::{mad_solve, CompoundVector, IdentityPreconditioner, Problem, SolverParams};
use nalgebra::DVector;

fn bench_solve_gamma(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_gamma");
    for p in [5, 10, 25] {
        let r = random_matrix(200, p, 1);
        let rhs = random_vector(200, 2);
        group.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, _| {
            b.iter(|| solve_gamma(black_box(&r), black_box(&rhs), 1e-6))
        });
    }
    group.finish();
}

fn bench_residual(c: &mut Criterion) {
    let mut problem = ToyIdfProblem::default();
    let dims = problem.dims();
    let y = CompoundVector::from_vector(dims, random_vector(dims.total(), 3));
    c.bench_function("assemble_residual/toy_idf", |b| {
        b.iter(|| assemble_residual(&mut problem, black_box(&y)).unwrap())
    });
}

fn bench_mad_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("mad_solve/toy_idf");
    group.sample_size(10);
    for q in [5, 10, 25] {
        let params = SolverParams::builder().q(q).build().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(q), &params, |b, params| {
            b.iter(|| {
                let mut problem = ToyIdfProblem::default();
                let x0 = DVector::zeros(problem.num_vars());
                mad_solve(&mut problem, &x0, params, IdentityPreconditioner).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_solve_gamma, bench_residual, bench_mad_solve);
criterion_main!(benches);
