use mad_core::kkt::{assemble_residual, convergence_metrics};
use mad_core::precond::{DiagonalPreconditioner, IdentityPreconditioner};
use mad_core::problems::{make_problem, noisy_wrap, ToyIdfProblem, REGISTRY};
use mad_core::{mad_solve, NoiseModel, SolveStatus, SolverParams};

#[test]
fn toy_idf_converges_for_moderate_history() {
    for q in [5, 10, 20] {
        let (mut p, spec) = make_problem("toy_idf").unwrap();
        let params = SolverParams::builder()
            .q(q)
            .alpha(0.1)
            .beta(0.5)
            .build()
            .unwrap();
        let report = mad_solve(&mut p, &spec.default_x0, &params, IdentityPreconditioner).unwrap();
        assert_eq!(report.trace.status, SolveStatus::Converged, "q = {q}");
    }
}

#[test]
fn diagonal_preconditioner_on_toy_idf() {
    let (mut p, spec) = make_problem("toy_idf").unwrap();
    let precond = DiagonalPreconditioner::new(spec.precond_diagonal.clone()).unwrap();
    let report = mad_solve(&mut p, &spec.default_x0, &SolverParams::default(), precond).unwrap();
    assert_eq!(report.trace.status, SolveStatus::Converged);
}

#[test]
fn unknown_problem_is_rejected() {
    assert!(make_problem("no_such_problem").is_err());
    for name in REGISTRY {
        assert_eq!(make_problem(name).unwrap().1.name, name);
    }
}

#[test]
fn noisy_toy_idf_stays_bounded() {
    let delta = 1e-3;
    let mut p = noisy_wrap(ToyIdfProblem::default(), NoiseModel::new(delta, 7));
    let x0 = nalgebra::DVector::zeros(21);
    let report = mad_solve(
        &mut p,
        &x0,
        &SolverParams::default(),
        IdentityPreconditioner,
    )
    .unwrap();
    assert_ne!(report.trace.status, SolveStatus::Diverged);
    assert!(report.trace.best_optimality() < 100.0 * delta);
    assert!(report.trace.best_feasibility() < 100.0 * delta);

    let mut clean = p.into_inner();
    let m = convergence_metrics(&assemble_residual(&mut clean, &report.solution).unwrap());
    assert!(m.optimality.is_finite() && m.feasibility.is_finite());
}
