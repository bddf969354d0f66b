use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use mad_core::oracle::fd_jacobian;
use mad_core::problems::{noisy_wrap, BoxedProblem};
use mad_core::{
    mad_solve, make_problem, CompoundVector, DenseInversePreconditioner, DiagonalPreconditioner,
    IdentityPreconditioner, NoiseModel, Preconditioner, ProblemSpec, SolveReport, SolveStatus,
    SolverParams,
};
use thiserror::Error;

use crate::config::{PrecondChoice, RunConfig};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Registry(#[from] mad_core::RegistryError),
    #[error("preconditioner: {0}")]
    Precond(String),
    #[error(transparent)]
    Solve(#[from] mad_core::SolveError),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: io::Error },
}

pub fn exit_code(status: &SolveStatus) -> i32 {
    match status {
        SolveStatus::Converged => 0,
        SolveStatus::BudgetExhausted => 2,
        SolveStatus::Diverged => 3,
        SolveStatus::EvaluationError(_) => 4,
    }
}

/// Registry problem with optional noise applied.
pub fn build_problem(config: &RunConfig) -> Result<(BoxedProblem, ProblemSpec), RunError> {
    let (problem, spec) = make_problem(&config.problem)?;
    if config.noise > 0.0 {
        let noisy = noisy_wrap(problem, NoiseModel::new(config.noise, config.seed));
        return Ok((Box::new(noisy), spec));
    }
    Ok((problem, spec))
}

/// The oracle choice inverts a central-difference Jacobian of the noiseless
/// residual at the starting point.
pub fn build_precond(
    choice: PrecondChoice,
    spec: &ProblemSpec,
) -> Result<Box<dyn Preconditioner + Send>, RunError> {
    Ok(match choice {
        PrecondChoice::Identity => Box::new(IdentityPreconditioner),
        PrecondChoice::Diagonal => Box::new(
            DiagonalPreconditioner::new(spec.precond_diagonal.clone())
                .map_err(|e| RunError::Precond(e.to_string()))?,
        ),
        PrecondChoice::Oracle => {
            let (mut clean, _) = make_problem(spec.name)?;
            let y0 = CompoundVector::from_primal(spec.dims, &spec.default_x0);
            let jac = fd_jacobian(&mut clean, &y0).map_err(|e| RunError::Precond(e.to_string()))?;
            Box::new(
                DenseInversePreconditioner::from_matrix(jac.matrix)
                    .map_err(|e| RunError::Precond(e.to_string()))?,
            )
        }
    })
}

pub fn solve(config: &RunConfig, params: &SolverParams) -> Result<SolveReport, RunError> {
    let (mut problem, spec) = build_problem(config)?;
    let precond = build_precond(config.precond, &spec)?;
    Ok(mad_solve(&mut problem, &spec.default_x0, params, precond)?)
}

/// `status iters final_opt final_feas`
pub fn status_line(report: &SolveReport) -> String {
    let trace = &report.trace;
    let (opt, feas) = trace
        .last()
        .map_or((f64::NAN, f64::NAN), |r| (r.optimality, r.feasibility));
    format!(
        "{} {} {:e} {:e}",
        trace.status.as_str(),
        trace.iterations(),
        opt,
        feas
    )
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>, RunError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| output_error(path, source))
}

pub(crate) fn output_error(path: &Path, source: io::Error) -> RunError {
    RunError::Output {
        path: path.display().to_string(),
        source,
    }
}

/// Runs one solve, writes the history CSV if requested and prints the status
/// line to `out`. Returns the process exit code.
pub fn run_single(
    config: &RunConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, RunError> {
    let report = solve(config, &config.params)?;
    if let Some(path) = &config.history_out {
        let mut file = create(path)?;
        report
            .trace
            .write_csv(&mut file)
            .and_then(|_| file.flush())
            .map_err(|e| output_error(path, e))?;
    }
    let _ = writeln!(out, "{}", status_line(&report));
    let _ = writeln!(
        err,
        "residual evaluations: {}",
        report.trace.residual_evaluations
    );
    if let SolveStatus::EvaluationError(msg) = &report.trace.status {
        let _ = writeln!(err, "evaluation error: {msg}");
    }
    Ok(exit_code(&report.trace.status))
}
