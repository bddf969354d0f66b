use std::io::Write;

use mad_core::oracle::newton_solve;
use mad_core::{CompoundVector, OracleError, SolveStatus};

use crate::config::RunConfig;
use crate::run::{build_problem, solve, status_line, RunError};

pub const NEWTON_TOL: f64 = 1e-10;
pub const NEWTON_MAX_ITER: usize = 200;

#[derive(Debug, Clone)]
pub struct Verification {
    pub newton: CompoundVector,
    pub newton_iterations: usize,
    pub mad: CompoundVector,
    pub mad_status: SolveStatus,
    pub distance: f64,
    pub tolerance: f64,
}

impl Verification {
    pub fn agrees(&self) -> bool {
        self.distance <= self.tolerance
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("newton oracle: {0}")]
    Oracle(#[from] OracleError),
}

/// Compares the configured solve against dense Newton from the same start.
/// The agreement tolerance is `10 (eps_rel |r0| + eps_abs)`.
pub fn verify(config: &RunConfig) -> Result<(Verification, String), VerifyError> {
    let report = solve(config, &config.params)?;
    let (mut problem, spec) = build_problem(config)?;
    let y0 = CompoundVector::from_primal(spec.dims, &spec.default_x0);
    let newton = newton_solve(&mut problem, &y0, NEWTON_TOL, NEWTON_MAX_ITER)?;
    let r0 = report.trace.records.first().map_or(0.0, |r| {
        (r.optimality * r.optimality + r.feasibility * r.feasibility).sqrt()
    });
    let tolerance = 10.0 * (config.params.eps_r() * r0 + config.params.eps_a());
    let distance = (report.solution.as_vector() - newton.solution.as_vector()).norm();
    let line = status_line(&report);
    Ok((
        Verification {
            newton: newton.solution,
            newton_iterations: newton.iterations,
            mad: report.solution,
            mad_status: report.trace.status,
            distance,
            tolerance,
        },
        line,
    ))
}

/// Prints `newton_iters distance tolerance agree|disagree`. Exit code 0 on
/// agreement, 5 otherwise.
pub fn run_verify(config: &RunConfig, out: &mut dyn Write) -> Result<i32, VerifyError> {
    let (v, line) = verify(config)?;
    let _ = writeln!(out, "{line}");
    let verdict = if v.agrees() { "agree" } else { "disagree" };
    let _ = writeln!(
        out,
        "newton {} {:e} {:e} {verdict}",
        v.newton_iterations, v.distance, v.tolerance
    );
    Ok(if v.agrees() { 0 } else { 5 })
}
