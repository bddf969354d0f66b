//! Multisecant Accelerated Descent.
//!
//! Each iteration rebuilds the secant matrices `(Y, R)` from the raw history,
//! solves `min |r_k - R gamma|` by truncated SVD, forms the preconditioned
//! multisecant step, clips it to `delta_max` and evaluates the new residual.
//! There is no line search and no trust region; the only safeguards are the
//! step clip and a divergence guard on the residual norm.

mod history;
mod lstsq;
mod params;
mod step;
mod trace;

use nalgebra::DVector;

pub use history::{build_secant_matrices, SecantMatrices, SolveHistory, DEGENERATE_PAIR_TOL};
pub use lstsq::solve_gamma;
pub use params::{SolverParams, SolverParamsBuilder};
pub use step::{clip_step, compute_step};
pub use trace::{IterationRecord, IterationTrace, SolveStatus, HISTORY_CSV_HEADER};

use crate::error::{EvalError, SolveError};
use crate::kkt::{
    check_converged, convergence_metrics, ConvergenceMetrics, KktSystem, Problem, ResidualSystem,
};
use crate::precond::Preconditioner;
use crate::vector::CompoundVector;

/// A run stops as diverged once `|r_k| > DIVERGENCE_FACTOR * |r_0|`.
pub const DIVERGENCE_FACTOR: f64 = 1e12;

/// What happened during one call to [`MadIteration::step`].
#[derive(Debug, Clone)]
pub struct StepInfo {
    /// Step actually applied (after clipping).
    pub step: DVector<f64>,
    /// Length of the multisecant step before clipping.
    pub unclipped_norm: f64,
    pub clipped: bool,
    /// Number of secant pairs used.
    pub secant_pairs: usize,
}

/// Step-by-step driver. [`mad_solve`] wraps it into a full run; tests and
/// experiments can use it directly to inspect the state between steps.
pub struct MadIteration<S, P> {
    system: S,
    precond: P,
    params: SolverParams,
    history: SolveHistory,
    y: CompoundVector,
    r: CompoundVector,
    metrics: ConvergenceMetrics,
    initial: ConvergenceMetrics,
    initial_norm: f64,
    iteration: usize,
    residual_evaluations: usize,
}

impl<S: ResidualSystem, P: Preconditioner> MadIteration<S, P> {
    /// Evaluates `r(y0)` and stores it as the first history entry.
    pub fn new(
        system: S,
        y0: CompoundVector,
        params: SolverParams,
        precond: P,
    ) -> Result<Self, EvalError> {
        Self::from_iterates(system, vec![y0], params, precond)
    }

    /// Warm start: evaluates the residual at each of `iterates` (oldest
    /// first) and records them in the history. The last one becomes the
    /// current iterate; the first one defines the initial metrics.
    pub fn from_iterates(
        mut system: S,
        iterates: Vec<CompoundVector>,
        params: SolverParams,
        precond: P,
    ) -> Result<Self, EvalError> {
        assert!(!iterates.is_empty(), "at least one iterate is required");
        let dims = system.dims();
        let mut history = SolveHistory::new(params.q());
        let mut initial = None;
        let mut evaluations = 0;
        for y in iterates {
            if y.dims() != dims {
                return Err(EvalError::new(format!(
                    "iterate has blocks {}, system expects {}",
                    y.dims(),
                    dims
                )));
            }
            evaluations += 1;
            let r = system.residual(&y)?;
            if initial.is_none() {
                initial = Some((convergence_metrics(&r), r.norm()));
            }
            history.push(y, r);
        }
        let (initial, initial_norm) = initial.expect("nonempty");
        let (y, r) = history
            .latest()
            .map(|(y, r)| (y.clone(), r.clone()))
            .expect("nonempty");
        Ok(MadIteration {
            system,
            precond,
            history,
            initial_norm,
            metrics: convergence_metrics(&r),
            y,
            r,
            initial,
            params,
            iteration: 0,
            residual_evaluations: evaluations,
        })
    }

    pub fn iterate(&self) -> &CompoundVector {
        &self.y
    }

    pub fn residual(&self) -> &CompoundVector {
        &self.r
    }

    pub fn metrics(&self) -> ConvergenceMetrics {
        self.metrics
    }

    pub fn initial_metrics(&self) -> ConvergenceMetrics {
        self.initial
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn residual_evaluations(&self) -> usize {
        self.residual_evaluations
    }

    pub fn params(&self) -> &SolverParams {
        &self.params
    }

    pub fn history(&self) -> &SolveHistory {
        &self.history
    }

    pub fn system_mut(&mut self) -> &mut S {
        &mut self.system
    }

    /// `(Y, R)` as they would be used by the next step.
    pub fn secant_matrices(&self) -> SecantMatrices {
        build_secant_matrices(&self.history, self.params.beta())
    }

    pub fn is_converged(&self) -> bool {
        check_converged(
            &self.metrics,
            &self.initial,
            self.params.eps_r(),
            self.params.eps_a(),
        )
    }

    /// Non-finite residual, or growth beyond [`DIVERGENCE_FACTOR`].
    pub fn is_diverged(&self) -> bool {
        let norm = self.r.norm();
        !norm.is_finite() || norm > DIVERGENCE_FACTOR * self.initial_norm
    }

    /// Multisecant step computed from the history without applying it.
    pub fn propose_step(&mut self) -> (DVector<f64>, usize) {
        let (_, r_k) = self.history.latest().expect("history is never empty");
        let r_k = r_k.as_vector().clone();
        let secants = self.secant_matrices();
        let gamma = solve_gamma(&secants.residual_diffs, &r_k, self.params.svd_cutoff());
        let dy = compute_step(
            &r_k,
            &secants,
            &gamma,
            &mut self.precond,
            self.params.alpha(),
            self.iteration,
        );
        (dy, secants.rank())
    }

    /// Takes one step. On evaluation failure the state is left at the
    /// previous iterate.
    pub fn step(&mut self) -> Result<StepInfo, EvalError> {
        let (mut dy, secant_pairs) = self.propose_step();
        let unclipped_norm = dy.norm();
        let clipped = clip_step(&mut dy, self.params.delta_max());

        let y_next = CompoundVector::from_vector(self.y.dims(), self.y.as_vector() + &dy);
        self.residual_evaluations += 1;
        let r_next = self.system.residual(&y_next)?;

        self.history.push(y_next.clone(), r_next.clone());
        self.metrics = convergence_metrics(&r_next);
        self.y = y_next;
        self.r = r_next;
        self.iteration += 1;
        Ok(StepInfo {
            step: dy,
            unclipped_norm,
            clipped,
            secant_pairs,
        })
    }

    pub fn into_iterate(self) -> CompoundVector {
        self.y
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: CompoundVector,
    pub trace: IterationTrace,
}

/// Runs the multisecant iteration on `r(y) = 0` from `y0`.
pub fn solve_system<S, P>(
    mut system: S,
    y0: CompoundVector,
    params: &SolverParams,
    precond: P,
) -> SolveReport
where
    S: ResidualSystem,
    P: Preconditioner,
{
    let failed = |y: CompoundVector, records, evals, e: EvalError| SolveReport {
        solution: y,
        trace: IterationTrace {
            records,
            status: SolveStatus::EvaluationError(e.0),
            residual_evaluations: evals,
        },
    };

    let f0 = match system.objective(&y0) {
        Ok(f) => f,
        Err(e) => return failed(y0, Vec::new(), 0, e),
    };
    let mut it = match MadIteration::new(system, y0.clone(), params.clone(), precond) {
        Ok(it) => it,
        Err(e) => return failed(y0, Vec::new(), 1, e),
    };

    let m0 = it.metrics();
    let mut records = vec![IterationRecord {
        iter: 0,
        objective: f0,
        optimality: m0.optimality,
        feasibility: m0.feasibility,
        step_norm: 0.0,
    }];

    let status = if it.is_diverged() {
        SolveStatus::Diverged
    } else {
        loop {
            if it.is_converged() {
                break SolveStatus::Converged;
            }
            if it.iteration() >= params.k_max() {
                break SolveStatus::BudgetExhausted;
            }
            let info = match it.step() {
                Ok(info) => info,
                Err(e) => break SolveStatus::EvaluationError(e.0),
            };
            let objective = match it.system.objective(&it.y) {
                Ok(f) => f,
                Err(e) => break SolveStatus::EvaluationError(e.0),
            };
            let m = it.metrics();
            records.push(IterationRecord {
                iter: it.iteration(),
                objective,
                optimality: m.optimality,
                feasibility: m.feasibility,
                step_norm: info.step.norm(),
            });
            if it.is_diverged() {
                break SolveStatus::Diverged;
            }
        }
    };

    let residual_evaluations = it.residual_evaluations();
    SolveReport {
        solution: it.into_iterate(),
        trace: IterationTrace {
            records,
            status,
            residual_evaluations,
        },
    }
}

/// Solves the constrained problem from `y0 = (x0, 0, 0)`.
pub fn mad_solve<Pr, P>(
    problem: &mut Pr,
    x0: &DVector<f64>,
    params: &SolverParams,
    precond: P,
) -> Result<SolveReport, SolveError>
where
    Pr: Problem + ?Sized,
    P: Preconditioner,
{
    let dims = problem.dims();
    if x0.len() != dims.n {
        return Err(SolveError::Dimension {
            expected: dims.n,
            got: x0.len(),
        });
    }
    let y0 = CompoundVector::from_primal(dims, x0);
    Ok(solve_system(KktSystem::new(problem), y0, params, precond))
}
