//! Matrix-free multisecant solver for nonlinearly constrained optimization.
//!
//! The first-order optimality conditions of
//!
//! ```text
//! min f(x)  s.t.  g(x) = 0,  h(x) >= 0
//! ```
//!
//! are written as a semi-smooth system `r(y) = 0` in the compound unknown
//! `y = (x, lam_eq, lam_ineq)` and solved with a preconditioned, regularized
//! multisecant (generalized Broyden / Anderson) iteration. Only gradients,
//! constraint values and Jacobian-transpose products are required from the
//! problem; no Hessian or constraint Jacobian is ever formed.
//!
//! Modules:
//! - [`kkt`]: residual assembly and convergence metrics.
//! - [`engine`]: secant history, truncated-SVD least squares and the outer loop.
//! - [`precond`]: preconditioners used as the base inverse-Jacobian estimate.
//! - [`problems`]: builtin benchmark problems and the noise wrapper.
//! - [`oracle`]: dense reference machinery used to verify the matrix-free path.

pub mod engine;
pub mod error;
pub mod kkt;
pub mod oracle;
pub mod precond;
pub mod problems;
mod vector;

pub use engine::{
    mad_solve, IterationRecord, IterationTrace, MadIteration, SolveReport, SolveStatus,
    SolverParams, SolverParamsBuilder,
};
pub use error::{EvalError, OracleError, ParamError, PrecondError, RegistryError, SolveError};
pub use kkt::{ConvergenceMetrics, KktSystem, Problem, ResidualSystem};
pub use precond::{
    DenseInversePreconditioner, DiagonalPreconditioner, FnPreconditioner, IdentityPreconditioner,
    Preconditioner,
};
pub use problems::{make_problem, NoiseModel, NoisyProblem, ProblemSpec, REGISTRY};
pub use vector::{BlockDims, CompoundVector};
