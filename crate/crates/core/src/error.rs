use thiserror::Error;

/// A problem could not be evaluated at the requested point.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("evaluation failed: {0}")]
pub struct EvalError(pub String);

impl EvalError {
    pub fn new(msg: impl Into<String>) -> Self {
        EvalError(msg.into())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("alpha must be positive and finite, got {0}")]
    Alpha(f64),
    #[error("beta must be nonnegative and finite, got {0}")]
    Beta(f64),
    #[error("delta_max must be positive, got {0}")]
    DeltaMax(f64),
    #[error("eps_r must lie in (0, 1), got {0}")]
    EpsRel(f64),
    #[error("eps_a must be positive and finite, got {0}")]
    EpsAbs(f64),
    #[error("svd_cutoff must lie in (0, 1), got {0}")]
    SvdCutoff(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("initial point has length {got}, problem expects {expected}")]
    Dimension { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PrecondError {
    #[error("diagonal entry {index} is zero")]
    ZeroDiagonal { index: usize },
    #[error("preconditioner matrix is singular")]
    Singular,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("unknown problem `{0}`")]
pub struct RegistryError(pub String);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("jacobian is singular at newton iteration {iteration}")]
    SingularJacobian { iteration: usize },
    #[error("newton did not reach tolerance in {max_iter} iterations (|r| = {residual_norm:e})")]
    MaxIterations { max_iter: usize, residual_norm: f64 },
    #[error("KKT matrix is singular")]
    SingularKkt,
}
