//! Semi-smooth KKT residual and the two-part convergence test.
//!
//! For `min f(x)` subject to `g(x) = 0` and `h(x) >= 0` the residual is
//!
//! ```text
//!        [ grad f(x) - (grad g)^T lam_eq - (grad h)^T lam_ineq ]
//! r(y) = [ -g(x)                                              ]
//!        [ 0.5 * (|h(x) - lam_ineq| - h(x) - lam_ineq)         ]
//! ```
//!
//! with the absolute value taken componentwise. `r(y*) = 0` exactly at a KKT
//! point, including the sign conditions on `h` and `lam_ineq`.

use nalgebra::DVector;

use crate::error::EvalError;
use crate::vector::{BlockDims, CompoundVector};

/// Matrix-free evaluation contract for a constrained problem.
///
/// Only values, gradients and Jacobian-transpose products are required.
/// Implementations must be deterministic for a fixed instance; the noisy
/// wrapper achieves this with a seeded stream, which is why evaluation takes
/// `&mut self`.
pub trait Problem {
    fn num_vars(&self) -> usize;

    fn num_eq(&self) -> usize {
        0
    }

    fn num_ineq(&self) -> usize {
        0
    }

    fn objective(&mut self, x: &DVector<f64>) -> Result<f64, EvalError>;

    fn objective_gradient(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError>;

    fn eq_constraints(&mut self, _x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        Ok(DVector::zeros(0))
    }

    fn ineq_constraints(&mut self, _x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        Ok(DVector::zeros(0))
    }

    /// `(grad g)^T v` for `v` of length `num_eq`.
    fn eq_jac_t_vec(
        &mut self,
        _x: &DVector<f64>,
        _v: &DVector<f64>,
    ) -> Result<DVector<f64>, EvalError> {
        Ok(DVector::zeros(self.num_vars()))
    }

    /// `(grad h)^T w` for `w` of length `num_ineq`.
    fn ineq_jac_t_vec(
        &mut self,
        _x: &DVector<f64>,
        _w: &DVector<f64>,
    ) -> Result<DVector<f64>, EvalError> {
        Ok(DVector::zeros(self.num_vars()))
    }

    fn dims(&self) -> BlockDims {
        BlockDims::new(self.num_vars(), self.num_eq(), self.num_ineq())
    }
}

impl<P: Problem + ?Sized> Problem for Box<P> {
    fn num_vars(&self) -> usize {
        (**self).num_vars()
    }
    fn num_eq(&self) -> usize {
        (**self).num_eq()
    }
    fn num_ineq(&self) -> usize {
        (**self).num_ineq()
    }
    fn objective(&mut self, x: &DVector<f64>) -> Result<f64, EvalError> {
        (**self).objective(x)
    }
    fn objective_gradient(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        (**self).objective_gradient(x)
    }
    fn eq_constraints(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        (**self).eq_constraints(x)
    }
    fn ineq_constraints(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        (**self).ineq_constraints(x)
    }
    fn eq_jac_t_vec(
        &mut self,
        x: &DVector<f64>,
        v: &DVector<f64>,
    ) -> Result<DVector<f64>, EvalError> {
        (**self).eq_jac_t_vec(x, v)
    }
    fn ineq_jac_t_vec(
        &mut self,
        x: &DVector<f64>,
        w: &DVector<f64>,
    ) -> Result<DVector<f64>, EvalError> {
        (**self).ineq_jac_t_vec(x, w)
    }
}

/// A square nonlinear system `r(y) = 0` on compound vectors. This is what the
/// multisecant engine actually iterates on; [`KktSystem`] adapts a
/// [`Problem`] to it.
pub trait ResidualSystem {
    fn dims(&self) -> BlockDims;

    fn residual(&mut self, y: &CompoundVector) -> Result<CompoundVector, EvalError>;

    /// Value reported in iteration traces. Systems without an objective
    /// report NaN.
    fn objective(&mut self, _y: &CompoundVector) -> Result<f64, EvalError> {
        Ok(f64::NAN)
    }
}

impl<S: ResidualSystem + ?Sized> ResidualSystem for &mut S {
    fn dims(&self) -> BlockDims {
        (**self).dims()
    }

    fn residual(&mut self, y: &CompoundVector) -> Result<CompoundVector, EvalError> {
        (**self).residual(y)
    }

    fn objective(&mut self, y: &CompoundVector) -> Result<f64, EvalError> {
        (**self).objective(y)
    }
}

/// KKT residual view of a problem.
pub struct KktSystem<'a, P: Problem + ?Sized> {
    problem: &'a mut P,
}

impl<'a, P: Problem + ?Sized> KktSystem<'a, P> {
    pub fn new(problem: &'a mut P) -> Self {
        KktSystem { problem }
    }
}

impl<P: Problem + ?Sized> ResidualSystem for KktSystem<'_, P> {
    fn dims(&self) -> BlockDims {
        self.problem.dims()
    }

    fn residual(&mut self, y: &CompoundVector) -> Result<CompoundVector, EvalError> {
        assemble_residual(self.problem, y)
    }

    fn objective(&mut self, y: &CompoundVector) -> Result<f64, EvalError> {
        self.problem.objective(&y.primal())
    }
}

/// `0.5 * (|h - lam| - h - lam)`, which equals `-min(h, lam)`.
///
/// Zero exactly when `h >= 0`, `lam >= 0` and `h * lam = 0`.
#[inline]
pub fn complementarity_residual(h: f64, lam: f64) -> f64 {
    0.5 * ((h - lam).abs() - h - lam)
}

/// `grad f(x) - (grad g)^T lam_eq - (grad h)^T lam_ineq`.
pub fn lagrangian_gradient<P: Problem + ?Sized>(
    problem: &mut P,
    y: &CompoundVector,
) -> Result<DVector<f64>, EvalError> {
    check_dims(problem, y)?;
    let x = y.primal();
    let mut grad = problem.objective_gradient(&x)?;
    if grad.len() != x.len() {
        return Err(EvalError::new(format!(
            "objective gradient has length {}, expected {}",
            grad.len(),
            x.len()
        )));
    }
    // empty blocks are skipped rather than evaluated; a noisy wrapper would
    // otherwise perturb a product that is identically zero
    if problem.num_eq() > 0 {
        grad -= problem.eq_jac_t_vec(&x, &y.lam_eq().into_owned())?;
    }
    if problem.num_ineq() > 0 {
        grad -= problem.ineq_jac_t_vec(&x, &y.lam_ineq().into_owned())?;
    }
    Ok(grad)
}

/// Full residual `r(y)`.
pub fn assemble_residual<P: Problem + ?Sized>(
    problem: &mut P,
    y: &CompoundVector,
) -> Result<CompoundVector, EvalError> {
    let dims = y.dims();
    let grad = lagrangian_gradient(problem, y)?;
    let x = y.primal();

    let mut r = CompoundVector::zeros(dims);
    let out = r.as_vector_mut();
    out.rows_mut(0, dims.n).copy_from(&grad);

    if dims.m_eq > 0 {
        let g = problem.eq_constraints(&x)?;
        check_len("equality constraints", g.len(), dims.m_eq)?;
        for (dst, gi) in out.rows_mut(dims.n, dims.m_eq).iter_mut().zip(g.iter()) {
            *dst = -gi;
        }
    }
    if dims.m_ineq > 0 {
        let h = problem.ineq_constraints(&x)?;
        check_len("inequality constraints", h.len(), dims.m_ineq)?;
        let lam = y.lam_ineq();
        let offset = dims.n + dims.m_eq;
        for i in 0..dims.m_ineq {
            out[offset + i] = complementarity_residual(h[i], lam[i]);
        }
    }
    Ok(r)
}

fn check_dims<P: Problem + ?Sized>(problem: &P, y: &CompoundVector) -> Result<(), EvalError> {
    if problem.dims() != y.dims() {
        return Err(EvalError::new(format!(
            "point has blocks {}, problem expects {}",
            y.dims(),
            problem.dims()
        )));
    }
    Ok(())
}

fn check_len(what: &str, got: usize, expected: usize) -> Result<(), EvalError> {
    if got != expected {
        return Err(EvalError::new(format!(
            "{what} have length {got}, expected {expected}"
        )));
    }
    Ok(())
}

/// Two-norms of the stationarity block and of the stacked feasibility
/// blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceMetrics {
    pub optimality: f64,
    pub feasibility: f64,
}

impl ConvergenceMetrics {
    /// `sqrt(optimality^2 + feasibility^2)`, i.e. the full residual norm.
    pub fn residual_norm(&self) -> f64 {
        self.optimality.hypot(self.feasibility)
    }
}

pub fn convergence_metrics(r: &CompoundVector) -> ConvergenceMetrics {
    let dims = r.dims();
    let v = r.as_vector();
    ConvergenceMetrics {
        optimality: v.rows(0, dims.n).norm(),
        feasibility: v.rows(dims.n, dims.m_eq + dims.m_ineq).norm(),
    }
}

/// Relative-plus-absolute test applied to both parts separately.
pub fn check_converged(
    current: &ConvergenceMetrics,
    initial: &ConvergenceMetrics,
    eps_r: f64,
    eps_a: f64,
) -> bool {
    current.optimality <= eps_r * initial.optimality + eps_a
        && current.feasibility <= eps_r * initial.feasibility + eps_a
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Quad {
        target: f64,
    }

    impl Problem for Quad {
        fn num_vars(&self) -> usize {
            1
        }
        fn objective(&mut self, x: &DVector<f64>) -> Result<f64, EvalError> {
            Ok(0.5 * (x[0] - self.target).powi(2))
        }
        fn objective_gradient(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
            Ok(DVector::from_element(1, x[0] - self.target))
        }
    }

    /// f = 0.5 (x - 2)^2, h = x - 1 >= 0.
    struct Bounded;

    impl Problem for Bounded {
        fn num_vars(&self) -> usize {
            1
        }
        fn num_ineq(&self) -> usize {
            1
        }
        fn objective(&mut self, x: &DVector<f64>) -> Result<f64, EvalError> {
            Ok(0.5 * (x[0] - 2.0).powi(2))
        }
        fn objective_gradient(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
            Ok(DVector::from_element(1, x[0] - 2.0))
        }
        fn ineq_constraints(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
            Ok(DVector::from_element(1, x[0] - 1.0))
        }
        fn ineq_jac_t_vec(
            &mut self,
            _x: &DVector<f64>,
            w: &DVector<f64>,
        ) -> Result<DVector<f64>, EvalError> {
            Ok(w.clone())
        }
    }

    #[test]
    fn complementarity_examples() {
        assert_eq!(complementarity_residual(2.0, 0.0), 0.0);
        assert_eq!(complementarity_residual(0.0, 3.0), 0.0);
        assert_eq!(complementarity_residual(-1.0, 0.0), 1.0);
        assert_eq!(complementarity_residual(2.0, 3.0), -2.0);
    }

    #[test]
    fn unconstrained_residual_is_gradient() {
        let mut p = Quad { target: 3.0 };
        let y = CompoundVector::from_blocks(&[3.0], &[], &[]);
        let r = assemble_residual(&mut p, &y).unwrap();
        assert_eq!(r.as_vector().as_slice(), &[0.0]);

        let y = CompoundVector::from_blocks(&[0.0], &[], &[]);
        assert_eq!(lagrangian_gradient(&mut p, &y).unwrap()[0], -3.0);
    }

    #[test]
    fn inequality_residual_by_hand() {
        let mut p = Bounded;
        let y = CompoundVector::from_blocks(&[0.0], &[], &[0.0]);
        let r = assemble_residual(&mut p, &y).unwrap();
        assert_eq!(r.as_vector().as_slice(), &[-2.0, 1.0]);
    }

    #[test]
    fn dimension_mismatch_is_an_eval_error() {
        let mut p = Quad { target: 3.0 };
        let y = CompoundVector::from_blocks(&[0.0, 1.0], &[], &[]);
        assert!(assemble_residual(&mut p, &y).is_err());
    }

    #[test]
    fn metrics_examples() {
        let dims = BlockDims::new(2, 0, 0);
        let m = convergence_metrics(&CompoundVector::zeros(dims));
        assert_eq!((m.optimality, m.feasibility), (0.0, 0.0));

        let m = convergence_metrics(&CompoundVector::from_blocks(&[3.0, 4.0], &[], &[]));
        assert_eq!((m.optimality, m.feasibility), (5.0, 0.0));

        let m = convergence_metrics(&CompoundVector::from_blocks(&[0.0], &[-2.0], &[1.0]));
        assert_eq!(m.optimality, 0.0);
        assert!((m.feasibility - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn converged_examples() {
        let one = ConvergenceMetrics {
            optimality: 1.0,
            feasibility: 1.0,
        };
        let zero = ConvergenceMetrics {
            optimality: 0.0,
            feasibility: 0.0,
        };
        assert!(check_converged(&zero, &one, 1e-4, 1e-6));
        assert!(check_converged(&zero, &zero, 1e-4, 1e-6));
        let tiny = ConvergenceMetrics {
            optimality: 1e-9,
            feasibility: 1e-9,
        };
        assert!(check_converged(&tiny, &one, 1e-4, 1e-6));
        let opt_only = ConvergenceMetrics {
            optimality: 1e-3,
            feasibility: 0.0,
        };
        assert!(!check_converged(&opt_only, &one, 1e-4, 1e-6));
    }
}
