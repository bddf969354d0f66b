use nalgebra::{DMatrix, DVector};

use crate::error::EvalError;
use crate::kkt::Problem;

/// `f = 0.5 x^T H x + c^T x + f0` with linear constraints
/// `g(x) = A x - b = 0` and `h(x) = C x - d >= 0`.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    pub hessian: DMatrix<f64>,
    pub linear: DVector<f64>,
    pub constant: f64,
    pub eq_jac: DMatrix<f64>,
    pub eq_rhs: DVector<f64>,
    pub ineq_jac: DMatrix<f64>,
    pub ineq_rhs: DVector<f64>,
}

impl QuadraticProblem {
    pub fn unconstrained(hessian: DMatrix<f64>, linear: DVector<f64>, constant: f64) -> Self {
        let n = linear.len();
        QuadraticProblem {
            hessian,
            linear,
            constant,
            eq_jac: DMatrix::zeros(0, n),
            eq_rhs: DVector::zeros(0),
            ineq_jac: DMatrix::zeros(0, n),
            ineq_rhs: DVector::zeros(0),
        }
    }

    pub fn with_equalities(mut self, jac: DMatrix<f64>, rhs: DVector<f64>) -> Self {
        assert_eq!(jac.ncols(), self.linear.len());
        assert_eq!(jac.nrows(), rhs.len());
        self.eq_jac = jac;
        self.eq_rhs = rhs;
        self
    }

    pub fn with_inequalities(mut self, jac: DMatrix<f64>, rhs: DVector<f64>) -> Self {
        assert_eq!(jac.ncols(), self.linear.len());
        assert_eq!(jac.nrows(), rhs.len());
        self.ineq_jac = jac;
        self.ineq_rhs = rhs;
        self
    }

    /// `0.5 (x - 3)^2`.
    pub fn quad1d() -> Self {
        Self::unconstrained(DMatrix::identity(1, 1), DVector::from_element(1, -3.0), 4.5)
    }

    /// `0.5 |x|^2` subject to `x1 + x2 - 1 = 0`.
    pub fn eq_qp() -> Self {
        Self::unconstrained(DMatrix::identity(2, 2), DVector::zeros(2), 0.0).with_equalities(
            DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
            DVector::from_element(1, 1.0),
        )
    }

    /// `0.5 (x + 1)^2` subject to `x - 1 >= 0`; the bound is active.
    pub fn ineq_active() -> Self {
        Self::unconstrained(DMatrix::identity(1, 1), DVector::from_element(1, 1.0), 0.5)
            .with_inequalities(DMatrix::identity(1, 1), DVector::from_element(1, 1.0))
    }

    /// `0.5 (x - 2)^2` subject to `x - 1 >= 0`; the bound is inactive.
    pub fn ineq_inactive() -> Self {
        Self::unconstrained(DMatrix::identity(1, 1), DVector::from_element(1, -2.0), 2.0)
            .with_inequalities(DMatrix::identity(1, 1), DVector::from_element(1, 1.0))
    }
}

impl Problem for QuadraticProblem {
    fn num_vars(&self) -> usize {
        self.linear.len()
    }

    fn num_eq(&self) -> usize {
        self.eq_rhs.len()
    }

    fn num_ineq(&self) -> usize {
        self.ineq_rhs.len()
    }

    fn objective(&mut self, x: &DVector<f64>) -> Result<f64, EvalError> {
        Ok(0.5 * x.dot(&(&self.hessian * x)) + self.linear.dot(x) + self.constant)
    }

    fn objective_gradient(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        Ok(&self.hessian * x + &self.linear)
    }

    fn eq_constraints(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        Ok(&self.eq_jac * x - &self.eq_rhs)
    }

    fn ineq_constraints(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        Ok(&self.ineq_jac * x - &self.ineq_rhs)
    }

    fn eq_jac_t_vec(
        &mut self,
        _x: &DVector<f64>,
        v: &DVector<f64>,
    ) -> Result<DVector<f64>, EvalError> {
        Ok(self.eq_jac.tr_mul(v))
    }

    fn ineq_jac_t_vec(
        &mut self,
        _x: &DVector<f64>,
        w: &DVector<f64>,
    ) -> Result<DVector<f64>, EvalError> {
        Ok(self.ineq_jac.tr_mul(w))
    }
}
