use nalgebra::DVector;

use crate::error::EvalError;
use crate::kkt::Problem;

/// Radius squared of the disk used by [`Rosenbrock::on_disk`].
pub const DISK_RADIUS_SQ: f64 = 1.5;

/// `(1 - x1)^2 + 100 (x2 - x1^2)^2`, optionally restricted to the disk
/// `x1^2 + x2^2 <= 1.5`, which cuts off the unconstrained minimizer.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rosenbrock {
    disk: bool,
}

impl Rosenbrock {
    pub fn unconstrained() -> Self {
        Rosenbrock { disk: false }
    }

    pub fn on_disk() -> Self {
        Rosenbrock { disk: true }
    }
}

impl Problem for Rosenbrock {
    fn num_vars(&self) -> usize {
        2
    }

    fn num_ineq(&self) -> usize {
        usize::from(self.disk)
    }

    fn objective(&mut self, x: &DVector<f64>) -> Result<f64, EvalError> {
        Ok((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2))
    }

    fn objective_gradient(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        let t = x[1] - x[0] * x[0];
        Ok(DVector::from_column_slice(&[
            -2.0 * (1.0 - x[0]) - 400.0 * x[0] * t,
            200.0 * t,
        ]))
    }

    fn ineq_constraints(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        if !self.disk {
            return Ok(DVector::zeros(0));
        }
        Ok(DVector::from_element(1, DISK_RADIUS_SQ - x.norm_squared()))
    }

    fn ineq_jac_t_vec(
        &mut self,
        x: &DVector<f64>,
        w: &DVector<f64>,
    ) -> Result<DVector<f64>, EvalError> {
        if !self.disk {
            return Ok(DVector::zeros(2));
        }
        Ok(x * (-2.0 * w[0]))
    }
}

/// `0.25 x^4 - 0.5 x^2`: minima at `x = +-1`, a stationary maximizer at 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct NonconvexQuartic;

impl Problem for NonconvexQuartic {
    fn num_vars(&self) -> usize {
        1
    }

    fn objective(&mut self, x: &DVector<f64>) -> Result<f64, EvalError> {
        Ok(0.25 * x[0].powi(4) - 0.5 * x[0] * x[0])
    }

    fn objective_gradient(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        Ok(DVector::from_element(1, x[0].powi(3) - x[0]))
    }
}
