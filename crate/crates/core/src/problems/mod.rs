//! Builtin benchmark problems with known solutions, a toy coupled IDF
//! problem, and a seeded noise wrapper.

mod noise;
mod nonlinear;
mod quadratic;
mod toy_idf;

use nalgebra::DVector;

pub use noise::{noisy_wrap, NoiseModel, NoisyProblem};
pub use nonlinear::{NonconvexQuartic, Rosenbrock, DISK_RADIUS_SQ};
pub use quadratic::QuadraticProblem;
pub use toy_idf::{ToyIdfProblem, DEFAULT_DESIGN_VARS, DEFAULT_DISCIPLINE_SIZE, DEFAULT_SEED};

use crate::error::RegistryError;
use crate::kkt::Problem;
use crate::oracle::dense_kkt_solve;
use crate::vector::{BlockDims, CompoundVector};

/// Stable problem identifiers accepted by [`make_problem`].
pub const REGISTRY: [&str; 7] = [
    "quad1d",
    "eq_qp",
    "ineq_active",
    "ineq_inactive",
    "rosenbrock",
    "toy_idf",
    "nonconvex_quartic",
];

pub type BoxedProblem = Box<dyn Problem + Send>;

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub name: &'static str,
    pub dims: BlockDims,
    pub known_solution: Option<CompoundVector>,
    pub default_x0: DVector<f64>,
    /// Diagonal of `P` for the diagonal preconditioner, one entry per
    /// compound-vector component.
    pub precond_diagonal: DVector<f64>,
}

fn spec(
    name: &'static str,
    problem: &dyn Problem,
    known_solution: Option<CompoundVector>,
    default_x0: &[f64],
) -> ProblemSpec {
    let dims = problem.dims();
    ProblemSpec {
        name,
        dims,
        known_solution,
        default_x0: DVector::from_column_slice(default_x0),
        precond_diagonal: DVector::from_element(dims.total(), 1.0),
    }
}

/// Primal rows take `max(|H_ii|, 1)`, multiplier rows 1.
fn quadratic_diagonal(q: &QuadraticProblem) -> DVector<f64> {
    let dims = q.dims();
    DVector::from_fn(dims.total(), |i, _| {
        if i < dims.n {
            q.hessian[(i, i)].abs().max(1.0)
        } else {
            1.0
        }
    })
}

/// Builds a registry problem together with its metadata.
pub fn make_problem(name: &str) -> Result<(BoxedProblem, ProblemSpec), RegistryError> {
    let cv = CompoundVector::from_blocks;
    Ok(match name {
        "quad1d" => {
            let p = QuadraticProblem::quad1d();
            let s = spec("quad1d", &p, Some(cv(&[3.0], &[], &[])), &[0.0]);
            (Box::new(p), s)
        }
        "eq_qp" => {
            let p = QuadraticProblem::eq_qp();
            let s = spec("eq_qp", &p, Some(cv(&[0.5, 0.5], &[0.5], &[])), &[0.0, 0.0]);
            (Box::new(p), s)
        }
        "ineq_active" => {
            let p = QuadraticProblem::ineq_active();
            let s = spec("ineq_active", &p, Some(cv(&[1.0], &[], &[2.0])), &[0.0]);
            (Box::new(p), s)
        }
        "ineq_inactive" => {
            let p = QuadraticProblem::ineq_inactive();
            let s = spec("ineq_inactive", &p, Some(cv(&[2.0], &[], &[0.0])), &[0.0]);
            (Box::new(p), s)
        }
        "rosenbrock" => {
            let p = Rosenbrock::unconstrained();
            let s = spec(
                "rosenbrock",
                &p,
                Some(cv(&[1.0, 1.0], &[], &[])),
                &[-1.2, 1.0],
            );
            (Box::new(p), s)
        }
        "nonconvex_quartic" => {
            let p = NonconvexQuartic;
            let s = spec("nonconvex_quartic", &p, Some(cv(&[1.0], &[], &[])), &[2.0]);
            (Box::new(p), s)
        }
        "toy_idf" => {
            let p = ToyIdfProblem::default();
            let q = p.as_quadratic();
            let known = dense_kkt_solve(&q.hessian, &q.linear, &q.eq_jac, &q.eq_rhs)
                .expect("toy IDF KKT matrix is nonsingular");
            let mut s = spec("toy_idf", &p, Some(known), &vec![0.0; p.num_vars()]);
            s.precond_diagonal = quadratic_diagonal(&q);
            (Box::new(p), s)
        }
        other => return Err(RegistryError(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_dimensions() {
        let (_, s) = make_problem("quad1d").unwrap();
        assert_eq!(s.dims, BlockDims::new(1, 0, 0));
        let (_, s) = make_problem("eq_qp").unwrap();
        assert_eq!(s.dims, BlockDims::new(2, 1, 0));
        let (_, s) = make_problem("toy_idf").unwrap();
        assert_eq!(s.dims.total(), 5 + 4 * 8);
        assert_eq!(s.dims, BlockDims::new(21, 16, 0));
    }

    #[test]
    fn unknown_name() {
        let err = make_problem("hs071").err().unwrap();
        assert_eq!(err, RegistryError("hs071".into()));
    }

    #[test]
    fn every_name_builds() {
        for name in REGISTRY {
            let (p, s) = make_problem(name).unwrap();
            assert_eq!(p.dims(), s.dims);
            assert_eq!(s.default_x0.len(), s.dims.n);
            assert_eq!(s.precond_diagonal.len(), s.dims.total());
        }
    }
}
