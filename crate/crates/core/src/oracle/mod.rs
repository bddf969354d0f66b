//! Dense reference machinery: finite-difference Jacobians of `r(y)`, a dense
//! semi-smooth Newton solver, pseudo-inverse least squares and direct KKT
//! solves. None of it is matrix-free and none of it is used by the engine;
//! it exists to check the engine against independent computations.

mod jacobi;

use nalgebra::{DMatrix, DVector};

pub use jacobi::{jacobi_svd, JacobiSvd};

use crate::error::{EvalError, OracleError};
use crate::kkt::{assemble_residual, KktSystem, Problem, ResidualSystem};
use crate::vector::{BlockDims, CompoundVector};

/// Relative part of the central-difference step `1e-6 * (1 + |y_i|)`.
pub const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct DenseJacobian {
    pub matrix: DMatrix<f64>,
    /// Columns whose stencil may straddle a complementarity kink. Their
    /// entries are averages of two one-sided slopes and are not certified.
    pub kink_columns: Vec<usize>,
}

impl DenseJacobian {
    pub fn is_certified(&self) -> bool {
        self.kink_columns.is_empty()
    }
}

fn fd_step(yi: f64) -> f64 {
    FD_STEP * (1.0 + yi.abs())
}

/// Central-difference Jacobian of any residual system.
pub fn fd_jacobian_system<S: ResidualSystem + ?Sized>(
    system: &mut S,
    y: &CompoundVector,
) -> Result<DMatrix<f64>, EvalError> {
    let dims = y.dims();
    let len = dims.total();
    let mut jac = DMatrix::zeros(len, len);
    for j in 0..len {
        let h = fd_step(y[j]);
        let mut plus = y.as_vector().clone();
        plus[j] += h;
        let mut minus = y.as_vector().clone();
        minus[j] -= h;
        let rp = system.residual(&CompoundVector::from_vector(dims, plus))?;
        let rm = system.residual(&CompoundVector::from_vector(dims, minus))?;
        let col = (rp.into_vector() - rm.into_vector()) / (2.0 * h);
        jac.set_column(j, &col);
    }
    Ok(jac)
}

/// Central-difference Jacobian of the KKT residual, with kink flags.
pub fn fd_jacobian<P: Problem + ?Sized>(
    problem: &mut P,
    y: &CompoundVector,
) -> Result<DenseJacobian, EvalError> {
    let matrix = fd_jacobian_system(&mut KktSystem::new(&mut *problem), y)?;
    let kink_columns = kink_columns(problem, y)?;
    Ok(DenseJacobian {
        matrix,
        kink_columns,
    })
}

fn kink_columns<P: Problem + ?Sized>(
    problem: &mut P,
    y: &CompoundVector,
) -> Result<Vec<usize>, EvalError> {
    let dims = y.dims();
    if dims.m_ineq == 0 {
        return Ok(Vec::new());
    }
    let x = y.primal();
    let h = problem.ineq_constraints(&x)?;
    let lam = y.lam_ineq();
    let offset = dims.n + dims.m_eq;
    let mut flagged = vec![false; dims.total()];
    for i in 0..dims.m_ineq {
        let gap = (h[i] - lam[i]).abs();
        let mut e = DVector::zeros(dims.m_ineq);
        e[i] = 1.0;
        let grad_hi = problem.ineq_jac_t_vec(&x, &e)?;
        for j in 0..dims.n {
            if grad_hi[j] != 0.0 && gap <= 10.0 * fd_step(x[j]) * grad_hi[j].abs().max(1.0) {
                flagged[j] = true;
            }
        }
        let col = offset + i;
        if gap <= 10.0 * fd_step(y[col]) {
            flagged[col] = true;
        }
    }
    Ok(flagged
        .iter()
        .enumerate()
        .filter_map(|(j, f)| f.then_some(j))
        .collect())
}

#[derive(Debug, Clone)]
pub struct NewtonResult {
    pub solution: CompoundVector,
    pub iterations: usize,
    pub residual_norm: f64,
}

/// Undamped Newton on `r(y) = 0` with finite-difference Jacobians and dense
/// LU solves. Stops when `|r| <= tol`.
pub fn newton_solve<P: Problem + ?Sized>(
    problem: &mut P,
    y0: &CompoundVector,
    tol: f64,
    max_iter: usize,
) -> Result<NewtonResult, OracleError> {
    let dims = y0.dims();
    let mut y = y0.clone();
    let mut r = assemble_residual(problem, &y)?;
    for iteration in 0..=max_iter {
        let norm = r.norm();
        if norm <= tol {
            return Ok(NewtonResult {
                solution: y,
                iterations: iteration,
                residual_norm: norm,
            });
        }
        if iteration == max_iter {
            return Err(OracleError::MaxIterations {
                max_iter,
                residual_norm: norm,
            });
        }
        let jac = fd_jacobian(problem, &y)?.matrix;
        let rhs = -r.as_vector();
        let dy = jac
            .lu()
            .solve(&rhs)
            .filter(|d| d.iter().all(|v| v.is_finite()))
            .ok_or(OracleError::SingularJacobian { iteration })?;
        y = CompoundVector::from_vector(dims, y.as_vector() + dy);
        r = assemble_residual(problem, &y)?;
    }
    unreachable!("loop returns on its last iteration")
}

/// Minimum-norm least squares via a full Jacobi SVD, discarding singular
/// values below `svd_cutoff * sigma_max`.
pub fn dense_lstsq(r_mat: &DMatrix<f64>, rhs: &DVector<f64>, svd_cutoff: f64) -> DVector<f64> {
    let p = r_mat.ncols();
    if p == 0 || r_mat.nrows() == 0 {
        return DVector::zeros(p);
    }
    let pinv = pseudo_inverse(r_mat, svd_cutoff);
    pinv * rhs
}

/// Truncated Moore-Penrose pseudo-inverse.
pub fn pseudo_inverse(a: &DMatrix<f64>, svd_cutoff: f64) -> DMatrix<f64> {
    let svd = jacobi_svd(a);
    let sigma_max = svd.sigma.iter().copied().fold(0.0, f64::max);
    let mut pinv = DMatrix::zeros(a.ncols(), a.nrows());
    if sigma_max == 0.0 {
        return pinv;
    }
    for k in 0..svd.sigma.len() {
        let s = svd.sigma[k];
        if s >= svd_cutoff * sigma_max {
            pinv += svd.v.column(k) * svd.u.column(k).transpose() / s;
        }
    }
    pinv
}

/// Solves `min 0.5 x^T H x + c^T x  s.t.  A x = b` directly, returning
/// `(x, lam_eq)` for the residual convention `g(x) = A x - b`.
pub fn dense_kkt_solve(
    hessian: &DMatrix<f64>,
    linear: &DVector<f64>,
    eq_jac: &DMatrix<f64>,
    eq_rhs: &DVector<f64>,
) -> Result<CompoundVector, OracleError> {
    let n = hessian.nrows();
    let m = eq_jac.nrows();
    let mut kkt = DMatrix::zeros(n + m, n + m);
    kkt.view_mut((0, 0), (n, n)).copy_from(hessian);
    kkt.view_mut((0, n), (n, m))
        .copy_from(&(-eq_jac.transpose()));
    kkt.view_mut((n, 0), (m, n)).copy_from(eq_jac);
    let mut rhs = DVector::zeros(n + m);
    rhs.rows_mut(0, n).copy_from(&(-linear));
    rhs.rows_mut(n, m).copy_from(eq_rhs);
    let sol = kkt
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|v| v.is_finite()))
        .ok_or(OracleError::SingularKkt)?;
    Ok(CompoundVector::from_vector(BlockDims::new(n, m, 0), sol))
}

/// Closed-form generalized Broyden inverse
/// `G = G~ + (Y - G~ R)(R^T R)^{-1} R^T`. `None` if `R` is rank deficient.
pub fn broyden_inverse(
    g_tilde: &DMatrix<f64>,
    y_mat: &DMatrix<f64>,
    r_mat: &DMatrix<f64>,
) -> Option<DMatrix<f64>> {
    let gram = r_mat.tr_mul(r_mat);
    let gram_inv = gram.cholesky()?.inverse();
    Some(g_tilde + (y_mat - g_tilde * r_mat) * gram_inv * r_mat.transpose())
}

/// `r(y) = A y - b` on a single primal block.
#[derive(Debug, Clone)]
pub struct LinearResidual {
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
}

impl LinearResidual {
    pub fn new(matrix: DMatrix<f64>, rhs: DVector<f64>) -> Self {
        assert!(matrix.is_square() && matrix.nrows() == rhs.len());
        LinearResidual { matrix, rhs }
    }

    /// Dense direct solution `A^{-1} b`.
    pub fn solution(&self) -> Option<DVector<f64>> {
        self.matrix.clone().lu().solve(&self.rhs)
    }
}

impl ResidualSystem for LinearResidual {
    fn dims(&self) -> BlockDims {
        BlockDims::new(self.rhs.len(), 0, 0)
    }

    fn residual(&mut self, y: &CompoundVector) -> Result<CompoundVector, EvalError> {
        Ok(CompoundVector::from_vector(
            self.dims(),
            &self.matrix * y.as_vector() - &self.rhs,
        ))
    }
}
