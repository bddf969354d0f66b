//! Two-discipline coupled problem in individual-discipline-feasible form.
//!
//! A "flow" discipline maps design variables `b` and a displacement `u` to a
//! pressure `p(b, u) = A1 b + A2 u + c1`; a "structure" discipline maps `b`
//! and a load `p` to a displacement `u(b, p) = B1 b + B2 p + c2`. The IDF
//! statement optimizes over `(b, p_bar, u_bar)`:
//!
//! ```text
//! min  0.5 |p(b, u_bar) - p_t|^2
//! s.t. p(b, u_bar) - p_bar = 0
//!      u(b, p_bar) - u_bar = 0
//! ```
//!
//! Both disciplines are linear so the KKT point is available by a dense
//! solve, while the solver only sees the matrix-free interface.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::quadratic::QuadraticProblem;
use crate::error::EvalError;
use crate::kkt::Problem;

pub const DEFAULT_DESIGN_VARS: usize = 5;
pub const DEFAULT_DISCIPLINE_SIZE: usize = 8;
pub const DEFAULT_SEED: u64 = 2018;

#[derive(Debug, Clone)]
pub struct ToyIdfProblem {
    a1: DMatrix<f64>,
    a2: DMatrix<f64>,
    c1: DVector<f64>,
    b1: DMatrix<f64>,
    b2: DMatrix<f64>,
    c2: DVector<f64>,
    target: DVector<f64>,
}

impl Default for ToyIdfProblem {
    fn default() -> Self {
        Self::new(DEFAULT_DESIGN_VARS, DEFAULT_DISCIPLINE_SIZE, DEFAULT_SEED)
    }
}

impl ToyIdfProblem {
    /// `design_vars` smooth bump responses sampled on `size` nodes, with
    /// seeded weak couplings between the disciplines.
    pub fn new(design_vars: usize, size: usize, seed: u64) -> Self {
        assert!(design_vars >= 1 && size >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut uniform = |scale: f64| scale * rng.random_range(-1.0..=1.0);

        let node = |i: usize| i as f64 / (size.max(2) - 1) as f64;
        let center = |j: usize| {
            if design_vars == 1 {
                0.5
            } else {
                j as f64 / (design_vars - 1) as f64
            }
        };
        let width = 1.0 / design_vars as f64;
        let a1 = DMatrix::from_fn(size, design_vars, |i, j| {
            (-((node(i) - center(j)) / width).powi(2)).exp()
        });

        let coupling = 0.3 / (size as f64).sqrt();
        let a2 = DMatrix::from_fn(size, size, |_, _| uniform(coupling));
        let b2 = DMatrix::from_fn(size, size, |_, _| uniform(coupling));
        let b1 = DMatrix::from_fn(size, design_vars, |_, _| uniform(0.2));
        let c1 = DVector::from_fn(size, |_, _| uniform(0.5));
        let c2 = DVector::from_fn(size, |_, _| uniform(0.1));
        let target = DVector::from_fn(size, |i, _| {
            1.0 + 0.5 * (std::f64::consts::PI * node(i)).sin()
        });

        ToyIdfProblem {
            a1,
            a2,
            c1,
            b1,
            b2,
            c2,
            target,
        }
    }

    pub fn design_vars(&self) -> usize {
        self.a1.ncols()
    }

    pub fn discipline_size(&self) -> usize {
        self.a1.nrows()
    }

    /// Flow discipline output `p(b, u)`.
    pub fn pressure(&self, b: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        &self.a1 * b + &self.a2 * u + &self.c1
    }

    /// Structural discipline output `u(b, p)`.
    pub fn displacement(&self, b: &DVector<f64>, p: &DVector<f64>) -> DVector<f64> {
        &self.b1 * b + &self.b2 * p + &self.c2
    }

    fn split(&self, x: &DVector<f64>) -> (DVector<f64>, DVector<f64>, DVector<f64>) {
        let nb = self.design_vars();
        let s = self.discipline_size();
        (
            x.rows(0, nb).into_owned(),
            x.rows(nb, s).into_owned(),
            x.rows(nb + s, s).into_owned(),
        )
    }

    /// The same problem written as an explicit quadratic program.
    pub fn as_quadratic(&self) -> QuadraticProblem {
        let nb = self.design_vars();
        let s = self.discipline_size();
        let n = nb + 2 * s;
        let eye = DMatrix::<f64>::identity(s, s);

        // p(b, u_bar) = M x + c1
        let mut m = DMatrix::zeros(s, n);
        m.view_mut((0, 0), (s, nb)).copy_from(&self.a1);
        m.view_mut((0, nb + s), (s, s)).copy_from(&self.a2);
        let offset = &self.c1 - &self.target;

        let mut eq = DMatrix::zeros(2 * s, n);
        eq.view_mut((0, 0), (s, nb)).copy_from(&self.a1);
        eq.view_mut((0, nb), (s, s)).copy_from(&(-&eye));
        eq.view_mut((0, nb + s), (s, s)).copy_from(&self.a2);
        eq.view_mut((s, 0), (s, nb)).copy_from(&self.b1);
        eq.view_mut((s, nb), (s, s)).copy_from(&self.b2);
        eq.view_mut((s, nb + s), (s, s)).copy_from(&(-&eye));
        let mut rhs = DVector::zeros(2 * s);
        rhs.rows_mut(0, s).copy_from(&(-&self.c1));
        rhs.rows_mut(s, s).copy_from(&(-&self.c2));

        QuadraticProblem::unconstrained(
            m.tr_mul(&m),
            m.tr_mul(&offset),
            0.5 * offset.norm_squared(),
        )
        .with_equalities(eq, rhs)
    }
}

impl Problem for ToyIdfProblem {
    fn num_vars(&self) -> usize {
        self.design_vars() + 2 * self.discipline_size()
    }

    fn num_eq(&self) -> usize {
        2 * self.discipline_size()
    }

    fn objective(&mut self, x: &DVector<f64>) -> Result<f64, EvalError> {
        let (b, _, u_bar) = self.split(x);
        Ok(0.5 * (self.pressure(&b, &u_bar) - &self.target).norm_squared())
    }

    fn objective_gradient(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        let (b, _, u_bar) = self.split(x);
        let err = self.pressure(&b, &u_bar) - &self.target;
        let nb = self.design_vars();
        let s = self.discipline_size();
        let mut grad = DVector::zeros(self.num_vars());
        grad.rows_mut(0, nb).copy_from(&self.a1.tr_mul(&err));
        grad.rows_mut(nb + s, s).copy_from(&self.a2.tr_mul(&err));
        Ok(grad)
    }

    fn eq_constraints(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        let (b, p_bar, u_bar) = self.split(x);
        let s = self.discipline_size();
        let mut g = DVector::zeros(2 * s);
        g.rows_mut(0, s)
            .copy_from(&(self.pressure(&b, &u_bar) - &p_bar));
        g.rows_mut(s, s)
            .copy_from(&(self.displacement(&b, &p_bar) - &u_bar));
        Ok(g)
    }

    fn eq_jac_t_vec(
        &mut self,
        _x: &DVector<f64>,
        v: &DVector<f64>,
    ) -> Result<DVector<f64>, EvalError> {
        let nb = self.design_vars();
        let s = self.discipline_size();
        let v1 = v.rows(0, s).into_owned();
        let v2 = v.rows(s, s).into_owned();
        let mut out = DVector::zeros(self.num_vars());
        out.rows_mut(0, nb)
            .copy_from(&(self.a1.tr_mul(&v1) + self.b1.tr_mul(&v2)));
        out.rows_mut(nb, s).copy_from(&(self.b2.tr_mul(&v2) - &v1));
        out.rows_mut(nb + s, s)
            .copy_from(&(self.a2.tr_mul(&v1) - &v2));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_free_matches_quadratic_form() {
        let mut idf = ToyIdfProblem::default();
        let mut qp = idf.as_quadratic();
        let x = DVector::from_fn(idf.num_vars(), |i, _| (i as f64 * 0.37).sin());
        let v = DVector::from_fn(idf.num_eq(), |i, _| (i as f64 * 0.71).cos());
        let close = |a: DVector<f64>, b: DVector<f64>| (a - b).norm() < 1e-12;
        assert!((idf.objective(&x).unwrap() - qp.objective(&x).unwrap()).abs() < 1e-12);
        assert!(close(
            idf.objective_gradient(&x).unwrap(),
            qp.objective_gradient(&x).unwrap()
        ));
        assert!(close(
            idf.eq_constraints(&x).unwrap(),
            qp.eq_constraints(&x).unwrap()
        ));
        assert!(close(
            idf.eq_jac_t_vec(&x, &v).unwrap(),
            qp.eq_jac_t_vec(&x, &v).unwrap()
        ));
    }

    #[test]
    fn seeded_construction_is_reproducible() {
        let a = ToyIdfProblem::new(5, 8, 7);
        let b = ToyIdfProblem::new(5, 8, 7);
        assert_eq!(a.a2, b.a2);
        assert_eq!(a.c1, b.c1);
    }
}
