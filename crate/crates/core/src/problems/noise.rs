use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::EvalError;
use crate::kkt::Problem;

/// Bounded uniform perturbation of every evaluator output:
/// `out = clean + delta * (1 + |clean|) * u` with `u ~ U[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub magnitude: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn new(magnitude: f64, seed: u64) -> Self {
        assert!(magnitude >= 0.0, "noise magnitude must be nonnegative");
        NoiseModel { magnitude, seed }
    }
}

/// Wraps a problem and perturbs its outputs with a seeded stream. Every call
/// draws fresh noise, so repeated evaluations at one point differ; the same
/// sequence of calls replays the same realizations.
#[derive(Debug, Clone)]
pub struct NoisyProblem<P> {
    inner: P,
    magnitude: f64,
    rng: ChaCha8Rng,
}

pub fn noisy_wrap<P: Problem>(problem: P, noise: NoiseModel) -> NoisyProblem<P> {
    NoisyProblem {
        inner: problem,
        magnitude: noise.magnitude,
        rng: ChaCha8Rng::seed_from_u64(noise.seed),
    }
}

impl<P> NoisyProblem<P> {
    pub fn inner(&self) -> &P {
        &self.inner
    }

    pub fn into_inner(self) -> P {
        self.inner
    }

    fn perturb(&mut self, clean: f64) -> f64 {
        clean + self.magnitude * (1.0 + clean.abs()) * self.rng.random_range(-1.0..=1.0)
    }

    fn perturb_vec(&mut self, mut v: DVector<f64>) -> DVector<f64> {
        if self.magnitude == 0.0 {
            return v;
        }
        for c in v.iter_mut() {
            *c = self.perturb(*c);
        }
        v
    }
}

impl<P: Problem> Problem for NoisyProblem<P> {
    fn num_vars(&self) -> usize {
        self.inner.num_vars()
    }

    fn num_eq(&self) -> usize {
        self.inner.num_eq()
    }

    fn num_ineq(&self) -> usize {
        self.inner.num_ineq()
    }

    fn objective(&mut self, x: &DVector<f64>) -> Result<f64, EvalError> {
        let f = self.inner.objective(x)?;
        if self.magnitude == 0.0 {
            return Ok(f);
        }
        Ok(self.perturb(f))
    }

    fn objective_gradient(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        let g = self.inner.objective_gradient(x)?;
        Ok(self.perturb_vec(g))
    }

    fn eq_constraints(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        let g = self.inner.eq_constraints(x)?;
        Ok(self.perturb_vec(g))
    }

    fn ineq_constraints(&mut self, x: &DVector<f64>) -> Result<DVector<f64>, EvalError> {
        let h = self.inner.ineq_constraints(x)?;
        Ok(self.perturb_vec(h))
    }

    fn eq_jac_t_vec(
        &mut self,
        x: &DVector<f64>,
        v: &DVector<f64>,
    ) -> Result<DVector<f64>, EvalError> {
        let out = self.inner.eq_jac_t_vec(x, v)?;
        Ok(self.perturb_vec(out))
    }

    fn ineq_jac_t_vec(
        &mut self,
        x: &DVector<f64>,
        w: &DVector<f64>,
    ) -> Result<DVector<f64>, EvalError> {
        let out = self.inner.ineq_jac_t_vec(x, w)?;
        Ok(self.perturb_vec(out))
    }
}
