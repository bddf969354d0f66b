use crate::error::ParamError;

/// Tunables of the multisecant iteration. Construct through
/// [`SolverParams::builder`], which validates every range.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverParams {
    alpha: f64,
    beta: f64,
    q: usize,
    delta_max: f64,
    k_max: usize,
    eps_r: f64,
    eps_a: f64,
    svd_cutoff: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            alpha: 0.1,
            beta: 0.5,
            q: 10,
            delta_max: 1.0,
            k_max: 2000,
            eps_r: 1e-4,
            eps_a: 1e-6,
            svd_cutoff: 1e-6,
        }
    }
}

impl SolverParams {
    pub fn builder() -> SolverParamsBuilder {
        SolverParamsBuilder {
            params: SolverParams::default(),
        }
    }

    /// Scaling of the preconditioner in `alpha * P^{-1}`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Hessian shift emulated on the primal rows of the residual differences.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Number of secant pairs kept.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn delta_max(&self) -> f64 {
        self.delta_max
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn eps_r(&self) -> f64 {
        self.eps_r
    }

    pub fn eps_a(&self) -> f64 {
        self.eps_a
    }

    /// Singular values below `svd_cutoff * sigma_max` are discarded.
    pub fn svd_cutoff(&self) -> f64 {
        self.svd_cutoff
    }

    /// Copy of these parameters opened for modification.
    pub fn to_builder(&self) -> SolverParamsBuilder {
        SolverParamsBuilder {
            params: self.clone(),
        }
    }

    fn validate(&self) -> Result<(), ParamError> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(ParamError::Alpha(self.alpha));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(ParamError::Beta(self.beta));
        }
        // infinity is accepted and disables clipping
        if self.delta_max.is_nan() || self.delta_max <= 0.0 {
            return Err(ParamError::DeltaMax(self.delta_max));
        }
        if !(self.eps_r > 0.0 && self.eps_r < 1.0) {
            return Err(ParamError::EpsRel(self.eps_r));
        }
        if !(self.eps_a > 0.0 && self.eps_a.is_finite()) {
            return Err(ParamError::EpsAbs(self.eps_a));
        }
        if !(self.svd_cutoff > 0.0 && self.svd_cutoff < 1.0) {
            return Err(ParamError::SvdCutoff(self.svd_cutoff));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolverParamsBuilder {
    params: SolverParams,
}

impl SolverParamsBuilder {
    pub fn alpha(mut self, alpha: f64) -> Self {
        self.params.alpha = alpha;
        self
    }

    pub fn beta(mut self, beta: f64) -> Self {
        self.params.beta = beta;
        self
    }

    pub fn q(mut self, q: usize) -> Self {
        self.params.q = q;
        self
    }

    pub fn delta_max(mut self, delta_max: f64) -> Self {
        self.params.delta_max = delta_max;
        self
    }

    pub fn k_max(mut self, k_max: usize) -> Self {
        self.params.k_max = k_max;
        self
    }

    pub fn eps_r(mut self, eps_r: f64) -> Self {
        self.params.eps_r = eps_r;
        self
    }

    pub fn eps_a(mut self, eps_a: f64) -> Self {
        self.params.eps_a = eps_a;
        self
    }

    pub fn svd_cutoff(mut self, svd_cutoff: f64) -> Self {
        self.params.svd_cutoff = svd_cutoff;
        self
    }

    pub fn build(self) -> Result<SolverParams, ParamError> {
        self.params.validate()?;
        Ok(self.params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = SolverParams::builder().build().unwrap();
        assert_eq!(p, SolverParams::default());
        assert_eq!(p.eps_r(), 1e-4);
        assert_eq!(p.eps_a(), 1e-6);
        assert_eq!(p.delta_max(), 1.0);
        assert_eq!(p.k_max(), 2000);
        assert_eq!(p.svd_cutoff(), 1e-6);
    }

    #[test]
    fn ranges_are_checked() {
        let b = SolverParams::builder;
        assert_eq!(b().alpha(0.0).build(), Err(ParamError::Alpha(0.0)));
        assert_eq!(b().beta(-1.0).build(), Err(ParamError::Beta(-1.0)));
        assert_eq!(b().delta_max(0.0).build(), Err(ParamError::DeltaMax(0.0)));
        assert_eq!(b().eps_r(1.0).build(), Err(ParamError::EpsRel(1.0)));
        assert_eq!(b().eps_a(0.0).build(), Err(ParamError::EpsAbs(0.0)));
        assert_eq!(b().svd_cutoff(0.0).build(), Err(ParamError::SvdCutoff(0.0)));
        assert!(b().alpha(f64::NAN).build().is_err());
        assert!(b().beta(0.0).q(0).k_max(0).build().is_ok());
        assert!(b().delta_max(f64::INFINITY).build().is_ok());
    }
}
