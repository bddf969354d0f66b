//! Preconditioners `P^{-1}` for the base inverse-Jacobian estimate
//! `alpha * P^{-1}` of the multisecant update.
//!
//! The engine applies the preconditioner once per iteration and relies on
//! linearity, so user operators should be linear in `v`. They may change from
//! one iteration to the next.

use nalgebra::{DMatrix, DVector};

use crate::error::PrecondError;

pub trait Preconditioner {
    /// Action of `P^{-1}` on `v` at outer iteration `iteration`.
    fn apply(&mut self, iteration: usize, v: &DVector<f64>) -> DVector<f64>;
}

impl<T: Preconditioner + ?Sized> Preconditioner for Box<T> {
    fn apply(&mut self, iteration: usize, v: &DVector<f64>) -> DVector<f64> {
        (**self).apply(iteration, v)
    }
}

impl<T: Preconditioner + ?Sized> Preconditioner for &mut T {
    fn apply(&mut self, iteration: usize, v: &DVector<f64>) -> DVector<f64> {
        (**self).apply(iteration, v)
    }
}

/// `P = I`; with it the update is Anderson mixing with step `alpha`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityPreconditioner;

impl Preconditioner for IdentityPreconditioner {
    fn apply(&mut self, _iteration: usize, v: &DVector<f64>) -> DVector<f64> {
        v.clone()
    }
}

/// `P = diag(d)`, so `apply(v) = v ./ d`.
#[derive(Debug, Clone)]
pub struct DiagonalPreconditioner {
    diag: DVector<f64>,
}

impl DiagonalPreconditioner {
    pub fn new(diag: DVector<f64>) -> Result<Self, PrecondError> {
        if let Some(index) = diag.iter().position(|d| *d == 0.0) {
            return Err(PrecondError::ZeroDiagonal { index });
        }
        Ok(DiagonalPreconditioner { diag })
    }

    pub fn diagonal(&self) -> &DVector<f64> {
        &self.diag
    }
}

impl Preconditioner for DiagonalPreconditioner {
    fn apply(&mut self, _iteration: usize, v: &DVector<f64>) -> DVector<f64> {
        v.component_div(&self.diag)
    }
}

/// Explicit dense `P^{-1}`. Mostly a test device: the inverse of an exact
/// Jacobian gives the ideal preconditioner.
#[derive(Debug, Clone)]
pub struct DenseInversePreconditioner {
    inverse: DMatrix<f64>,
}

impl DenseInversePreconditioner {
    /// Uses `inverse` as `P^{-1}` directly.
    pub fn from_inverse(inverse: DMatrix<f64>) -> Self {
        assert!(inverse.is_square());
        DenseInversePreconditioner { inverse }
    }

    /// Inverts `p` (e.g. a Jacobian) by LU.
    pub fn from_matrix(p: DMatrix<f64>) -> Result<Self, PrecondError> {
        assert!(p.is_square());
        let inverse = p.lu().try_inverse().ok_or(PrecondError::Singular)?;
        if inverse.iter().any(|v| !v.is_finite()) {
            return Err(PrecondError::Singular);
        }
        Ok(DenseInversePreconditioner { inverse })
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }
}

impl Preconditioner for DenseInversePreconditioner {
    fn apply(&mut self, _iteration: usize, v: &DVector<f64>) -> DVector<f64> {
        &self.inverse * v
    }
}

/// User-supplied operator; receives the iteration index so nonstationary
/// preconditioners can be expressed.
pub struct FnPreconditioner<F>(pub F);

impl<F> Preconditioner for FnPreconditioner<F>
where
    F: FnMut(usize, &DVector<f64>) -> DVector<f64>,
{
    fn apply(&mut self, iteration: usize, v: &DVector<f64>) -> DVector<f64> {
        (self.0)(iteration, v)
    }
}
