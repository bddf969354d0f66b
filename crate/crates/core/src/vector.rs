use std::fmt;

use nalgebra::{DVector, DVectorView};

/// Block sizes of a compound vector: primal variables, equality and
/// inequality multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockDims {
    pub n: usize,
    pub m_eq: usize,
    pub m_ineq: usize,
}

impl BlockDims {
    pub fn new(n: usize, m_eq: usize, m_ineq: usize) -> Self {
        BlockDims { n, m_eq, m_ineq }
    }

    /// Total length `N = n + m_eq + m_ineq`.
    pub fn total(&self) -> usize {
        self.n + self.m_eq + self.m_ineq
    }
}

impl fmt::Display for BlockDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(n={}, m_eq={}, m_ineq={})",
            self.n, self.m_eq, self.m_ineq
        )
    }
}

/// `y = (x, lam_eq, lam_ineq)` stored contiguously so it can take part in
/// dense linear algebra directly.
#[derive(Debug, Clone, PartialEq)]
pub struct CompoundVector {
    dims: BlockDims,
    data: DVector<f64>,
}

impl CompoundVector {
    pub fn zeros(dims: BlockDims) -> Self {
        CompoundVector {
            dims,
            data: DVector::zeros(dims.total()),
        }
    }

    /// Wraps a flat vector. Panics if the length does not match `dims`.
    pub fn from_vector(dims: BlockDims, data: DVector<f64>) -> Self {
        assert_eq!(
            data.len(),
            dims.total(),
            "compound vector length does not match {dims}"
        );
        CompoundVector { dims, data }
    }

    /// Concatenates the three blocks. Panics if a block has the wrong length.
    pub fn from_blocks(x: &[f64], lam_eq: &[f64], lam_ineq: &[f64]) -> Self {
        let dims = BlockDims::new(x.len(), lam_eq.len(), lam_ineq.len());
        let data = DVector::from_iterator(
            dims.total(),
            x.iter().chain(lam_eq).chain(lam_ineq).copied(),
        );
        CompoundVector { dims, data }
    }

    /// `(x0, 0, 0)`.
    pub fn from_primal(dims: BlockDims, x: &DVector<f64>) -> Self {
        assert_eq!(x.len(), dims.n);
        let mut y = Self::zeros(dims);
        y.data.rows_mut(0, dims.n).copy_from(x);
        y
    }

    pub fn dims(&self) -> BlockDims {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.data
    }

    pub fn as_vector_mut(&mut self) -> &mut DVector<f64> {
        &mut self.data
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.data
    }

    pub fn x(&self) -> DVectorView<'_, f64> {
        self.data.rows(0, self.dims.n)
    }

    pub fn lam_eq(&self) -> DVectorView<'_, f64> {
        self.data.rows(self.dims.n, self.dims.m_eq)
    }

    pub fn lam_ineq(&self) -> DVectorView<'_, f64> {
        self.data
            .rows(self.dims.n + self.dims.m_eq, self.dims.m_ineq)
    }

    /// Owned copy of the primal block.
    pub fn primal(&self) -> DVector<f64> {
        self.x().into_owned()
    }

    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl std::ops::Index<usize> for CompoundVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}
