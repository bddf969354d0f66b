use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use crate::vector::CompoundVector;

/// Regularized residual differences with 2-norm below this fraction of the
/// largest column are dropped together with their iterate difference.
pub const DEGENERATE_PAIR_TOL: f64 = 1e-14;

/// The most recent `q + 1` raw iterates and residuals, oldest first.
#[derive(Debug, Clone)]
pub struct SolveHistory {
    capacity: usize,
    iterates: VecDeque<CompoundVector>,
    residuals: VecDeque<CompoundVector>,
}

impl SolveHistory {
    /// History able to produce `q` secant pairs.
    pub fn new(q: usize) -> Self {
        SolveHistory {
            capacity: q + 1,
            iterates: VecDeque::with_capacity(q + 1),
            residuals: VecDeque::with_capacity(q + 1),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.iterates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterates.is_empty()
    }

    /// Appends a pair, evicting the oldest when full.
    pub fn push(&mut self, y: CompoundVector, r: CompoundVector) {
        assert_eq!(
            y.dims(),
            r.dims(),
            "iterate and residual block sizes differ"
        );
        if self.iterates.len() == self.capacity {
            self.iterates.pop_front();
            self.residuals.pop_front();
        }
        self.iterates.push_back(y);
        self.residuals.push_back(r);
    }

    pub fn iterates(&self) -> impl Iterator<Item = &CompoundVector> {
        self.iterates.iter()
    }

    pub fn residuals(&self) -> impl Iterator<Item = &CompoundVector> {
        self.residuals.iter()
    }

    pub fn latest(&self) -> Option<(&CompoundVector, &CompoundVector)> {
        self.iterates.back().zip(self.residuals.back())
    }
}

/// `Y` (iterate differences) and `R` (regularized residual differences),
/// columns ordered oldest to newest.
#[derive(Debug, Clone, PartialEq)]
pub struct SecantMatrices {
    pub iterate_diffs: DMatrix<f64>,
    pub residual_diffs: DMatrix<f64>,
}

impl SecantMatrices {
    pub fn empty(len: usize) -> Self {
        SecantMatrices {
            iterate_diffs: DMatrix::zeros(len, 0),
            residual_diffs: DMatrix::zeros(len, 0),
        }
    }

    /// Number of secant pairs `p`.
    pub fn rank(&self) -> usize {
        self.iterate_diffs.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.rank() == 0
    }
}

/// Builds `Y` and `R` from consecutive history entries, adding
/// `beta * (dx, 0, 0)` to every residual difference.
pub fn build_secant_matrices(history: &SolveHistory, beta: f64) -> SecantMatrices {
    let len = match history.latest() {
        Some((y, _)) => y.len(),
        None => return SecantMatrices::empty(0),
    };
    if history.len() < 2 {
        return SecantMatrices::empty(len);
    }
    let n = history.iterates.back().map(|y| y.dims().n).unwrap_or(0);

    let mut dys: Vec<DVector<f64>> = Vec::with_capacity(history.len() - 1);
    let mut drs: Vec<DVector<f64>> = Vec::with_capacity(history.len() - 1);
    for j in 1..history.len() {
        let dy = history.iterates[j].as_vector() - history.iterates[j - 1].as_vector();
        let mut dr = history.residuals[j].as_vector() - history.residuals[j - 1].as_vector();
        if beta != 0.0 {
            dr.rows_mut(0, n).axpy(beta, &dy.rows(0, n), 1.0);
        }
        dys.push(dy);
        drs.push(dr);
    }

    let norms: Vec<f64> = drs.iter().map(|c| c.norm()).collect();
    let max_norm = norms.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..drs.len())
        .filter(|&j| max_norm > 0.0 && norms[j] >= DEGENERATE_PAIR_TOL * max_norm)
        .collect();

    let mut iterate_diffs = DMatrix::zeros(len, keep.len());
    let mut residual_diffs = DMatrix::zeros(len, keep.len());
    for (col, &j) in keep.iter().enumerate() {
        iterate_diffs.set_column(col, &dys[j]);
        residual_diffs.set_column(col, &drs[j]);
    }
    SecantMatrices {
        iterate_diffs,
        residual_diffs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::BlockDims;

    fn cv(x: &[f64], le: &[f64], li: &[f64]) -> CompoundVector {
        CompoundVector::from_blocks(x, le, li)
    }

    #[test]
    fn eviction_keeps_most_recent() {
        let mut h = SolveHistory::new(1);
        for k in 0..3 {
            let v = k as f64;
            h.push(cv(&[v], &[], &[]), cv(&[10.0 * v], &[], &[]));
        }
        assert_eq!(h.len(), 2);
        let ys: Vec<f64> = h.iterates().map(|y| y[0]).collect();
        assert_eq!(ys, vec![1.0, 2.0]);
        let s = build_secant_matrices(&h, 0.0);
        assert_eq!(s.rank(), 1);
        assert_eq!(s.iterate_diffs[(0, 0)], 1.0);
        assert_eq!(s.residual_diffs[(0, 0)], 10.0);
    }

    #[test]
    fn beta_shifts_primal_rows_only() {
        // raw dr = (a, b, c) = (1, 2, 3), dx = d = 4
        let mut h = SolveHistory::new(3);
        h.push(cv(&[0.0], &[0.0], &[0.0]), cv(&[0.0], &[0.0], &[0.0]));
        h.push(cv(&[4.0], &[7.0], &[9.0]), cv(&[1.0], &[2.0], &[3.0]));
        let s = build_secant_matrices(&h, 0.5);
        assert_eq!(s.residual_diffs.column(0).as_slice(), &[3.0, 2.0, 3.0]);
        assert_eq!(s.iterate_diffs.column(0).as_slice(), &[4.0, 7.0, 9.0]);

        let s = build_secant_matrices(&h, 0.0);
        assert_eq!(s.residual_diffs.column(0).as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn short_history_gives_empty() {
        let mut h = SolveHistory::new(4);
        assert!(build_secant_matrices(&h, 0.5).is_empty());
        h.push(cv(&[1.0, 2.0], &[], &[]), cv(&[0.0, 1.0], &[], &[]));
        let s = build_secant_matrices(&h, 0.5);
        assert_eq!(s.rank(), 0);
        assert_eq!(s.iterate_diffs.nrows(), 2);
    }

    #[test]
    fn repeated_iterates_are_dropped() {
        let mut h = SolveHistory::new(3);
        h.push(cv(&[0.0], &[], &[]), cv(&[1.0], &[], &[]));
        h.push(cv(&[1.0], &[], &[]), cv(&[2.0], &[], &[]));
        h.push(cv(&[1.0], &[], &[]), cv(&[2.0], &[], &[]));
        let s = build_secant_matrices(&h, 0.5);
        assert_eq!(s.rank(), 1);
        assert_eq!(s.iterate_diffs[(0, 0)], 1.0);
    }

    #[test]
    fn q_zero_never_has_pairs() {
        let mut h = SolveHistory::new(0);
        let dims = BlockDims::new(1, 0, 0);
        h.push(CompoundVector::zeros(dims), CompoundVector::zeros(dims));
        h.push(cv(&[1.0], &[], &[]), cv(&[1.0], &[], &[]));
        assert_eq!(h.len(), 1);
        assert!(build_secant_matrices(&h, 0.5).is_empty());
    }
}
