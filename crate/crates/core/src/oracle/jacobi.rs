//! One-sided (Hestenes) Jacobi SVD. Slow but simple and accurate, and shares
//! no code with the bidiagonalization SVD used by the engine.

use nalgebra::{DMatrix, DVector};

const MAX_SWEEPS: usize = 100;

/// `A = U diag(sigma) V^T` with `U` (m x k), `V` (p x k), `k = min(m, p)`.
/// Columns of `U` belonging to zero singular values are zero.
pub struct JacobiSvd {
    pub u: DMatrix<f64>,
    pub sigma: DVector<f64>,
    pub v: DMatrix<f64>,
}

pub fn jacobi_svd(a: &DMatrix<f64>) -> JacobiSvd {
    if a.nrows() < a.ncols() {
        let t = tall_svd(&a.transpose());
        return JacobiSvd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    tall_svd(a)
}

fn tall_svd(a: &DMatrix<f64>) -> JacobiSvd {
    let p = a.ncols();
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(p, p);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..p {
            for j in (i + 1)..p {
                let alpha = w.column(i).norm_squared();
                let beta = w.column(j).norm_squared();
                let gamma = w.column(i).dot(&w.column(j));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, i, j, c, s);
                rotate(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma = DVector::from_iterator(p, (0..p).map(|k| w.column(k).norm()));
    let mut u = w;
    for k in 0..p {
        if sigma[k] > 0.0 {
            let s = sigma[k];
            u.column_mut(k).scale_mut(1.0 / s);
        }
    }
    JacobiSvd { u, sigma, v }
}

fn rotate(m: &mut DMatrix<f64>, i: usize, j: usize, c: f64, s: f64) {
    for row in 0..m.nrows() {
        let a = m[(row, i)];
        let b = m[(row, j)];
        m[(row, i)] = c * a - s * b;
        m[(row, j)] = s * a + c * b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs() {
        let a = DMatrix::from_row_slice(
            4,
            3,
            &[
                1.0, 2.0, 0.5, //
                -1.0, 0.0, 3.0, //
                2.0, 2.0, 2.0, //
                0.0, 1.0, -1.0,
            ],
        );
        for m in [a.clone(), a.transpose()] {
            let svd = jacobi_svd(&m);
            let rebuilt = &svd.u * DMatrix::from_diagonal(&svd.sigma) * svd.v.transpose();
            assert!((rebuilt - &m).norm() < 1e-13);
        }
    }

    #[test]
    fn duplicated_column_has_zero_singular_value() {
        let a = DMatrix::from_column_slice(3, 2, &[1.0, 2.0, 3.0, 1.0, 2.0, 3.0]);
        let svd = jacobi_svd(&a);
        let min = svd.sigma.min();
        assert!(min < 1e-14);
        assert!((svd.sigma.max() - (28f64).sqrt()).abs() < 1e-13);
    }
}
