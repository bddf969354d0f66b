use faer::Mat;
use nalgebra::{DMatrix, DVector};

/// Minimum-norm solution of `min |r_k - R gamma|` by truncated SVD.
///
/// Singular values strictly below `svd_cutoff * sigma_max` are treated as
/// zero. An empty `R` or an all-zero `R` yields `gamma = 0`.
pub fn solve_gamma(r_mat: &DMatrix<f64>, r_k: &DVector<f64>, svd_cutoff: f64) -> DVector<f64> {
    let p = r_mat.ncols();
    assert_eq!(r_mat.nrows(), r_k.len(), "R and r_k row counts differ");
    if p == 0 || r_mat.nrows() == 0 {
        return DVector::zeros(p);
    }
    let a = Mat::<f64>::from_fn(r_mat.nrows(), p, |i, j| r_mat[(i, j)]);
    let Ok(svd) = a.thin_svd() else {
        return DVector::zeros(p);
    };
    let (u, v) = (svd.U(), svd.V());
    let sigma = svd.S().column_vector();
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    if !sigma_max.is_finite() || sigma_max <= 0.0 {
        return DVector::zeros(p);
    }
    let threshold = svd_cutoff * sigma_max;

    let mut gamma = DVector::zeros(p);
    for k in 0..sigma.nrows() {
        let s = sigma[k];
        if s < threshold {
            continue;
        }
        let coeff = (0..r_k.len()).map(|i| u[(i, k)] * r_k[i]).sum::<f64>() / s;
        for j in 0..p {
            gamma[j] += coeff * v[(j, k)];
        }
    }
    gamma
}
