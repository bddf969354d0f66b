use nalgebra::DVector;

use super::history::SecantMatrices;
use crate::precond::Preconditioner;

/// Multisecant step `-alpha P^{-1} r_k - (Y - alpha P^{-1} R) gamma`.
///
/// Evaluated as `-Y gamma - alpha P^{-1} (r_k - R gamma)`, which needs one
/// preconditioner application and agrees with the expanded form for linear
/// `P^{-1}`. With no secant pairs this is exactly `-alpha P^{-1} r_k`.
pub fn compute_step<P: Preconditioner + ?Sized>(
    r_k: &DVector<f64>,
    secants: &SecantMatrices,
    gamma: &DVector<f64>,
    precond: &mut P,
    alpha: f64,
    iteration: usize,
) -> DVector<f64> {
    assert_eq!(
        secants.rank(),
        gamma.len(),
        "gamma length differs from secant count"
    );
    if secants.is_empty() {
        return precond.apply(iteration, r_k) * -alpha;
    }
    let projected = r_k - &secants.residual_diffs * gamma;
    let mut dy = precond.apply(iteration, &projected) * -alpha;
    dy.gemv(-1.0, &secants.iterate_diffs, gamma, 1.0);
    dy
}

/// Scales `dy` back to length `delta_max` when it is longer. Returns whether
/// clipping happened.
pub fn clip_step(dy: &mut DVector<f64>, delta_max: f64) -> bool {
    let norm = dy.norm();
    if norm > delta_max {
        *dy *= delta_max / norm;
        true
    } else {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precond::IdentityPreconditioner;
    use nalgebra::DMatrix;

    #[test]
    fn no_pairs_is_scaled_descent() {
        let r = DVector::from_column_slice(&[1.0, 0.0]);
        let dy = compute_step(
            &r,
            &SecantMatrices::empty(2),
            &DVector::zeros(0),
            &mut IdentityPreconditioner,
            0.1,
            0,
        );
        assert_eq!(dy.as_slice(), &[-0.1, 0.0]);
    }

    #[test]
    fn consistent_secants_leave_descent_unchanged() {
        let alpha = 0.25;
        let r_mat = DMatrix::from_column_slice(3, 2, &[1.0, 2.0, 0.0, 0.0, 1.0, 3.0]);
        let secants = SecantMatrices {
            iterate_diffs: &r_mat * alpha,
            residual_diffs: r_mat,
        };
        let r = DVector::from_column_slice(&[0.5, -1.0, 2.0]);
        for gamma in [[0.0, 0.0], [1.0, -2.0], [30.0, 7.5]] {
            let dy = compute_step(
                &r,
                &secants,
                &DVector::from_column_slice(&gamma),
                &mut IdentityPreconditioner,
                alpha,
                3,
            );
            assert!((dy + &r * alpha).norm() < 1e-13);
        }
    }

    #[test]
    fn clip_examples() {
        let mut dy = DVector::from_column_slice(&[0.0, 4.0]);
        assert!(clip_step(&mut dy, 1.0));
        assert_eq!(dy.as_slice(), &[0.0, 1.0]);

        let mut dy = DVector::from_column_slice(&[0.3, 0.4]);
        assert!(!clip_step(&mut dy, 1.0));
        assert_eq!(dy.as_slice(), &[0.3, 0.4]);

        let mut dy = DVector::zeros(3);
        assert!(!clip_step(&mut dy, 1.0));
        assert_eq!(dy, DVector::zeros(3));
    }
}
