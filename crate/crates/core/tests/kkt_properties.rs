mod common;

use mad_core::kkt::{assemble_residual, complementarity_residual, convergence_metrics, Problem};
use mad_core::problems::{make_problem, Rosenbrock, REGISTRY};
use mad_core::CompoundVector;
use nalgebra::DVector;
use proptest::prelude::*;

#[test]
fn complementarity_zero_iff_complementary_on_grid() {
    // multiples of 0.25 on [-2, 2] are exactly representable
    let grid: Vec<f64> = (-8..=8).map(|i| i as f64 * 0.25).collect();
    for &h in &grid {
        for &lam in &grid {
            let zero = complementarity_residual(h, lam) == 0.0;
            let complementary = h >= 0.0 && lam >= 0.0 && h * lam == 0.0;
            assert_eq!(zero, complementary, "h = {h}, lam = {lam}");
        }
    }
}

proptest! {
    #[test]
    fn complementarity_is_negative_min(h in -1e3f64..1e3, lam in -1e3f64..1e3) {
        let got = complementarity_residual(h, lam);
        let want = -h.min(lam);
        prop_assert!((got - want).abs() <= 1e-13 * (1.0 + h.abs() + lam.abs()));
    }

    #[test]
    fn metrics_split_the_residual_norm(v in proptest::collection::vec(-10.0f64..10.0, 6)) {
        let r = CompoundVector::from_blocks(&v[..3], &v[3..4], &v[4..]);
        let m = convergence_metrics(&r);
        let total = r.norm();
        prop_assert!((m.optimality.powi(2) + m.feasibility.powi(2) - total * total).abs()
            <= 1e-12 * (1.0 + total * total));
        prop_assert!(m.optimality >= 0.0 && m.feasibility >= 0.0);
    }

    #[test]
    fn blocks_round_trip(
        (n, me, v) in (0usize..4, 0usize..3, 0usize..3).prop_flat_map(|(n, me, mi)| {
            (Just(n), Just(me), proptest::collection::vec(-1e6f64..1e6, n + me + mi))
        })
    ) {
        let y = CompoundVector::from_blocks(&v[..n], &v[n..n + me], &v[n + me..]);
        let parts: Vec<f64> = y
            .x()
            .iter()
            .chain(y.lam_eq().iter())
            .chain(y.lam_ineq().iter())
            .copied()
            .collect();
        prop_assert_eq!(parts, v);
    }
}

#[test]
fn residual_vanishes_at_known_solutions() {
    for name in REGISTRY {
        let (mut p, spec) = make_problem(name).unwrap();
        let Some(sol) = spec.known_solution.as_ref() else {
            continue;
        };
        let y0 = CompoundVector::from_primal(spec.dims, &spec.default_x0);
        let scale = assemble_residual(&mut p, &y0).unwrap().norm();
        let r = assemble_residual(&mut p, sol).unwrap();
        assert!(
            r.norm() <= 1e-12 * (1.0 + scale),
            "{name}: |r(y*)| = {:e}",
            r.norm()
        );
    }
}

#[test]
fn qp_residual_examples() {
    let (mut p, _) = make_problem("eq_qp").unwrap();
    let y = CompoundVector::from_blocks(&[0.5, 0.5], &[0.5], &[]);
    let r = assemble_residual(&mut p, &y).unwrap();
    assert_eq!(r.as_vector(), &DVector::zeros(3));
    let g = mad_core::kkt::lagrangian_gradient(&mut p, &y).unwrap();
    assert_eq!(g, DVector::zeros(2));

    // zero multipliers leave the objective gradient
    let y = CompoundVector::from_blocks(&[0.3, -0.7], &[0.0], &[]);
    let g = mad_core::kkt::lagrangian_gradient(&mut p, &y).unwrap();
    assert_eq!(g, p.objective_gradient(&y.primal()).unwrap());

    let (mut p, _) = make_problem("ineq_inactive").unwrap();
    let r = assemble_residual(&mut p, &CompoundVector::from_blocks(&[0.0], &[], &[0.0])).unwrap();
    assert_eq!(r.as_vector().as_slice(), &[-2.0, 1.0]);
}

fn builtin_problems() -> Vec<(String, Box<dyn Problem + Send>)> {
    let mut out: Vec<(String, Box<dyn Problem + Send>)> = REGISTRY
        .iter()
        .map(|n| (n.to_string(), make_problem(n).unwrap().0))
        .collect();
    out.push(("rosenbrock_disk".into(), Box::new(Rosenbrock::on_disk())));
    out
}

#[test]
fn jacobian_transpose_products_are_linear() {
    let mut rng = common::rng(11);
    for (name, mut p) in builtin_problems() {
        let dims = p.dims();
        for _ in 0..20 {
            let x = common::random_vector(&mut rng, dims.n) * 2.0;
            let a = 3.7;
            if dims.m_eq > 0 {
                let v = common::random_vector(&mut rng, dims.m_eq);
                let w = common::random_vector(&mut rng, dims.m_eq);
                let lhs = p.eq_jac_t_vec(&x, &(&v * a + &w)).unwrap();
                let rhs = p.eq_jac_t_vec(&x, &v).unwrap() * a + p.eq_jac_t_vec(&x, &w).unwrap();
                assert!((&lhs - &rhs).norm() <= 1e-12 * (1.0 + rhs.norm()), "{name}");
            }
            if dims.m_ineq > 0 {
                let v = common::random_vector(&mut rng, dims.m_ineq);
                let w = common::random_vector(&mut rng, dims.m_ineq);
                let lhs = p.ineq_jac_t_vec(&x, &(&v * a + &w)).unwrap();
                let rhs = p.ineq_jac_t_vec(&x, &v).unwrap() * a + p.ineq_jac_t_vec(&x, &w).unwrap();
                assert!((&lhs - &rhs).norm() <= 1e-12 * (1.0 + rhs.norm()), "{name}");
            }
        }
    }
}

#[test]
fn gradients_match_central_differences() {
    let mut rng = common::rng(12);
    for (name, mut p) in builtin_problems() {
        let n = p.num_vars();
        for _ in 0..20 {
            let x = common::random_vector(&mut rng, n) * 2.0;
            let grad = p.objective_gradient(&x).unwrap();
            let fd = DVector::from_fn(n, |i, _| {
                let h = 1e-6 * (1.0 + x[i].abs());
                let mut xp = x.clone();
                xp[i] += h;
                let mut xm = x.clone();
                xm[i] -= h;
                (p.objective(&xp).unwrap() - p.objective(&xm).unwrap()) / (2.0 * h)
            });
            let rel = (&grad - &fd).norm() / grad.norm().max(1.0);
            assert!(rel <= 1e-6, "{name}: relative gradient error {rel:e}");
        }
    }
}
