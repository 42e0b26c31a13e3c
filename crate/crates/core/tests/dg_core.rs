mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use rkdg_core::dg::{
    apply_op, apply_pow, assemble_upwind, assemble_upwind_with_test_degree, compose_mixed,
    jump_forms, jump_inner, jump_seminorm, operator_norm, project_fn, reduce, DGCoeffs, DgSpace,
    LinearMap, NormMethod, NormOptions, ProjectionTarget, DENSE_CAP,
};
use rkdg_core::mesh::{build_mesh_1d, Mesh};
use rkdg_core::Error;

/// Continuous piecewise-linear interpolant of `sin(2 pi x)` on the mesh nodes.
fn continuous_1d(space: &std::sync::Arc<DgSpace>) -> DGCoeffs {
    let Mesh::OneD(m) = space.mesh() else { unreachable!() };
    let nodes = m.nodes().to_vec();
    let s2 = space.clone();
    project_fn(
        space,
        move |x, y| {
            let (c, xi, _) = s2.locate(x, y);
            let a = (2.0 * PI * nodes[c]).sin();
            let b = (2.0 * PI * nodes[c + 1]).sin();
            a + 0.5 * (xi + 1.0) * (b - a)
        },
        ProjectionTarget::Full,
    )
}

#[test]
fn constants_are_annihilated() {
    for space in [space_1d(7, 3), space_1d_perturbed(9, 2, 4), space_2d(5, 3)] {
        let l = assemble_upwind(&space);
        let one = project_fn(&space, |_, _| 1.0, ProjectionTarget::Full);
        assert!(apply_op(&l, &one).max_abs() < 1e-13);
    }
}

#[test]
fn piecewise_constant_is_first_order_upwind() {
    let space = space_1d(4, 0);
    let l = assemble_upwind(&space);
    let u = DGCoeffs::random(&space, 3);
    let lu = apply_op(&l, &u);
    let h: f64 = 0.25;
    // cell averages are coefficient / sqrt(h)
    let avg = |v: &DGCoeffs, i: usize| v.values()[i] / h.sqrt();
    for i in 0..4 {
        let expect = (avg(&u, (i + 3) % 4) - avg(&u, i)) / h;
        assert!((avg(&lu, i) - expect).abs() < 1e-12);
    }
}

#[test]
fn matches_quadrature_weak_form() {
    let spaces = [
        space_1d(6, 0),
        space_1d(6, 2),
        space_1d_perturbed(7, 3, 11),
        space_2d(3, 1),
        space_2d_aniso(3, 4, 2, 1.0, 0.5),
    ];
    for space in spaces {
        let dense = assemble_upwind(&space).to_dense(DENSE_CAP).unwrap();
        for seed in 0..3 {
            let w = DGCoeffs::random(&space, seed);
            let v = DGCoeffs::random(&space, 100 + seed);
            let lw = &dense * nalgebra::DVector::from_column_slice(w.values());
            let lhs: f64 = lw.iter().zip(v.values()).map(|(a, b)| a * b).sum();
            let rhs = weak_form(&w, &v);
            assert!((lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
        }
    }
}

#[test]
fn sparsity_is_self_and_upwind() {
    let space = space_2d(4, 1);
    let l = assemble_upwind(&space);
    let dense = l.to_dense(DENSE_CAP).unwrap();
    let Mesh::TwoD(m) = space.mesh() else { unreachable!() };
    let nm = space.n_modes();
    for c in 0..space.n_cells() {
        let (left, below) = m.upwind_neighbors(c);
        for d in 0..space.n_cells() {
            let nz = (0..nm)
                .flat_map(|r| (0..nm).map(move |s| (r, s)))
                .any(|(r, s)| dense[(c * nm + r, d * nm + s)] != 0.0);
            assert_eq!(nz, d == c || d == left || d == below, "cell {c} -> {d}");
        }
    }
}

#[test]
fn reduce_matches_test_space_assembly() {
    for space in [space_1d(6, 1), space_1d_perturbed(6, 3, 2), space_2d(3, 2)] {
        let l = assemble_upwind(&space);
        let a = reduce(&l, &space).unwrap().to_dense(DENSE_CAP).unwrap();
        let b = assemble_upwind_with_test_degree(&space, space.degree() - 1)
            .to_dense(DENSE_CAP)
            .unwrap();
        assert!((a - b).abs().max() <= 1e-13);
    }
}

#[test]
fn reduce_rejects_degree_zero() {
    let space = space_1d(4, 0);
    let l = assemble_upwind(&space);
    assert!(matches!(reduce(&l, &space), Err(Error::UnsupportedDegree(0, _))));
}

#[test]
fn top_modes_of_lw_vanish_for_continuous_w() {
    for k in 1..4 {
        for space in [space_1d(8, k), space_1d_perturbed(8, k, 5)] {
            let w = continuous_1d(&space);
            assert!(jump_seminorm(&w) < 1e-13);
            let lw = apply_op(&assemble_upwind(&space), &w);
            assert!(lw.project(ProjectionTarget::Perp).max_abs() < 1e-12 * lw.max_abs().max(1.0));
        }
    }
}

#[test]
fn reduced_norm_not_larger() {
    let space = space_1d(8, 2);
    let l = assemble_upwind(&space);
    let lt = reduce(&l, &space).unwrap();
    let opts = NormOptions::default();
    let a = operator_norm(&l, NormMethod::DenseSvd, 1, &opts).unwrap();
    let b = operator_norm(&lt, NormMethod::DenseSvd, 1, &opts).unwrap();
    assert!(b <= a * (1.0 + 1e-14));
}

#[test]
fn projection_reproduces_and_splits() {
    let space = space_2d(3, 2);
    let v = DGCoeffs::random(&space, 9);
    assert_eq!(v.project(ProjectionTarget::Full).values(), v.values());
    let mut sum = v.project(ProjectionTarget::KMinus1);
    sum.axpy(1.0, &v.project(ProjectionTarget::Perp));
    sum.axpy(-1.0, &v);
    assert!(sum.max_abs() < 1e-14);
}

#[test]
fn projection_error_order() {
    for k in 0..4 {
        let mut errs = Vec::new();
        for n in [16, 32, 64, 128] {
            let space = space_1d(n, k);
            let p = project_fn(&space, |x, _| (2.0 * PI * x).sin(), ProjectionTarget::Full);
            // error by high-order quadrature against the exact function
            let q = rkdg_core::gauss_quadrature(k + 8).unwrap();
            let mut e2 = 0.0;
            for c in 0..n {
                let (x0, h, _, _) = space.cell_box(c);
                for (xi, wt) in q.iter() {
                    let x = x0 + 0.5 * h * (xi + 1.0);
                    let d = p.eval(c, xi, 0.0) - (2.0 * PI * x).sin();
                    e2 += 0.5 * h * wt * d * d;
                }
            }
            errs.push(e2.sqrt());
        }
        for w in errs.windows(2) {
            let eoc = (w[0] / w[1]).log2();
            assert!((eoc - (k + 1) as f64).abs() < 0.05, "k={k} eoc={eoc}");
        }
    }
}

#[test]
fn jump_forms_vanish_for_continuous() {
    let space = space_1d(10, 2);
    let v = continuous_1d(&space);
    let f = jump_forms(&v, &v).unwrap();
    assert!(f.inner.abs() < 1e-13 && f.jump_v < 1e-13 && f.jump_w < 1e-13);
    // 2D: sum of periodic hat interpolants in x and y is continuous
    let s2 = space_2d(4, 1);
    let hat = |t: f64| {
        let u = t * 4.0;
        let i = (u.floor() as usize).min(3);
        let a = (2.0 * PI * i as f64 / 4.0).sin();
        let b = (2.0 * PI * (i + 1) as f64 / 4.0).sin();
        a + (u - i as f64) * (b - a)
    };
    let p = project_fn(&s2, move |x, y| hat(x) + 2.0 * hat(y), ProjectionTarget::Full);
    let g = jump_forms(&p, &p).unwrap();
    assert!(g.inner.abs() < 1e-13 && g.jump_v < 1e-13);
    assert!(g.trace_v > 0.0);
}

#[test]
fn jump_identity_matches_operator() {
    for space in [space_1d(9, 2), space_1d_perturbed(9, 1, 8), space_2d(4, 2), space_2d_aniso(3, 5, 1, 0.7, 1.3)] {
        let l = assemble_upwind(&space);
        for seed in 0..4 {
            let v = DGCoeffs::random(&space, seed);
            let lv = apply_op(&l, &v);
            let mut ltv = DGCoeffs::zeros(&space);
            l.apply_transpose(v.values(), ltv.values_mut());
            let rhs = -(lv.dot(&v) + ltv.dot(&v));
            let lhs = jump_inner(&v, &v).unwrap();
            assert!(rel_diff(lhs, rhs) <= 1e-11, "{lhs} vs {rhs}");
            assert!((jump_seminorm(&v).powi(2) - lhs).abs() <= 1e-12 * lhs);
        }
    }
}

#[test]
fn two_cell_jump_seminorm() {
    let space = space_1d(2, 0);
    // u = (0, 1) as cell values: coefficient = value * sqrt(h)
    let u = DGCoeffs::from_values(&space, vec![0.0, 0.5f64.sqrt()]).unwrap();
    assert!((jump_seminorm(&u).powi(2) - 2.0).abs() < 1e-14);
}

#[test]
fn jump_forms_reject_mismatch() {
    let a = DGCoeffs::random(&space_1d(4, 1), 0);
    let b = DGCoeffs::random(&space_1d(5, 1), 0);
    assert!(matches!(jump_forms(&a, &b), Err(Error::Incompatible(_))));
}

#[test]
fn compose_mixed_is_stepwise() {
    let space = space_2d(4, 2);
    let l = assemble_upwind(&space);
    let w = DGCoeffs::random(&space, 1);
    let direct = compose_mixed(&l, &[1, 1], &w).unwrap();
    let step = apply_op(&l, &apply_op(&l, &w).project(ProjectionTarget::Perp));
    let mut d = direct.clone();
    d.axpy(-1.0, &step);
    assert!(d.max_abs() <= 1e-13 * step.max_abs());

    let a = compose_mixed(&l, &[2, 3], &w).unwrap();
    let b = apply_pow(&l, 2, &apply_pow(&l, 3, &w).project(ProjectionTarget::Perp));
    let mut d = a.clone();
    d.axpy(-1.0, &b);
    assert!(d.max_abs() <= 1e-13 * b.max_abs());

    assert!(matches!(compose_mixed(&l, &[], &w), Err(Error::InvalidArgument(_))));
}

#[test]
fn compose_mixed_vanishes_on_continuous() {
    let space = space_1d(12, 2);
    let l = assemble_upwind(&space);
    let w = continuous_1d(&space);
    assert!(compose_mixed(&l, &[1, 1], &w).unwrap().max_abs() < 1e-11);
}

const SWEEP: [usize; 4] = [16, 32, 64, 128];

/// Largest ratio over a handful of seeded random inputs.
fn max_ratio(space: &std::sync::Arc<DgSpace>, f: impl Fn(&DGCoeffs) -> f64) -> f64 {
    (0..8)
        .map(|s| f(&DGCoeffs::random(space, 40 + s)))
        .fold(0.0, f64::max)
}

#[test]
fn top_mode_bounded_by_jumps() {
    for k in 1..4 {
        let ratios: Vec<f64> = SWEEP
            .iter()
            .map(|&n| {
                let space = space_1d(n, k);
                let l = assemble_upwind(&space);
                let h = 1.0 / n as f64;
                max_ratio(&space, |w| {
                    h.sqrt() * apply_op(&l, w).project(ProjectionTarget::Perp).norm()
                        / jump_seminorm(w)
                })
            })
            .collect();
        assert!(spread(&ratios) < 0.15, "k={k} {ratios:?}");
    }
}

#[test]
fn mixed_composition_bounded_by_jumps() {
    for idx in [vec![1usize, 1], vec![2, 1], vec![1, 2]] {
        let total: usize = idx.iter().sum();
        let last = *idx.last().unwrap();
        let ratios: Vec<f64> = SWEEP
            .iter()
            .map(|&n| {
                let space = space_1d(n, 2);
                let l = assemble_upwind(&space);
                let h = 1.0 / n as f64;
                max_ratio(&space, |w| {
                    let num = compose_mixed(&l, &idx, w).unwrap().norm();
                    let den = jump_seminorm(&apply_pow(&l, last - 1, w));
                    h.powf((total - last) as f64 + 0.5) * num / den
                })
            })
            .collect();
        assert!(spread(&ratios) < 0.15, "{idx:?} {ratios:?}");
    }
}

#[test]
fn p1_second_power_bounded_by_jumps() {
    let lambda = 0.1;
    let ratios: Vec<f64> = SWEEP
        .iter()
        .map(|&n| {
            let space = space_1d(n, 1);
            let l = assemble_upwind(&space);
            let tau = lambda / n as f64;
            max_ratio(&space, |w| {
                let lw = apply_op(&l, w);
                let l2w = apply_op(&l, &lw);
                tau.powi(4) * l2w.norm().powi(2)
                    / (tau * lambda.powi(3) * jump_seminorm(w).powi(2)
                        + tau.powi(3) * lambda * jump_seminorm(&lw).powi(2))
            })
        })
        .collect();
    assert!(spread(&ratios) < 0.20, "{ratios:?}");
}

#[test]
fn inverse_estimate_sweep() {
    for k in [1, 3] {
        let opts = NormOptions::default();
        let vals: Vec<f64> = [16, 32, 64, 128, 256]
            .iter()
            .map(|&n| {
                let l = assemble_upwind(&space_1d(n, k));
                operator_norm(&l, NormMethod::PowerIteration, 1, &opts).unwrap() / n as f64
            })
            .collect();
        for w in vals.windows(2) {
            assert!(rel_diff(w[0], w[1]) < 0.10, "{vals:?}");
        }
    }
}

#[test]
fn power_iteration_agrees_with_svd_on_operator() {
    let space = space_1d(8, 1);
    let l = assemble_upwind(&space);
    let opts = NormOptions::default();
    for m in 1..3 {
        let a = operator_norm(&l, NormMethod::DenseSvd, m, &opts).unwrap();
        let b = operator_norm(&l, NormMethod::PowerIteration, m, &opts).unwrap();
        assert!(rel_diff(a, b) < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn power_iteration_reports_non_convergence() {
    let l = assemble_upwind(&space_1d(64, 3));
    let opts = NormOptions {
        max_iter: 3,
        dense_fallback: false,
        ..NormOptions::default()
    };
    match operator_norm(&l, NormMethod::PowerIteration, 1, &opts) {
        Err(Error::PowerIteration { iterate, .. }) => assert_eq!(iterate.len(), l.dim()),
        other => panic!("expected non-convergence, got {other:?}"),
    }
}

#[test]
fn dense_export_is_capped() {
    let l = assemble_upwind(&space_1d(8, 1));
    assert!(matches!(l.to_dense(15), Err(Error::TooLarge { size: 16, cap: 15 })));
}

fn arb_space() -> impl Strategy<Value = std::sync::Arc<DgSpace>> {
    prop_oneof![
        (2usize..12, 0usize..5, 0u64..1000).prop_map(|(n, k, s)| {
            let m = build_mesh_1d(n, 0.3, s).unwrap();
            DgSpace::new(m, k).unwrap()
        }),
        (2usize..6, 2usize..6, 0usize..4).prop_map(|(nx, ny, k)| space_2d_aniso(nx, ny, k, 1.0, 0.6)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn negative_semidefinite(space in arb_space(), seed in any::<u64>()) {
        let l = assemble_upwind(&space);
        for s in 0..16 {
            let v = DGCoeffs::random(&space, seed.wrapping_add(s));
            let lv = apply_op(&l, &v);
            // <(L + L^T) v, v> = 2 <L v, v>
            prop_assert!(2.0 * lv.dot(&v) <= 1e-11 * v.dot(&v));
        }
    }

    #[test]
    fn strong_derivative_has_no_top_modes(space in arb_space(), seed in any::<u64>()) {
        let w = DGCoeffs::random(&space, seed);
        let (bx, by) = space.speeds();
        let wc = w.clone();
        let sp = space.clone();
        let d = project_fn(&space, move |x, y| {
            let (c, xi, eta) = sp.locate(x, y);
            let (gx, gy) = grad(&wc, c, xi, eta);
            bx * gx + by * gy
        }, ProjectionTarget::Perp);
        let scale = space.n_cells() as f64 * (space.degree() + 1) as f64;
        prop_assert!(d.max_abs() < 1e-12 * scale.powi(2));
    }

    #[test]
    fn discrete_integration_by_parts(space in arb_space(), seed in any::<u64>(), i in 1usize..5) {
        let l = assemble_upwind(&space);
        let w = DGCoeffs::random(&space, seed);
        let v = DGCoeffs::random(&space, seed ^ 0xabcdef);
        let mut total = apply_pow(&l, i, &w).dot(&v);
        let mut scale = total.abs();
        for j in 0..i {
            let t = jump_inner(&apply_pow(&l, i - j - 1, &w), &apply_pow(&l, j, &v)).unwrap();
            let sign = if (j + 1) % 2 == 0 { 1.0 } else { -1.0 };
            total -= sign * t;
            scale = scale.max(t.abs());
        }
        let last = w.dot(&apply_pow(&l, i, &v));
        total -= if i % 2 == 0 { last } else { -last };
        scale = scale.max(last.abs()).max(1.0);
        prop_assert!(total.abs() <= 1e-10 * scale, "residual {total} scale {scale}");
    }

    #[test]
    fn dense_matches_matrix_free(space in arb_space(), seed in any::<u64>()) {
        let l = assemble_upwind(&space);
        let dense = l.to_dense(DENSE_CAP).unwrap();
        let w = DGCoeffs::random(&space, seed);
        let a = apply_op(&l, &w);
        let b = &dense * nalgebra::DVector::from_column_slice(w.values());
        for (x, y) in a.values().iter().zip(b.iter()) {
            prop_assert!((x - y).abs() <= 1e-13 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn coefficient_norm_is_l2_norm(space in arb_space(), seed in any::<u64>()) {
        let w = DGCoeffs::random(&space, seed);
        let q = w.l2_norm_by_quadrature(space.degree() + 2);
        prop_assert!((q - w.norm()).abs() <= 1e-12 * w.norm().max(1.0));
    }
}
