mod common;

use common::*;
use proptest::prelude::*;
use rkdg_core::dg::{l2_distance, project_fn, DgSpace, ProjectionTarget};
use rkdg_core::experiments::{
    accuracy_table, eoc, initial_state, l2_error, l2_error_with, regularity_study, run_case, sinpow,
    FlatMode, InitialCondition, MeshKind, Method, ProblemSpec, RowStatus, TimestepRule,
};
use rkdg_core::mesh::build_mesh_1d;
use rkdg_core::rk::Variant;
use rkdg_core::Error;

fn all_methods() -> Vec<Method> {
    let mut out = Vec::new();
    for v in [Variant::Standard, Variant::Sda] {
        for r in 2..=5 {
            out.push(Method::taylor(r, r - 1, v).unwrap());
        }
    }
    out
}

#[test]
fn labels() {
    assert_eq!(Method::taylor(3, 2, Variant::Standard).unwrap().label(), "RK3DG2");
    assert_eq!(Method::taylor(2, 1, Variant::Sda).unwrap().label(), "sdA-RK2DG1");
    assert_eq!(InitialCondition::SinPow1d(3).name(), "sinpow_1d(3)");
}

#[test]
fn timestep_rules() {
    let r = TimestepRule::Smooth;
    assert!((r.tau(2, 1, 20) - 0.005).abs() < 1e-16);
    assert!((r.tau(4, 2, 20) - 0.0025).abs() < 1e-16);
    assert!((r.tau(5, 1, 32) - 0.1 / 32f64.powf(1.2)).abs() < 1e-16);
    assert_eq!(TimestepRule::Fixed(0.3).tau(3, 1, 99), 0.3);
    assert!((TimestepRule::Cfl(0.2).tau(3, 2, 10) - 0.01).abs() < 1e-16);
}

#[test]
fn sinpow_branch() {
    // flat = 2: odd in s; flat = 3: even in s
    for s in [0.3, 0.9, 1.0] {
        assert!((sinpow(s, 2) - s.powf(5.0 / 3.0)).abs() < 1e-14);
        assert!((sinpow(-s, 2) + s.powf(5.0 / 3.0)).abs() < 1e-14);
        assert!((sinpow(-s, 3) - s.powf(8.0 / 3.0)).abs() < 1e-14);
    }
    assert!(ProblemSpec::sinpow_1d(1).is_err());
    assert!(ProblemSpec::sinpow_2d(2).is_ok());
    assert_eq!(ProblemSpec::sinpow_1d(4).unwrap().quadrature_points(2), 16);
    assert_eq!(ProblemSpec::sin_1d().quadrature_points(7), 11);
}

#[test]
fn quadrature_override() {
    let p = ProblemSpec::sinpow_1d(3).unwrap().with_quadrature(5);
    assert_eq!(p.quadrature_points(4), 5);
    assert!(ProblemSpec::sin_1d().with_quadrature(0).validate().is_err());
    // a coarse rule measures a visibly different error
    let space = space_1d(8, 2);
    let u = initial_state(&space, &ProblemSpec::sin_1d());
    let fine = l2_error(&u, &ProblemSpec::sin_1d(), 0.0);
    let coarse = l2_error(&u, &ProblemSpec::sin_1d().with_quadrature(3), 0.0);
    assert!(rel_diff(fine, coarse) > 1e-3, "{fine} vs {coarse}");
}

#[test]
fn exact_solution_is_a_translate() {
    let p = ProblemSpec::sin_2d().with_speeds(1.0, 0.5);
    let (x, y, t) = (0.3, 0.7, 0.4);
    assert!((p.exact(x, y, t) - p.initial_value(x - t, y - 0.5 * t)).abs() < 1e-15);
    let q = ProblemSpec::sinpow_1d(2).unwrap();
    assert!((q.exact(0.1, 0.0, 1.0) - q.initial_value(0.1, 0.0)).abs() < 1e-13);
}

#[test]
fn error_of_projection_is_projection_error() {
    let p = ProblemSpec::sin_1d();
    let errs: Vec<f64> = [32, 64]
        .iter()
        .map(|&n| {
            let space = space_1d(n, 1);
            l2_error(&initial_state(&space, &p), &p, 0.0)
        })
        .collect();
    let order = eoc(errs[0], errs[1], 32, 64);
    assert!((order - 2.0).abs() < 0.02, "{order}");
}

#[test]
fn polynomials_are_measured_exactly() {
    let space = space_1d_perturbed(9, 3, 4);
    let f = |x: f64, _: f64| 1.0 - 2.0 * x + x * x * x;
    let u = project_fn(&space, f, ProjectionTarget::Full);
    assert!(l2_distance(&u, f, 10) < 1e-13);
}

#[test]
fn quadrature_refinement_changes_little() {
    let m = Method::taylor(3, 2, Variant::Sda).unwrap();
    let p = ProblemSpec::sin_1d().with_final_time(0.25);
    let space = space_1d(40, 2);
    let disc = rkdg_core::rk::Discretization::new(&space);
    let u0 = initial_state(&space, &p);
    let ev = rkdg_core::rk::evolve(
        &m.scheme,
        &disc,
        &u0,
        p.t_final,
        0.1 / 40.0,
        rkdg_core::rk::StepForm::Butcher,
    )
    .unwrap();
    let a = l2_error_with(&ev.state, &p, p.t_final, 10);
    let b = l2_error_with(&ev.state, &p, p.t_final, 14);
    assert!(rel_diff(a, b) < 1e-3, "{a} vs {b}");
}

#[test]
fn table_rows_are_ordered_with_orders() {
    let methods = vec![
        Method::taylor(2, 1, Variant::Standard).unwrap(),
        Method::taylor(2, 1, Variant::Sda).unwrap(),
    ];
    let ns = [10, 20, 40];
    let rows = accuracy_table(
        &methods,
        &ProblemSpec::sin_1d().with_final_time(0.5),
        &ns,
        TimestepRule::Smooth,
        MeshKind::Uniform,
    )
    .unwrap();
    assert_eq!(rows.len(), 6);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.scheme, methods[i / 3].label());
        assert_eq!(row.n, ns[i % 3]);
        assert_eq!(row.dofs, 2 * row.n);
        assert!(row.status.is_ok());
        if i % 3 == 0 {
            assert!(row.eoc.is_none());
        } else {
            let e = row.eoc.unwrap();
            assert!((e - eoc(rows[i - 1].l2_error, row.l2_error, rows[i - 1].n, row.n)).abs() < 1e-14);
            assert!((e - 2.0).abs() < 0.25, "{e}");
        }
    }
}

#[test]
fn blow_up_is_a_flagged_row() {
    let m = Method::taylor(3, 2, Variant::Standard).unwrap();
    let rows = accuracy_table(
        &[m],
        &ProblemSpec::sin_1d(),
        &[16, 32],
        TimestepRule::Cfl(1.0),
        MeshKind::Uniform,
    )
    .unwrap();
    for row in &rows {
        assert!(matches!(row.status, RowStatus::BlowUp { .. }), "{row:?}");
        assert!(row.l2_error.is_nan());
        assert!(row.eoc.is_none());
    }
}

#[test]
fn zero_speed_keeps_the_initial_error() {
    let p = ProblemSpec::sin_1d().with_speeds(0.0, 0.0);
    for m in all_methods() {
        let space = DgSpace::new(build_mesh_1d(12, 0.0, 0).unwrap().with_speed(0.0).unwrap(), m.k).unwrap();
        let e0 = l2_error(&initial_state(&space, &p), &p, 0.0);
        let row = run_case(&m, &p, 12, TimestepRule::Smooth, MeshKind::Uniform).unwrap();
        assert!(rel_diff(row.l2_error, e0) < 1e-10, "{}: {} vs {e0}", m.label(), row.l2_error);
    }
}

#[test]
fn reduced_stage_error_stays_close() {
    let p = ProblemSpec::sin_1d();
    for r in 2..=4 {
        for n in [20, 40] {
            let a = run_case(&Method::taylor(r, r - 1, Variant::Standard).unwrap(), &p, n, TimestepRule::Smooth, MeshKind::Uniform)
                .unwrap();
            let b = run_case(&Method::taylor(r, r - 1, Variant::Sda).unwrap(), &p, n, TimestepRule::Smooth, MeshKind::Uniform)
                .unwrap();
            assert!(b.l2_error <= 1.6 * a.l2_error, "r={r} N={n}: {} vs {}", b.l2_error, a.l2_error);
        }
    }
}

#[test]
fn perturbed_meshes_are_seeded_and_1d_only() {
    let m = Method::taylor(2, 1, Variant::Sda).unwrap();
    let mesh = MeshKind::Perturbed { fraction: 0.15, seed: 9 };
    let p = ProblemSpec::sin_1d().with_final_time(0.1);
    let a = run_case(&m, &p, 16, TimestepRule::Smooth, mesh).unwrap();
    let b = run_case(&m, &p, 16, TimestepRule::Smooth, mesh).unwrap();
    assert_eq!(a.l2_error, b.l2_error);
    let c = run_case(&m, &p, 16, TimestepRule::Smooth, MeshKind::Perturbed { fraction: 0.15, seed: 10 }).unwrap();
    assert_ne!(a.l2_error, c.l2_error);
    assert!(matches!(
        run_case(&m, &ProblemSpec::sin_2d(), 4, TimestepRule::Smooth, mesh),
        Err(Error::UnsupportedMesh(_))
    ));
}

#[test]
fn regularity_needs_matching_orders() {
    let m = Method::taylor(3, 1, Variant::Standard).unwrap();
    assert!(regularity_study(&m, FlatMode::EqualR, 1, &[10], None).is_err());
    let m = Method::taylor(2, 1, Variant::Standard).unwrap();
    assert!(regularity_study(&m, FlatMode::EqualR, 3, &[10], None).is_err());
    let rows = regularity_study(&m, FlatMode::RPlusOne, 1, &[10, 20], Some(0.1)).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].eoc.is_some());
}

#[test]
fn empty_inputs_are_rejected() {
    let m = Method::taylor(2, 1, Variant::Standard).unwrap();
    let p = ProblemSpec::sin_1d();
    assert!(accuracy_table(&[], &p, &[10], TimestepRule::Smooth, MeshKind::Uniform).is_err());
    assert!(accuracy_table(&[m], &p, &[], TimestepRule::Smooth, MeshKind::Uniform).is_err());
}

proptest! {
    #[test]
    fn eoc_recovers_power_laws(p in 0.5f64..6.0, c in 1e-6f64..1.0, n in 4usize..200, f in 2usize..4) {
        let e1 = c * (n as f64).powf(-p);
        let e2 = c * ((n * f) as f64).powf(-p);
        prop_assert!((eoc(e1, e2, n, n * f) - p).abs() < 1e-10);
    }
}
