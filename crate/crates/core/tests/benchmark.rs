mod common;

use std::sync::Arc;

use shearflow::bench::norms::dual_modular_diagnostic;
use shearflow::bench::{
    error_norms, error_norms_exact, exponents, run_cell, run_study, Case, ManufacturedCase, StudyConfig,
};
use shearflow::fem::{scott_zhang, DiscreteFunction, Element, ElementPair, QuadratureRule, Role};
use shearflow::mesh::TriMesh;
use shearflow::solver::{DiscreteState, NewtonConfig, ProblemData};
use shearflow::Error;

use common::*;

#[test]
fn shifted_pressure_has_exact_error() {
    let sp = space(2, ElementPair::TaylorHood);
    let v = scott_zhang(&sp, 2, &|x| [x[1], x[0]]).unwrap();
    let q: Vec<f64> = sp.mesh().vertices().iter().map(|x| x[0] - 0.5 + 0.5).collect();
    let state = DiscreteState {
        velocity: v,
        pressure: DiscreteFunction::new(sp.clone(), Role::Pressure, q).unwrap(),
        multiplier: 0.0,
    };
    for p in [1.5, 2.0, 3.0] {
        let e = error_norms_exact(&state, &patch_stress(), &PatchFields, &exponents(p).unwrap(), 12).unwrap();
        assert!((e.e_q_p - 0.5).abs() < 1e-13, "p = {p}: {}", e.e_q_p);
        assert!(e.e_v < 1e-13);
    }
}

#[test]
fn velocity_error_at_p_two_is_the_l2_error_of_the_strain() {
    let case = ManufacturedCase::new(Case::One, 2.0).unwrap();
    let sp = space(2, ElementPair::Mini);
    let data = ProblemData::from_exact(case.stress, sp.clone(), Arc::new(case), 8).unwrap();
    let state = DiscreteState::lifted(&data);
    let e = error_norms(&state, &case, &exponents(2.0).unwrap(), 12).unwrap();
    // Independent route: ‖Dv_h − Dv‖₂ with Dv_h from the interior-zero state.
    let mesh = sp.mesh();
    let rule = QuadratureRule::new(12).unwrap();
    let mut total = 0.0;
    for t in 0..mesh.n_triangles() {
        let el = Element::new(mesh, t);
        for (l, &w) in rule.points.iter().zip(&rule.weights) {
            let (_, g) = state.velocity.eval_velocity(t, l).unwrap();
            let ge = case.grad_v(el.map(l)).unwrap();
            let d = [g[0][0] - ge[0][0], 0.5 * (g[0][1] + g[1][0] - ge[0][1] - ge[1][0]), g[1][1] - ge[1][1]];
            total += w * el.area * (d[0] * d[0] + 2.0 * d[1] * d[1] + d[2] * d[2]);
        }
    }
    assert!((e.e_v - total.sqrt()).abs() <= 1e-12 * e.e_v);
}

#[test]
fn dual_modular_examples() {
    let mesh = TriMesh::unit_square(3);
    let case = ManufacturedCase::new(Case::One, 2.0).unwrap();
    assert_eq!(dual_modular_diagnostic(&case, &mesh, 0.0, 12).unwrap(), 0.0);

    // p = 2: the conjugate is t²/2, so the modular is h² ‖∇q‖²/2.
    let h = 0.25;
    let rule = QuadratureRule::new(12).unwrap();
    let mut grad2 = 0.0;
    for t in 0..mesh.n_triangles() {
        let el = Element::new(&mesh, t);
        for (l, &w) in rule.points.iter().zip(&rule.weights) {
            let g = case.grad_q(el.map(l)).unwrap();
            grad2 += w * el.area * (g[0] * g[0] + g[1] * g[1]);
        }
    }
    let got = dual_modular_diagnostic(&case, &mesh, h, 12).unwrap();
    assert!((got - 0.5 * h * h * grad2).abs() <= 1e-12 * got);

    for p in [4.0 / 3.0, 2.5] {
        let case = ManufacturedCase::new(Case::One, p).unwrap();
        let vals: Vec<f64> =
            (0..5).map(|i| dual_modular_diagnostic(&case, &mesh, 0.5f64.powi(i), 12).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]), "{vals:?}");
    }
}

#[test]
fn cases_coincide_at_p_two() {
    let one = run_cell(&StudyConfig::new(ElementPair::Mini, Case::One, vec![2.0], 2), 2.0).unwrap();
    let two = run_cell(&StudyConfig::new(ElementPair::Mini, Case::Two, vec![2.0], 2), 2.0).unwrap();
    assert_eq!(one.rows, two.rows);
}

#[test]
fn studies_are_reproducible_across_thread_counts() {
    let mut cfg = StudyConfig::new(ElementPair::TaylorHood, Case::One, vec![1.5, 2.5, 3.0], 2);
    let serial = run_study(&cfg).unwrap();
    assert_eq!(serial, run_study(&cfg).unwrap());
    cfg.threads = 3;
    assert_eq!(serial, run_study(&cfg).unwrap());
    assert_eq!(serial.iter().map(|t| t.p).collect::<Vec<_>>(), vec![1.5, 2.5, 3.0]);
}

#[test]
fn study_configuration_is_validated() {
    let bad = [
        StudyConfig::new(ElementPair::Mini, Case::One, vec![2.0], 0),
        StudyConfig::new(ElementPair::Mini, Case::One, vec![], 2),
        StudyConfig::new(ElementPair::Mini, Case::One, vec![1.0], 2),
        StudyConfig { threads: 0, ..StudyConfig::new(ElementPair::Mini, Case::One, vec![2.0], 2) },
    ];
    for cfg in bad {
        assert!(matches!(run_study(&cfg), Err(Error::Config(_))), "{cfg:?}");
    }
}

#[test]
fn failures_carry_the_offending_level() {
    let mut cfg = StudyConfig::new(ElementPair::Mini, Case::One, vec![3.0], 2);
    cfg.newton = NewtonConfig { max_iter: 1, line_search: false, ..NewtonConfig::default() };
    cfg.p_continuation = false;
    match run_study(&cfg) {
        Err(e @ Error::AtLevel { .. }) => {
            let Error::AtLevel { p, level, .. } = &e else { unreachable!() };
            assert_eq!((*p, *level), (3.0, 0));
            assert!(matches!(e.root(), Error::NonConvergence { .. }));
        }
        other => panic!("expected a located failure, got {other:?}"),
    }
}

#[test]
fn errors_decrease_and_stability_quantity_settles() {
    let table = run_cell(&StudyConfig::new(ElementPair::TaylorHood, Case::Two, vec![2.5], 4), 2.5).unwrap();
    assert!(table.rows.windows(2).all(|w| w[1].e_v < w[0].e_v && w[1].e_q_s < w[0].e_q_s));
    let a: Vec<f64> = table.rows.iter().map(|r| r.apriori).collect();
    for w in a[1..].windows(2) {
        assert!(w[1] / w[0] <= 1.05, "{a:?}");
    }
}
