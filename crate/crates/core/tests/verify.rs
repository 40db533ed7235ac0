use nlmkdv::fixtures;
use nlmkdv::verify::{decay_fit, evolution_cross_check, pde_residual, FnField, PeriodicGrid, ResidualGrid, Scheme};
use proptest::prelude::*;

proptest! {
    #[test]
    fn constants_have_zero_residual(q in -3.0f64..3.0, sigma in prop::sample::select(vec![-1, 1]), h in 1e-4f64..1e-2) {
        let grid = ResidualGrid::new((-5.0, 5.0), (-1.0, 1.0), 7, 5);
        let rep = pde_residual(&FnField(move |_, _| q), sigma, grid, h, h).unwrap();
        prop_assert_eq!(rep.max_residual, 0.0);
    }

    #[test]
    fn power_laws_are_fitted_exactly(p in -3.0f64..1.0, a in 0.01f64..100.0, lo in 0.0f64..2.0) {
        let ts: Vec<f64> = (0..5).map(|k| 10f64.powf(lo + 0.6 * k as f64)).collect();
        let fit = decay_fit(&ts.iter().map(|&t| (t, a * t.powf(p))).collect::<Vec<_>>()).unwrap();
        prop_assert!((fit.slope - p).abs() < 1e-10);
        prop_assert!((fit.intercept - a.ln()).abs() < 1e-8);
        prop_assert_eq!(fit.n, 5);
    }
}

#[test]
fn fit_needs_two_decades() {
    assert!(decay_fit(&[(10.0, 1.0), (20.0, 0.5), (50.0, 0.2)]).is_err());
    assert!(decay_fit(&[(10.0, 1.0), (1e3, 0.0), (1e4, 0.1)]).is_err());
}

#[test]
fn travelling_solution_is_not_stationary() {
    let data = fixtures::residual_solution(1).unwrap();
    let grid = ResidualGrid::new((-4.0, 4.0), (-0.5, 0.5), 6, 6);
    let exact = pde_residual(&data, -1, grid, 1e-3, 1e-3).unwrap().max_residual;
    let frozen = pde_residual(
        &FnField(|x, _| nlmkdv::soliton::q_sol(&data, x, 0.0).unwrap()),
        -1,
        grid,
        1e-3,
        1e-3,
    )
    .unwrap();
    assert!(frozen.max_residual > 1e3 * exact);
}

#[test]
fn casimir_drift_per_unit_time() {
    let data = fixtures::evolution_solution().unwrap();
    let grid = PeriodicGrid {
        half_width: 150.0,
        n: 4096,
    };
    for scheme in [Scheme::Strang, Scheme::Yoshida4] {
        let ev = evolution_cross_check(&data, -0.5, 1.0, grid, 1e-3, scheme).unwrap();
        assert!(ev.casimir_drift < 1e-8, "{scheme:?}: {}", ev.casimir_drift);
        assert!(ev.edge_mismatch < 1e-8);
    }
}
