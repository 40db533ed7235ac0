use std::f64::consts::PI;

use nlmkdv::fixtures::{self, perturbed_datum, perturbed_profile, pt_boundary, spectral_solution};
use nlmkdv::mat2::{c, C64};
use nlmkdv::phase::stationary_points;
use nlmkdv::scattering::data::nu;
use nlmkdv::scattering::spectrum::discrete_spectrum_with;
use nlmkdv::scattering::{
    jost_solutions, partial_transmission, reflection_coefficients, scattering_matrix, InitialDatum, ScatteringData, SearchConfig,
};
use nlmkdv::soliton::q_sol;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn determinants_on_contour(a in -PI..PI, r in 0.05f64..20.0, on_circle in prop::bool::ANY, neg in prop::bool::ANY) {
        let d = perturbed_datum(8.0).unwrap();
        let z = if on_circle { C64::from_polar(1.0, a) } else { c(if neg { -r } else { r }, 0.0) };
        prop_assume!((z * z + 1.0).norm() > 1e-3);
        let jp = jost_solutions(&d, z).unwrap();
        let target = 1.0 + (z * z).inv();
        prop_assert!((jp.minus.det() - target).norm() < 1e-8);
        prop_assert!((jp.plus.det() - target).norm() < 1e-8);
        let s = scattering_matrix(&d, z).unwrap();
        prop_assert!((s.det() - 1.0).norm() < 1e-8);
    }
}

#[test]
fn refinement_is_stable() {
    let coarse = perturbed_datum(8.0).unwrap();
    let fine = InitialDatum::from_fn(perturbed_profile, 8.0, 2 * (coarse.n() - 1) + 1, pt_boundary()).unwrap();
    let zs = [c(0.3, 0.0), c(-2.5, 0.0), C64::from_polar(1.0, 1.1), C64::from_polar(1.0, -2.8)];
    let a = reflection_coefficients(&coarse, &zs).unwrap();
    let b = reflection_coefficients(&fine, &zs).unwrap();
    for (p, q) in a.iter().zip(&b) {
        assert!((p.rho - q.rho).norm() < 1e-8, "{} vs {}", p.rho, q.rho);
        assert!((p.rho_tilde - q.rho_tilde).norm() < 1e-8);
    }
}

#[test]
fn recovers_the_spectrum_of_a_soliton_datum() {
    let sol = spectral_solution().unwrap();
    let datum = InitialDatum::from_fn(|x| q_sol(&sol, x, 0.0).unwrap(), 24.0, 19201, sol.boundary).unwrap();
    let cfg = SearchConfig {
        n_radial: 8,
        n_angular: 8,
        ..SearchConfig::default()
    };
    let rep = discrete_spectrum_with(&datum, &cfg).unwrap();
    assert_eq!(rep.winding_count, 4);
    assert_eq!(rep.zeros.len(), 4);
    for p in &sol.poles {
        let z = rep
            .zeros
            .iter()
            .min_by(|a, b| (a.eta - p.eta).norm().total_cmp(&(b.eta - p.eta).norm()))
            .unwrap();
        assert!((z.eta - p.eta).norm() < 1e-7, "{} vs {}", z.eta, p.eta);
        assert!((z.c_hat / p.c_hat - 1.0).norm() < 1e-5, "{} vs {}", z.c_hat, p.c_hat);
    }
}

#[test]
fn nu_respects_saddle_symmetry() {
    let scat = fixtures::radiation_fixture().unwrap();
    for xi in [-4.0, -1.3, 0.0, 2.2, 5.0] {
        let s = stationary_points(xi).unwrap();
        let v: Vec<f64> = s.zeta.iter().map(|&z| nu(&scat, z).unwrap()).collect();
        assert!((v[0] - v[3]).abs() < 1e-12);
        assert!((v[1] - v[2]).abs() < 1e-12);
        assert!(v.iter().all(|&x| x > 0.0));
    }
}

#[test]
fn transmission_tends_to_one() {
    let scat = fixtures::radiation_fixture().unwrap();
    let tr = partial_transmission(&scat, -1.3).unwrap();
    for a in [0.3, 1.9, -2.4] {
        let far = tr.evaluate(C64::from_polar(1e8, a)).unwrap();
        assert!((far - 1.0).norm() < 1e-6, "{far}");
    }
}

#[test]
fn scattering_data_json_roundtrip() {
    let scat = fixtures::radiation_fixture().unwrap();
    let back = ScatteringData::from_json(&scat.to_json()).unwrap();
    assert_eq!(back.to_json(), scat.to_json());
    let z = C64::from_polar(1.0, 0.77);
    assert_eq!(scat.rho_at(z).unwrap(), back.rho_at(z).unwrap());
}
