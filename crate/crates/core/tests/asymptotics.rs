use nlmkdv::asymptotics::pc::saddle_coefficients;
use nlmkdv::asymptotics::{local_model, local_model_residue, AsymptoticConfig, AsymptoticSolver, BETA_READING};
use nlmkdv::fixtures::{self, pt_boundary, quartets, spectral_solution};
use nlmkdv::mat2::{Mat2, C64, I};
use nlmkdv::phase::{matched_ray, stationary_points};
use nlmkdv::scattering::ScatteringData;
use nlmkdv::soliton::q_sol;
use proptest::prelude::*;

fn radiation() -> AsymptoticSolver {
    AsymptoticSolver::new(fixtures::radiation_fixture().unwrap())
}

#[test]
fn reflectionless_data_has_no_radiation() {
    let sol = spectral_solution().unwrap();
    let solver = AsymptoticSolver::new(ScatteringData::reflectionless(&sol));
    for xi in [-3.0, -0.4, 1.7, 4.0] {
        for t in [20.0, 60.0] {
            let r = solver.evaluate(xi * t, t).unwrap();
            assert_eq!(r.f, C64::new(0.0, 0.0));
            assert_eq!(r.q_asym, r.q_sol_term);
            assert_eq!(r.q_asym_imag, 0.0);
            let exact = q_sol(&sol, xi * t, t).unwrap();
            assert!((r.q_asym - exact).abs() < 1e-8, "xi = {xi}, t = {t}: {} vs {exact}", r.q_asym);
        }
    }
}

#[test]
fn matched_ray_tracks_the_soliton() {
    let sol = quartets(&[(1.3, 0.8, 1.0), (1.5, 1.2, -1.0)], pt_boundary()).unwrap();
    let solver = AsymptoticSolver::new(ScatteringData::reflectionless(&sol));
    for k in [0, 4] {
        let xi = matched_ray(sol.poles[k].eta).unwrap();
        for t in [20.0, 40.0, 80.0] {
            let r = solver.evaluate(xi * t, t).unwrap();
            assert_eq!(r.active.len(), 4);
            let exact = q_sol(&sol, xi * t, t).unwrap();
            assert!((r.q_asym - exact).abs() < 1e-8, "t = {t}: {} vs {exact}", r.q_asym);
        }
    }
}

#[test]
fn empty_lambda_closed_form() {
    let solver = radiation();
    let qm = solver.scattering_data().boundary.q_minus;
    for xi in [-4.0, -1.0, 2.5] {
        let t = 300.0;
        let r = solver.evaluate(xi * t, t).unwrap();
        assert!(r.active.is_empty());
        let pc = solver.pc_coefficients(xi * t, t).unwrap();
        // background outer model: m = I + (i q₋/z) σ₁
        let f: C64 = pc
            .saddles
            .iter()
            .map(|s| {
                let off = I * qm / s.zeta;
                (s.beta12 + off * off * s.beta21) / (2.0 * s.sqrt_ddtheta)
            })
            .sum();
        assert!((f - r.f).norm() < 1e-12 * f.norm().max(1.0));
        assert!((r.q_sol_term - qm).abs() < 1e-14);
    }
}

#[test]
fn local_model_laurent_coefficient() {
    let solver = radiation();
    let pc = solver.pc_coefficients(-130.0, 100.0).unwrap();
    let res = local_model_residue(&pc);
    let dir = C64::from_polar(1.0, 0.3);
    let a = |r: f64| (local_model(&pc, r * dir) - Mat2::IDENTITY).scale(r * dir);
    // Richardson removes the 1/z term; the O(z⁻²) remainder is ~1e-5 relative
    let est = (a(1e3).scale(C64::new(10.0, 0.0)) - a(1e2)).scale(C64::new(1.0 / 9.0, 0.0));
    assert!((est - res).max_abs() < 2e-5 * res.max_abs());
    assert!((a(1e3) - res).max_abs() < 1e-2 * res.max_abs());
    assert!((a(1e3) - res).max_abs() < 0.2 * (a(1e2) - res).max_abs());
}

#[test]
fn branch_flip_is_compensated() {
    let scat = fixtures::radiation_fixture().unwrap();
    let base = AsymptoticSolver::new(scat.clone());
    for signs in [[-1.0, 1.0, 1.0, 1.0], [1.0, -1.0, -1.0, 1.0], [-1.0; 4]] {
        let cfg = AsymptoticConfig {
            branch_signs: signs,
            ..AsymptoticConfig::default()
        };
        let flipped = AsymptoticSolver::with_config(scat.clone(), cfg);
        for (xi, t) in [(-2.0, 50.0), (0.8, 500.0), (3.5, 5000.0)] {
            let a = base.evaluate(xi * t, t).unwrap();
            let b = flipped.evaluate(xi * t, t).unwrap();
            assert!((a.q_asym_complex() - b.q_asym_complex()).norm() < 1e-12, "{signs:?}");
        }
    }
}

#[test]
fn quadrant_partners_share_beta_moduli() {
    // inputs symmetrized so that ρ_ζ, ρ̃_ζ agree in modulus at partners
    let (t, xi) = (250.0, -1.7);
    let set = stationary_points(xi).unwrap();
    let roots = set.sqrt_ddtheta();
    let (rho, rho_t, tr) = (C64::from_polar(0.3, 0.4), C64::from_polar(0.2, -0.4), C64::from_polar(0.97, 0.2));
    let nu = -(1.0 - rho * rho_t).re.ln() / (2.0 * std::f64::consts::PI);
    let arg = |i: usize| (4.0 * t * set.ddtheta_at[i]).arg();
    for (i, j) in [(0, 3), (1, 2), (0, 1)] {
        let w = (-nu * (arg(i) - arg(j))).exp();
        let a = saddle_coefficients(&set, i, rho, rho_t, tr, roots[i], t, BETA_READING).unwrap();
        let b = saddle_coefficients(&set, j, rho * w, rho_t / w, tr, roots[j], t, BETA_READING).unwrap();
        assert!((a.rho_z.norm() - b.rho_z.norm()).abs() < 1e-12);
        assert!((a.beta12.norm() - b.beta12.norm()).abs() < 1e-9, "{i} {j}");
        assert!((a.beta21.norm() - b.beta21.norm()).abs() < 1e-9);
    }
}

#[test]
fn partner_moduli_on_symmetric_data() {
    // |ρ|, |ρ̃|, |T| agree at partners; the moduli then differ only through
    // the argument of the complex θ″ in the logarithm
    let solver = radiation();
    for (xi, t) in [(-3.0, 100.0), (-0.5, 1000.0), (2.0, 40.0)] {
        let pc = solver.pc_coefficients(xi * t, t).unwrap();
        let set = stationary_points(xi).unwrap();
        let s = &pc.saddles;
        for (i, j) in [(0, 3), (1, 2)] {
            assert!((s[i].nu - s[j].nu).abs() < 1e-12);
            assert!((s[i].transmission.norm() - s[j].transmission.norm()).abs() < 1e-9);
            let d = (4.0 * t * set.ddtheta_at[i]).arg() - (4.0 * t * set.ddtheta_at[j]).arg();
            let w = (s[i].nu * d).exp();
            assert!((s[i].beta12.norm() / s[j].beta12.norm() - w).abs() < 1e-9, "xi = {xi}: {i} {j}");
            assert!((s[i].beta21.norm() / s[j].beta21.norm() - w).abs() < 1e-9);
        }
    }
}

#[test]
fn t_infinity_candidate_is_reported() {
    let r = radiation().evaluate(-50.0, 50.0).unwrap();
    assert_eq!(r.c, 1.0);
    assert!(r.t_infinity.norm() > 0.0 && r.t_first_moment.is_finite() && r.t_at_zero.is_finite());
    assert_eq!(r.error_order, "O(t^-1)");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn continuous_in_xi(xi in -5.0f64..5.0, t in 20.0f64..2000.0) {
        let solver = radiation();
        let etas = solver.scattering_data().etas();
        prop_assume!(etas.iter().all(|&e| matched_ray(e).map_or(true, |m| (m - xi).abs() > 0.05)));
        let a = solver.evaluate(xi * t, t).unwrap();
        let b = solver.evaluate((xi + 1e-12) * t, t).unwrap();
        prop_assert!((a.q_asym_complex() - b.q_asym_complex()).norm() < 1e-8);
    }

    #[test]
    fn below_t_min_is_rejected(xi in -5.0f64..5.0, t in 0.1f64..9.99) {
        let err = radiation().evaluate(xi * t, t).unwrap_err();
        prop_assert_eq!(err.exit_code(), 2);
    }
}
