//! Every module invariant on the bundled fixtures, as one JSON report.

use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::asymptotics::model::{dual_path_ratios, error_term_e1, local_model, radiation_coefficient_f};
use crate::asymptotics::pc::saddle_coefficients;
use crate::asymptotics::{complex_gamma, AsymptoticConfig, AsymptoticSolver, BetaReading, PCCoefficients, SaddleCoefficients};
use crate::fixtures;
use crate::mat2::{c, Mat2, C64, I};
use crate::phase::{phase, refine_stationary_point, stationary_points, theta, zeta1_closed_form};
use crate::scattering::jost::jost_solutions;
use crate::scattering::matrix::{from_jost, reflection_from_s};
use crate::scattering::transmission::partial_transmission;
use crate::scattering::{background_eigenvector_matrix, Side};
use crate::soliton::solve_outer;
use crate::verify::residual::{pde_residual, ResidualGrid};
use crate::verify::splitstep::{splitstep_local_mkdv, PeriodicGrid};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub random_samples: usize,
    pub reading: BetaReading,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 20240917,
            random_samples: 1000,
            reading: crate::asymptotics::BETA_READING,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub name: String,
    pub passed: bool,
    /// Worst observed defect.
    pub value: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub entries: Vec<SuiteEntry>,
    pub all_passed: bool,
}

impl SuiteReport {
    pub fn entry(&self, name: &str) -> Option<&SuiteEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn entry(name: &str, value: f64, tolerance: f64) -> SuiteEntry {
    SuiteEntry {
        name: name.into(),
        passed: value.is_finite() && value <= tolerance,
        value,
        tolerance,
        detail: None,
    }
}

fn from_result(name: &str, tolerance: f64, r: Result<f64>) -> SuiteEntry {
    match r {
        Ok(v) => entry(name, v, tolerance),
        Err(e) => SuiteEntry {
            name: name.into(),
            passed: false,
            value: f64::INFINITY,
            tolerance,
            detail: Some(e.to_string()),
        },
    }
}

fn random_z(rng: &mut StdRng) -> C64 {
    C64::from_polar(rng.gen_range(0.2..5.0), rng.gen_range(-PI..PI))
}

fn saddle_closed_form() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let xi = -5.9 + 11.8 * (k as f64 + 0.5) / 50.0;
        let exact = zeta1_closed_form(xi);
        let z = refine_stationary_point(xi, exact * C64::from_polar(1.0, 0.05))?;
        worst = worst.max((z - exact).norm());
        let s2 = exact.arg().sin().powi(2);
        worst = worst.max((s2 - (xi + 6.0) / 12.0).abs());
    }
    Ok(worst)
}

fn phase_symmetries(rng: &mut StdRng, n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let z = random_z(rng);
        let (x, t) = (rng.gen_range(-5.0..5.0), rng.gen_range(-2.0..2.0));
        let th = theta(z, x, t);
        let scale = th.norm().max(1.0);
        worst = worst.max((theta(z.inv(), x, t) - th).norm() / scale);
        worst = worst.max((theta(-z.inv(), x, t) + th).norm() / scale);
        let s = C64::from_polar(1.0, rng.gen_range(-PI..PI));
        let r = if rng.gen_bool(0.5) {
            s
        } else {
            c(rng.gen_range(0.1..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }, 0.0)
        };
        let re = (2.0 * I * theta(r, x, t)).re;
        worst = worst.max(re.abs() / theta(r, x, t).norm().max(1.0));
    }
    worst
}

fn eigenvector_det(rng: &mut StdRng, n: usize) -> Result<f64> {
    let b = fixtures::pt_boundary();
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let z = random_z(rng);
        for side in [Side::Minus, Side::Plus] {
            let e = background_eigenvector_matrix(&b, z, side)?;
            worst = worst.max((e.det() - (1.0 + (z * z).inv())).norm());
        }
    }
    Ok(worst)
}

fn jost_identities() -> Result<(f64, f64)> {
    let d = fixtures::perturbed_datum(8.0)?;
    let d2 = fixtures::perturbed_datum(16.0)?;
    let zs = [c(1.7, 0.0), c(-0.6, 0.0), C64::from_polar(1.0, 0.4), C64::from_polar(1.0, 2.5)];
    let mut det: f64 = 0.0;
    let mut stab: f64 = 0.0;
    for z in zs {
        let jp = jost_solutions(&d, z)?;
        let target = 1.0 + (z * z).inv();
        det = det.max((jp.minus.det() - target).norm()).max((jp.plus.det() - target).norm());
        let s = from_jost(&jp)?;
        det = det.max((s.det() - 1.0).norm());
        let s2 = from_jost(&jost_solutions(&d2, z)?)?;
        let r1 = reflection_from_s(z, &s)?;
        let r2 = reflection_from_s(z, &s2)?;
        stab = stab.max((r1.rho - r2.rho).norm()).max((r1.rho_tilde - r2.rho_tilde).norm());
        stab = stab.max((s - s2).max_abs() / s.max_abs());
    }
    Ok((det, stab))
}

fn gamma_oracle() -> Result<f64> {
    let mut worst: f64 = (complex_gamma(c(0.5, 0.0))? - PI.sqrt()).norm();
    for nu in [0.1f64, 1.0, 2.0] {
        let g = complex_gamma(c(0.0, nu))?;
        worst = worst.max((g.norm_sqr() - PI / (nu * (PI * nu).sinh())).abs());
    }
    Ok(worst)
}

/// `(det, collinearity, singular part)` defects of the outer model.
pub fn outer_structure(rng: &mut StdRng, n: usize) -> Result<(f64, f64, f64)> {
    let data = fixtures::residual_solution(2)?;
    let b = data.boundary;
    let sigma = b.sigma as f64;
    let (mut det, mut col, mut sing): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for k in 0..n {
        let (x, t) = (rng.gen_range(-4.0..4.0), rng.gen_range(-1.0..1.0));
        let outer = solve_outer(&data, x, t)?;
        let z = random_z(rng);
        let m = outer.evaluate(z);
        det = det.max((m.det() - (1.0 + (z * z).inv())).norm() / m.max_abs().powi(2).max(1.0));
        if k % 10 == 0 {
            for (zp, f) in [(I, sigma), (-I, -sigma)] {
                let m = outer.evaluate(zp);
                let c1 = m.column(0);
                let c2 = m.column(1);
                let d = (c2[0] - f * c1[0]).norm().max((c2[1] - f * c1[1]).norm());
                col = col.max(d / m.max_abs().max(1.0));
            }
            let z0 = C64::from_polar(1e-9, rng.gen_range(-PI..PI));
            let part = outer.evaluate(z0).scale(z0) - b.sigma3_q_minus().scale(I);
            sing = sing.max(part.max_abs());
        }
    }
    Ok((det, col, sing))
}

fn zero_pc(t: f64, xi: f64) -> Result<PCCoefficients> {
    let s = stationary_points(xi)?;
    let r = s.sqrt_ddtheta();
    let mut out = [SaddleCoefficients::zero(c(0.0, 0.0), c(1.0, 0.0)); 4];
    for i in 0..4 {
        out[i] = SaddleCoefficients::zero(s.zeta[i], r[i]);
    }
    Ok(PCCoefficients { xi, t, saddles: out })
}

/// Random parabolic-cylinder inputs at a fixed ray: `ρ` anywhere in a disk,
/// `ρ̃ = κρ̄` with `κ > 0`, random `T(ζ)` and `t`.
pub fn random_pc(rng: &mut StdRng, xi: f64, reading: BetaReading) -> Result<PCCoefficients> {
    let s = stationary_points(xi)?;
    let r = s.sqrt_ddtheta();
    let t = rng.gen_range(10.0..1e4);
    let mut out = [SaddleCoefficients::zero(c(0.0, 0.0), c(1.0, 0.0)); 4];
    for i in 0..4 {
        let rho = C64::from_polar(rng.gen_range(0.05..0.5), rng.gen_range(-PI..PI));
        let rho_t = rng.gen_range(0.2..1.5) * rho.conj();
        let tz = C64::from_polar(rng.gen_range(0.8..1.2), rng.gen_range(-PI..PI));
        out[i] = saddle_coefficients(&s, i, rho, rho_t, tz, r[i], t, reading)?;
    }
    Ok(PCCoefficients { xi, t, saddles: out })
}

/// Spread of the per-saddle `f/E₁` ratios over random inputs, and the ratios.
pub fn dual_path_constancy(rng: &mut StdRng, trials: usize, reading: BetaReading) -> Result<(f64, [C64; 4])> {
    let data = fixtures::spectral_solution()?;
    let xi = -1.3;
    let outer = solve_outer(&data, xi * 20.0, 20.0)?;
    let mut first: Option<[C64; 4]> = None;
    let mut spread: f64 = 0.0;
    for _ in 0..trials {
        let pc = random_pc(rng, xi, reading)?;
        let r = dual_path_ratios(&outer, &pc).map(|o| o.unwrap_or(c(f64::NAN, 0.0)));
        match first {
            None => first = Some(r),
            Some(f) => {
                for i in 0..4 {
                    spread = spread.max((r[i] - f[i]).norm() / f[i].norm());
                }
            }
        }
    }
    Ok((spread, first.unwrap_or([c(f64::NAN, 0.0); 4])))
}

/// `||β₁₂β₂₁| − 2πe^{−πν}|Γ(iν)|⁻²|1 − ρρ̃|/|ρ|²|` relative, over random inputs.
pub fn beta_modulus(rng: &mut StdRng, trials: usize, reading: BetaReading) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let xi = rng.gen_range(-5.0..5.0);
        let pc = random_pc(rng, xi, reading)?;
        for s in &pc.saddles {
            let g = complex_gamma(c(0.0, s.nu))?;
            let expect = 2.0 * PI * (-PI * s.nu).exp() / g.norm_sqr() * (1.0 - s.rho_z * s.rho_tilde_z).norm() / s.rho_z.norm_sqr();
            worst = worst.max(((s.beta12 * s.beta21).norm() - expect).abs() / expect);
        }
    }
    Ok(worst)
}

fn local_model_trivial() -> Result<f64> {
    let pc = zero_pc(100.0, 0.7)?;
    let outer = solve_outer(&fixtures::spectral_solution()?, 70.0, 100.0)?;
    let a = (local_model(&pc, c(0.3, 0.4)) - Mat2::IDENTITY).max_abs();
    let b = error_term_e1(&outer, &pc).max_abs();
    let f = radiation_coefficient_f(&outer, &pc).norm();
    Ok(a.max(b).max(f))
}

fn e1_traceless(rng: &mut StdRng, trials: usize, reading: BetaReading) -> Result<f64> {
    let outer = solve_outer(&fixtures::spectral_solution()?, -13.0, 10.0)?;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let pc = random_pc(rng, -1.3, reading)?;
        let e = error_term_e1(&outer, &pc);
        worst = worst.max(e.trace().norm() / e.max_abs().max(1e-300));
    }
    Ok(worst)
}

fn assembly_wiring(reading: BetaReading) -> Result<f64> {
    let cfg = AsymptoticConfig {
        reading,
        ..AsymptoticConfig::default()
    };
    let solver = AsymptoticSolver::with_config(fixtures::radiation_fixture()?, cfg);
    let mut worst: f64 = 0.0;
    for xi in [-4.0, -1.0, 0.5, 2.0, 5.0] {
        for t in [1e2, 1e3, 1e4] {
            let r = solver.evaluate(xi * t, t)?;
            let d = (r.q_asym_complex() - r.c * r.q_sol_term).norm();
            worst = worst.max((d - r.f.norm() / t.sqrt()).abs() / (r.f.norm() / t.sqrt()));
        }
    }
    Ok(worst)
}

fn plemelj() -> Result<f64> {
    let scat = fixtures::radiation_fixture()?;
    let tr = partial_transmission(&scat, 1.5)?;
    let mut worst: f64 = 0.0;
    for arc in tr.arcs {
        worst = worst.max(tr.plemelj_defect(arc.midpoint(), 1e-9)?.norm());
    }
    worst = worst.max((tr.evaluate(c(0.0, 1e7))? - 1.0).norm() * 1e-1);
    Ok(worst)
}

fn residual_small() -> Result<f64> {
    let data = fixtures::residual_solution(1)?;
    let grid = ResidualGrid::new((-8.0, 8.0), (-1.0, 1.0), 10, 10);
    Ok(pde_residual(&data, data.boundary.sigma, grid, 1e-3, 1e-3)?.max_residual)
}

fn background_evolution() -> Result<f64> {
    let grid = PeriodicGrid { half_width: 20.0, n: 256 };
    let q0 = vec![-1.0; 256];
    let ev = splitstep_local_mkdv(&q0, &fixtures::pt_boundary(), grid, 0.1, 1e-3)?;
    Ok(ev.q.iter().map(|v| (v + 1.0).abs()).fold(0.0, f64::max))
}

fn pt_symmetry() -> Result<f64> {
    let data = fixtures::evolution_solution()?;
    let mut worst: f64 = 0.0;
    for k in 0..25 {
        let (x, t) = (-6.0 + 0.5 * k as f64, 0.3 - 0.02 * k as f64);
        let a = crate::soliton::q_sol(&data, x, t)?;
        let b = crate::soliton::q_sol(&data, -x, -t)?;
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

fn ddtheta_sign() -> Result<f64> {
    // saddles are roots of θ′ with θ″ ≠ 0 inside (−6, 6)
    let mut worst: f64 = 0.0;
    for k in 0..11 {
        let xi = -5.0 + k as f64;
        let s = stationary_points(xi)?;
        for z in s.zeta {
            worst = worst.max(phase(z, xi, 1.0)?.dtheta.norm());
        }
    }
    Ok(worst)
}

pub fn symmetry_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let n = cfg.random_samples;
    let mut entries = vec![
        from_result("saddle_closed_form", 1e-10, saddle_closed_form()),
        from_result("stationary_equation", 1e-10, ddtheta_sign()),
        entry("phase_symmetries", phase_symmetries(&mut rng, n), 1e-12),
        from_result("eigenvector_det", 1e-12, eigenvector_det(&mut rng, n)),
    ];
    match jost_identities() {
        Ok((det, stab)) => {
            entries.push(entry("jost_det_identities", det, 1e-8));
            entries.push(entry("truncation_stability", stab, 1e-6));
        }
        Err(e) => entries.push(from_result("jost_det_identities", 1e-8, Err(e))),
    }
    entries.push(from_result("gamma_oracle", 1e-11, gamma_oracle()));
    match outer_structure(&mut rng, 100) {
        Ok((det, col, sing)) => {
            entries.push(entry("outer_det", det, 1e-9));
            entries.push(entry("outer_collinearity", col, 1e-9));
            entries.push(entry("outer_singular_part", sing, 1e-8));
        }
        Err(e) => entries.push(from_result("outer_det", 1e-9, Err(e))),
    }
    entries.push(from_result("pt_symmetry", 1e-12, pt_symmetry()));
    entries.push(from_result("soliton_residual", 1e-4, residual_small()));
    entries.push(from_result("local_model_trivial", 0.0, local_model_trivial()));
    entries.push(from_result("e1_traceless", 1e-12, e1_traceless(&mut rng, 20, cfg.reading)));
    match dual_path_constancy(&mut rng, 20, cfg.reading) {
        Ok((spread, ratios)) => {
            let mut e = entry("dual_path_ratio", spread, 1e-9);
            e.detail = Some(format!(
                "per-saddle f/(-i (E1)_12 t^1/2): {}",
                ratios.map(|r| format!("{r:.12}")).join(", ")
            ));
            entries.push(e);
        }
        Err(e) => entries.push(from_result("dual_path_ratio", 1e-9, Err(e))),
    }
    entries.push(from_result("beta_modulus", 1e-10, beta_modulus(&mut rng, 20, cfg.reading)));
    entries.push(from_result("assembly_scaling", 1e-12, assembly_wiring(cfg.reading)));
    entries.push(from_result("transmission_jump", 1e-6, plemelj()));
    entries.push(from_result("background_evolution", 1e-10, background_evolution()));
    let all_passed = entries.iter().all(|e| e.passed);
    SuiteReport {
        config: cfg.clone(),
        entries,
        all_passed,
    }
}
