//! Canonical inputs used by the CLI, the bundled data files and the tests.

use std::f64::consts::PI;

use crate::mat2::{c, C64};
use crate::scattering::{BoundaryData, ContourSample, InitialDatum, ScatteringData};
use crate::soliton::ReflectionlessData;
use crate::Result;

pub fn pt_boundary() -> BoundaryData {
    BoundaryData::pt_family(-1.0).expect("q- = -1 is admissible")
}

/// Reality orbit of `η = r e^{iφ}`: `[η, −η̄, −1/η̄, 1/η]`.
pub fn quartet(r: f64, phi: f64) -> [C64; 4] {
    let e = C64::from_polar(r, phi);
    [e, -e.conj(), -e.conj().inv(), e.inv()]
}

/// Reflectionless data from quartets `(r, φ, s)`; the orbit carries signs
/// `[s, s, −s, −s]`.
pub fn quartets(orbits: &[(f64, f64, f64)], boundary: BoundaryData) -> Result<ReflectionlessData> {
    let mut etas = Vec::new();
    let mut signs = Vec::new();
    for &(r, phi, s) in orbits {
        etas.extend(quartet(r, phi));
        signs.extend([s, s, -s, -s]);
    }
    ReflectionlessData::nonlocal(&etas, &signs, boundary)
}

/// One, two or three quartets for residual checks.
pub fn residual_solution(orbits: usize) -> Result<ReflectionlessData> {
    let all = [(1.1, 0.1, 1.0), (1.5, 0.06, -1.0), (2.0, 0.04, 1.0)];
    let list: &[(f64, f64, f64)] = match orbits {
        1 => &[all[0]],
        2 => &all[..2],
        _ => &all[..3],
    };
    quartets(list, pt_boundary())
}

/// Solution used for the split-step comparison.
pub fn evolution_solution() -> Result<ReflectionlessData> {
    quartets(&[(2.0, 0.1, 1.0)], pt_boundary())
}

/// Solution whose spectrum the direct-scattering tests recover.
pub fn spectral_solution() -> Result<ReflectionlessData> {
    quartets(&[(2.0, 0.6, 1.0)], pt_boundary())
}

pub fn perturbed_profile(x: f64) -> f64 {
    -1.0 + 0.4 * (-x * x).exp() * (1.0 + 0.3 * x)
}

/// `q₀ = −1 + 0.4 e^{−x²}(1 + 0.3x)` on `[−L, L]` with `h = 0.004`.
pub fn perturbed_datum(half_width: f64) -> Result<InitialDatum> {
    let n = (2.0 * half_width / 0.004).round() as usize + 1;
    InitialDatum::from_fn(perturbed_profile, half_width, n, pt_boundary())
}

pub fn background_datum() -> Result<InitialDatum> {
    InitialDatum::from_fn(|_| -1.0, 10.0, 401, pt_boundary())
}

/// `(ρ, ρ̃)` of the radiation fixture at angle `φ`; symmetric under
/// `φ → −φ` and `φ → π − φ` in modulus, with `ρρ̃ > 0`.
pub fn radiation_profile(phi: f64) -> (C64, C64) {
    let phase = C64::from_polar(1.0, 0.4 + 0.5 * phi.cos().powi(2));
    let rho = 0.3 * (1.0 + 0.2 * (2.0 * phi).cos()) * phase;
    let rho_tilde = 0.25 * (1.0 + 0.1 * (4.0 * phi).cos()) * phase.conj();
    (rho, rho_tilde)
}

/// Synthetic scattering data: smooth reflection on Σ plus one quartet.
pub fn radiation_fixture() -> Result<ScatteringData> {
    let n = 512;
    let mut samples: Vec<ContourSample> = (0..n)
        .map(|j| {
            let phi = 2.0 * PI * j as f64 / n as f64;
            let (rho, rho_tilde) = radiation_profile(phi);
            ContourSample {
                z: C64::from_polar(1.0, phi),
                rho,
                rho_tilde,
            }
        })
        .collect();
    for j in 0..32 {
        let r = 0.05 * 400f64.powf(j as f64 / 31.0);
        if (r - 1.0).abs() < 1e-6 {
            continue;
        }
        for z in [c(r, 0.0), c(-r, 0.0)] {
            let w = 0.1 * (-r.ln().powi(2)).exp();
            samples.push(ContourSample {
                z,
                rho: c(w, 0.0),
                rho_tilde: c(0.5 * w, 0.0),
            });
        }
    }
    let poles = spectral_solution()?.poles;
    ScatteringData::new(samples, poles, c(1.0, 0.0), pt_boundary())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        for k in 1..=3 {
            let d = residual_solution(k).unwrap();
            assert_eq!(d.poles.len(), 4 * k);
            assert!(d.reduction_defect() < 1e-10);
        }
        evolution_solution().unwrap();
        let r = radiation_fixture().unwrap();
        assert!(r.has_radiation());
        let d = perturbed_datum(8.0).unwrap();
        assert_eq!(d.n(), 4001);
        d.check_decay().unwrap();
    }

    #[test]
    fn radiation_profile_symmetry() {
        for k in 0..20 {
            let phi = 0.3 + 0.13 * k as f64;
            let (a, at) = radiation_profile(phi);
            for p in [-phi, PI - phi, PI + phi] {
                let (b, bt) = radiation_profile(p);
                assert!((a.norm() - b.norm()).abs() < 1e-15);
                assert!((at.norm() - bt.norm()).abs() < 1e-15);
                assert!((b * bt).im.abs() < 1e-15 && (b * bt).re > 0.0);
            }
        }
    }
}
