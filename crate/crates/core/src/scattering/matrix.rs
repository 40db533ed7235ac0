use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::datum::InitialDatum;
use super::jost::{jost_solutions_with, JostConfig, JostPair};
use crate::mat2::{Mat2, C64};
use crate::{Error, Result};

/// Smallest `|det ψ₊(0, z)|` for which `s` is formed.
pub const DET_FLOOR: f64 = 1e-12;

/// Smallest `|s₁₁|` accepted on Σ.
pub const S11_FLOOR: f64 = 1e-10;

/// `s(z)` with `ψ₊ = ψ₋ s`, so `s₁₁ = det[ψ₊,1, ψ₋,2]/det ψ₋` extends to D₊.
pub fn scattering_matrix(datum: &InitialDatum, z: C64) -> Result<Mat2> {
    scattering_matrix_with(datum, z, &JostConfig::default())
}

pub fn scattering_matrix_with(datum: &InitialDatum, z: C64, cfg: &JostConfig) -> Result<Mat2> {
    let jp = jost_solutions_with(datum, z, cfg)?;
    from_jost(&jp)
}

pub fn from_jost(jp: &JostPair) -> Result<Mat2> {
    let dp = jp.plus.det();
    if dp.norm() < DET_FLOOR {
        return Err(Error::Singular { z: jp.z, det: dp.norm() });
    }
    let dm = jp.minus.det();
    if dm.norm() < DET_FLOOR {
        return Err(Error::Singular { z: jp.z, det: dm.norm() });
    }
    let s = jp.minus.adjugate() * jp.plus;
    Ok(s.scale(dm.inv()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReflectionSample {
    pub z: C64,
    pub rho: C64,
    pub rho_tilde: C64,
    pub s: Mat2,
}

/// `ρ = s₂₁/s₁₁`, `ρ̃ = s₁₂/s₂₂`; then `1 − ρρ̃ = 1/(s₁₁ s₂₂)` when `det s = 1`.
pub fn reflection_from_s(z: C64, s: &Mat2) -> Result<ReflectionSample> {
    let s11 = s.at(0, 0);
    let s22 = s.at(1, 1);
    if s11.norm() < S11_FLOOR {
        return Err(Error::SpectralSingularity { z, s11: s11.norm() });
    }
    if s22.norm() < S11_FLOOR {
        return Err(Error::SpectralSingularity { z, s11: s22.norm() });
    }
    Ok(ReflectionSample {
        z,
        rho: s.at(1, 0) / s11,
        rho_tilde: s.at(0, 1) / s22,
        s: *s,
    })
}

pub fn reflection_coefficients(datum: &InitialDatum, zs: &[C64]) -> Result<Vec<ReflectionSample>> {
    reflection_coefficients_with(datum, zs, &JostConfig::default())
}

pub fn reflection_coefficients_with(datum: &InitialDatum, zs: &[C64], cfg: &JostConfig) -> Result<Vec<ReflectionSample>> {
    datum.check_decay()?;
    zs.par_iter()
        .map(|&z| reflection_from_s(z, &scattering_matrix_with(datum, z, cfg)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::c;
    use crate::scattering::boundary::BoundaryData;

    fn bump(eps: f64) -> InitialDatum {
        let b = BoundaryData::pt_family(-1.0).unwrap();
        InitialDatum::from_fn(move |x| -1.0 + eps * (-x * x).exp() * (1.0 + 0.5 * x), 8.0, 3201, b).unwrap()
    }

    #[test]
    fn background_has_identity_s() {
        let d = bump(0.0);
        for &z in &[c(1.5, 0.0), C64::from_polar(1.0, 1.0)] {
            let s = scattering_matrix(&d, z).unwrap();
            assert!((s - Mat2::IDENTITY).max_abs() < 1e-14);
            let r = reflection_from_s(z, &s).unwrap();
            assert_eq!(r.rho, c(0.0, 0.0));
            assert_eq!(r.rho_tilde, c(0.0, 0.0));
        }
    }

    #[test]
    fn unimodular_and_identity() {
        let d = bump(0.3);
        let zs = [c(2.2, 0.0), c(-0.4, 0.0), C64::from_polar(1.0, 0.3), C64::from_polar(1.0, 2.2)];
        for r in reflection_coefficients(&d, &zs).unwrap() {
            assert!((r.s.det() - 1.0).norm() < 1e-8);
            let lhs = 1.0 - r.rho * r.rho_tilde;
            let rhs = (r.s.at(0, 0) * r.s.at(1, 1)).inv();
            assert!((lhs - rhs).norm() < 1e-8);
        }
    }

    #[test]
    fn born_linearity() {
        let z = C64::from_polar(1.0, 0.8);
        let r2 = reflection_coefficients(&bump(1e-3), &[z]).unwrap()[0];
        let r3 = reflection_coefficients(&bump(1e-4), &[z]).unwrap()[0];
        let ratio = r2.rho.norm() / r3.rho.norm();
        assert!((ratio - 10.0).abs() < 0.1, "{ratio}");
        let ratio = r2.rho_tilde.norm() / r3.rho_tilde.norm();
        assert!((ratio - 10.0).abs() < 0.1, "{ratio}");
    }
}
