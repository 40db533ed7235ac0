use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::gamma::complex_gamma;
use crate::mat2::{c, Mat2, C64, I};
use crate::phase::SaddleSet;
use crate::scattering::data::{nu_from, ScatteringData};
use crate::scattering::transmission::PartialTransmission;
use crate::{Error, Result};

/// How the factor `e^{−π/2}ν` in the β closed forms is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaReading {
    /// `e^{−πν/2}`
    ExponentNu,
    /// `e^{−π/2}·ν`
    Literal,
}

pub const BETA_READING: BetaReading = BetaReading::ExponentNu;

/// Distance of `4tθ″` from the negative real axis below which the
/// logarithm is refused.
pub const BRANCH_CUT_TOL: f64 = 1e-12;

/// Parabolic-cylinder data at one saddle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddleCoefficients {
    pub zeta: C64,
    pub rho: C64,
    pub rho_tilde: C64,
    pub rho_z: C64,
    pub rho_tilde_z: C64,
    pub nu: f64,
    pub transmission: C64,
    pub sqrt_ddtheta: C64,
    pub beta12: C64,
    pub beta21: C64,
}

impl SaddleCoefficients {
    /// `m^{(pc)}_{i,1} = [[0, β₁₂], [−β₂₁, 0]]`.
    pub fn m1(&self) -> Mat2 {
        Mat2::new(c(0.0, 0.0), self.beta12, -self.beta21, c(0.0, 0.0))
    }

    pub fn zero(zeta: C64, sqrt_ddtheta: C64) -> Self {
        SaddleCoefficients {
            zeta,
            rho: c(0.0, 0.0),
            rho_tilde: c(0.0, 0.0),
            rho_z: c(0.0, 0.0),
            rho_tilde_z: c(0.0, 0.0),
            nu: 0.0,
            transmission: c(1.0, 0.0),
            sqrt_ddtheta,
            beta12: c(0.0, 0.0),
            beta21: c(0.0, 0.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PCCoefficients {
    pub xi: f64,
    pub t: f64,
    pub saddles: [SaddleCoefficients; 4],
}

/// `−log(1 − x)/x`, equal to 1 at `x = 0`.
fn log_ratio(x: f64) -> f64 {
    if x.abs() < 1e-300 {
        1.0
    } else {
        -(-x).ln_1p() / x
    }
}

/// Coefficients at saddle `i` from `ρ(ζ), ρ̃(ζ)`, the finite part `T(ζ)` and
/// the chosen branch `s` of `√θ″(ζ)`.
///
/// `ρ_ζ = ρ T⁻² e^{−2itθ + iν log(4tθ″)}` and `ρ̃_ζ = ρ̃ T² e^{2itθ − iν log(4tθ″)}`.
/// The closed forms have `ρ_ζ` in both denominators; with
/// `ν/ρ_ζ = ρ̃_ζ·(−log(1 − ρρ̃)/(2πρρ̃))` and `Γ(iν) = Γ(1 + iν)/(iν)` they are
/// evaluated without cancellation as `ρ → 0`. Flipping `s` flips both β.
#[allow(clippy::too_many_arguments)]
pub fn saddle_coefficients(
    saddles: &SaddleSet,
    i: usize,
    rho: C64,
    rho_tilde: C64,
    transmission: C64,
    sqrt_ddtheta: C64,
    t: f64,
    reading: BetaReading,
) -> Result<SaddleCoefficients> {
    let zeta = saddles.zeta[i];
    let x = rho * rho_tilde;
    let nu = nu_from(1.0 - x)?;
    let arg = 4.0 * t * saddles.ddtheta_at[i];
    if arg.re < 0.0 && arg.im.abs() <= BRANCH_CUT_TOL * arg.norm() {
        return Err(Error::Branch(format!("4t theta'' = {arg} lies on the branch cut")));
    }
    let log_arg = arg.ln();
    let theta = t * saddles.theta_at[i];
    let t2 = transmission * transmission;
    let phase = (2.0 * I * theta - I * nu * log_arg).exp();
    let rho_z = rho / t2 / phase;
    let rho_tilde_z = rho_tilde * t2 * phase;
    let principal = saddles.ddtheta_at[i].sqrt();
    let branch = if (sqrt_ddtheta - principal).norm() <= (sqrt_ddtheta + principal).norm() {
        1.0
    } else {
        -1.0
    };

    let nu_over_rho_z = rho_tilde_z * log_ratio(x.re) / (2.0 * PI);
    let inv_gamma = I / complex_gamma(c(1.0, nu))?;
    let damping = match reading {
        BetaReading::ExponentNu => (-0.5 * PI * nu).exp(),
        BetaReading::Literal => (-0.5 * PI).exp() * nu,
    };
    let core = nu_over_rho_z * inv_gamma;
    let pref = -(2.0 * PI).sqrt() * damping * branch;
    let beta12 = pref * C64::from_polar(1.0, 0.25 * PI) * core;
    let beta21 = pref * C64::from_polar(1.0, -0.25 * PI) * (1.0 - rho_z * rho_tilde_z) * core;
    Ok(SaddleCoefficients {
        zeta,
        rho,
        rho_tilde,
        rho_z,
        rho_tilde_z,
        nu,
        transmission,
        sqrt_ddtheta,
        beta12,
        beta21,
    })
}

pub fn pc_coefficients(
    scat: &ScatteringData,
    saddles: &SaddleSet,
    transmission: &PartialTransmission,
    sqrt_ddtheta: &[C64; 4],
    t: f64,
) -> Result<PCCoefficients> {
    pc_coefficients_with(scat, saddles, transmission, sqrt_ddtheta, t, BETA_READING)
}

pub fn pc_coefficients_with(
    scat: &ScatteringData,
    saddles: &SaddleSet,
    transmission: &PartialTransmission,
    sqrt_ddtheta: &[C64; 4],
    t: f64,
    reading: BetaReading,
) -> Result<PCCoefficients> {
    let mut out = [SaddleCoefficients::zero(c(0.0, 0.0), c(1.0, 0.0)); 4];
    for i in 0..4 {
        let zeta = saddles.zeta[i];
        let (rho, rho_tilde) = scat.rho_at(zeta)?;
        let tz = transmission.at_endpoint(zeta)?;
        out[i] = saddle_coefficients(saddles, i, rho, rho_tilde, tz, sqrt_ddtheta[i], t, reading)?;
    }
    Ok(PCCoefficients {
        xi: saddles.xi,
        t,
        saddles: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::stationary_points;

    fn at(xi: f64, rho: C64, rho_t: C64, t: f64) -> SaddleCoefficients {
        let s = stationary_points(xi).unwrap();
        saddle_coefficients(&s, 0, rho, rho_t, c(1.0, 0.0), s.sqrt_ddtheta()[0], t, BETA_READING).unwrap()
    }

    #[test]
    fn no_radiation_gives_zero() {
        let p = at(0.7, c(0.0, 0.0), c(0.0, 0.0), 50.0);
        assert_eq!(p.nu, 0.0);
        assert_eq!(p.beta12, c(0.0, 0.0));
        assert_eq!(p.beta21, c(0.0, 0.0));
    }

    #[test]
    fn modulus_identities() {
        let rho = c(0.3, 0.1);
        let rho_t = 0.5 * rho.conj();
        let p = at(-1.2, rho, rho_t, 40.0);
        let g = complex_gamma(c(0.0, p.nu)).unwrap();
        let prod = (p.beta12 * p.beta21).norm();
        let one_minus = (1.0 - p.rho_z * p.rho_tilde_z).norm();
        let expect = 2.0 * PI * (-PI * p.nu).exp() / g.norm_sqr() * one_minus / p.rho_z.norm_sqr();
        assert!((prod - expect).abs() < 1e-10 * expect);
        // |β₁₂| = √ν √(|ρ̃_ζ|/|ρ_ζ|)
        let expect12 = p.nu.sqrt() * (p.rho_tilde_z.norm() / p.rho_z.norm()).sqrt();
        assert!((p.beta12.norm() - expect12).abs() < 1e-12);
    }

    #[test]
    fn literal_reading_rescales() {
        let s = stationary_points(0.4).unwrap();
        let r = s.sqrt_ddtheta()[1];
        let a = saddle_coefficients(&s, 1, c(0.2, 0.0), c(0.3, 0.0), c(1.0, 0.0), r, 30.0, BetaReading::ExponentNu).unwrap();
        let b = saddle_coefficients(&s, 1, c(0.2, 0.0), c(0.3, 0.0), c(1.0, 0.0), r, 30.0, BetaReading::Literal).unwrap();
        let k = a.nu * (-0.5 * PI).exp() / (-0.5 * PI * a.nu).exp();
        assert!((b.beta12 - k * a.beta12).norm() < 1e-15);
        assert!((b.beta21 - k * a.beta21).norm() < 1e-15);
    }

    #[test]
    fn t_scaling_shifts_phase() {
        let rho = c(0.2, -0.1);
        let rho_t = 1.25 * rho.conj();
        let s = stationary_points(1.3).unwrap();
        let t = 25.0;
        let a = at(1.3, rho, rho_t, t);
        let b = at(1.3, rho, rho_t, 4.0 * t);
        let strip = |p: &SaddleCoefficients, tt: f64| p.beta12 * (-2.0 * I * tt * s.theta_at[0]).exp();
        let shift = (strip(&b, 4.0 * t) / strip(&a, t)).arg();
        let expect = -a.nu * 4f64.ln();
        let d = (shift - expect + PI).rem_euclid(2.0 * PI) - PI;
        assert!(d.abs() < 1e-12, "{shift} {expect}");
        assert!((a.beta12.norm() - b.beta12.norm()).abs() < 1e-13);
    }

    #[test]
    fn branch_flip_negates_beta() {
        let s = stationary_points(2.5).unwrap();
        let r = s.sqrt_ddtheta()[2];
        let a = saddle_coefficients(&s, 2, c(0.1, 0.0), c(0.4, 0.0), c(1.0, 0.0), r, 30.0, BETA_READING).unwrap();
        let b = saddle_coefficients(&s, 2, c(0.1, 0.0), c(0.4, 0.0), c(1.0, 0.0), -r, 30.0, BETA_READING).unwrap();
        assert_eq!(a.beta12, -b.beta12);
        assert_eq!(a.beta21, -b.beta21);
    }
}
