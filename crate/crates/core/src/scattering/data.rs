use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::boundary::BoundaryData;
use super::datum::InitialDatum;
use super::matrix::reflection_coefficients;
use super::spectrum::discrete_spectrum;
use crate::mat2::{c, from_pair, to_pair, C64};
use crate::phase::contour_samples;
use crate::soliton::{Pole, PoleRecord, ReflectionlessData};
use crate::{Error, Result};

/// Smallest `|1 − ρρ̃|` accepted at a contour sample.
pub const SAMPLE_FLOOR: f64 = 1e-8;

/// Samples with `||z| − 1|` below this are treated as unit-circle samples.
pub const CIRCLE_TOL: f64 = 1e-9;

/// Relative size of `Im(1 − ρρ̃)` tolerated when taking `ν`.
pub const BRANCH_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourSample {
    pub z: C64,
    pub rho: C64,
    pub rho_tilde: C64,
}

/// Reflection coefficients on Σ, discrete data and `T(∞)`.
///
/// `ρ` and `ρ̃` are kept as separate samples. Values between unit-circle
/// samples come from periodic four-point interpolation in the angle; data
/// without circle samples is reflectionless on the circle.
#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringData {
    pub samples: Vec<ContourSample>,
    pub poles: Vec<Pole>,
    pub t_infinity: C64,
    pub boundary: BoundaryData,
    circle: Vec<(f64, C64, C64)>,
}

impl ScatteringData {
    pub fn new(samples: Vec<ContourSample>, poles: Vec<Pole>, t_infinity: C64, boundary: BoundaryData) -> Result<Self> {
        for s in &samples {
            let v = (1.0 - s.rho * s.rho_tilde).norm();
            if v < SAMPLE_FLOOR {
                return Err(Error::Nonvanishing { value: v });
            }
        }
        // poles are checked by the reflectionless constructor
        ReflectionlessData::new(poles.clone(), boundary)?;
        let mut circle: Vec<(f64, C64, C64)> = samples
            .iter()
            .filter(|s| (s.z.norm() - 1.0).abs() < CIRCLE_TOL)
            .map(|s| (s.z.arg().rem_euclid(2.0 * PI), s.rho, s.rho_tilde))
            .collect();
        circle.sort_by(|a, b| a.0.total_cmp(&b.0));
        circle.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-14);
        if !circle.is_empty() && circle.len() < 4 {
            return Err(Error::Invalid(format!(
                "{} unit-circle samples; at least 4 are needed",
                circle.len()
            )));
        }
        Ok(ScatteringData {
            samples,
            poles,
            t_infinity,
            boundary,
            circle,
        })
    }

    pub fn reflectionless(data: &ReflectionlessData) -> Self {
        ScatteringData {
            samples: Vec::new(),
            poles: data.poles.clone(),
            t_infinity: c(1.0, 0.0),
            boundary: data.boundary,
            circle: Vec::new(),
        }
    }

    /// Direct scattering of a sampled datum: `n_contour` circle points, as
    /// many real points, and the discrete spectrum.
    pub fn from_datum(datum: &InitialDatum, n_contour: usize) -> Result<Self> {
        let zs = contour_samples(n_contour, 0.05, 20.0);
        let refl = reflection_coefficients(datum, &zs)?;
        let spec = discrete_spectrum(datum)?;
        let samples = refl
            .into_iter()
            .map(|r| ContourSample {
                z: r.z,
                rho: r.rho,
                rho_tilde: r.rho_tilde,
            })
            .collect();
        let poles = spec.zeros.iter().map(|z| z.pole()).collect();
        ScatteringData::new(samples, poles, c(1.0, 0.0), datum.boundary)
    }

    pub fn reflectionless_data(&self) -> Result<ReflectionlessData> {
        ReflectionlessData::new(self.poles.clone(), self.boundary)
    }

    pub fn etas(&self) -> Vec<C64> {
        self.poles.iter().map(|p| p.eta).collect()
    }

    pub fn has_radiation(&self) -> bool {
        self.circle.iter().any(|s| s.1 != c(0.0, 0.0) || s.2 != c(0.0, 0.0))
    }

    /// `(ρ(ζ), ρ̃(ζ))` for `ζ` on the unit circle.
    pub fn rho_at(&self, zeta: C64) -> Result<(C64, C64)> {
        if (zeta.norm() - 1.0).abs() > CIRCLE_TOL {
            return Err(Error::Domain(format!("{zeta} is not on the unit circle")));
        }
        let n = self.circle.len();
        if n == 0 {
            return Ok((c(0.0, 0.0), c(0.0, 0.0)));
        }
        let phi = zeta.arg().rem_euclid(2.0 * PI);
        // i: last node with angle <= phi (periodic)
        let i = match self.circle.partition_point(|s| s.0 <= phi) {
            0 => n as isize - 1,
            k => k as isize - 1,
        };
        let node = |k: isize| {
            let m = k.rem_euclid(n as isize) as usize;
            let wraps = k.div_euclid(n as isize) as f64;
            let (a, r, rt) = self.circle[m];
            (a + 2.0 * PI * wraps, r, rt)
        };
        let mut phi = phi;
        if phi < node(i).0 {
            phi += 2.0 * PI;
        }
        let pts = [node(i - 1), node(i), node(i + 1), node(i + 2)];
        let mut rho = c(0.0, 0.0);
        let mut rho_t = c(0.0, 0.0);
        for (j, pj) in pts.iter().enumerate() {
            if (phi - pj.0).abs() < 1e-15 {
                return Ok((pj.1, pj.2));
            }
            let mut w = 1.0;
            for (k, pk) in pts.iter().enumerate() {
                if k != j {
                    w *= (phi - pk.0) / (pj.0 - pk.0);
                }
            }
            rho += w * pj.1;
            rho_t += w * pj.2;
        }
        Ok((rho, rho_t))
    }

    pub fn one_minus_rho_rho_tilde(&self, zeta: C64) -> Result<C64> {
        let (r, rt) = self.rho_at(zeta)?;
        Ok(1.0 - r * rt)
    }

    pub fn to_file(&self) -> ScatteringDataFile {
        ScatteringDataFile {
            sigma_contour_samples: self
                .samples
                .iter()
                .map(|s| SampleRecord {
                    z: to_pair(s.z),
                    rho: to_pair(s.rho),
                    rho_tilde: to_pair(s.rho_tilde),
                })
                .collect(),
            poles: self.poles.iter().map(|&p| p.into()).collect(),
            t_infinity: to_pair(self.t_infinity),
            q_minus: Some(self.boundary.q_minus),
            sigma: Some(self.boundary.sigma),
            delta: Some(self.boundary.delta),
        }
    }

    pub fn from_file(f: ScatteringDataFile) -> Result<Self> {
        let boundary = BoundaryData::new(f.q_minus.unwrap_or(-1.0), f.sigma.unwrap_or(-1), f.delta.unwrap_or(1))?;
        let samples = f
            .sigma_contour_samples
            .iter()
            .map(|s| ContourSample {
                z: from_pair(s.z),
                rho: from_pair(s.rho),
                rho_tilde: from_pair(s.rho_tilde),
            })
            .collect();
        let poles = f.poles.into_iter().map(Pole::from).collect();
        ScatteringData::new(samples, poles, from_pair(f.t_infinity), boundary)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: ScatteringDataFile = serde_json::from_str(s).map_err(|e| Error::Invalid(format!("scattering data: {e}")))?;
        ScatteringData::from_file(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("scattering data serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        ScatteringData::from_json(&s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub z: [f64; 2],
    pub rho: [f64; 2],
    pub rho_tilde: [f64; 2],
}

/// On-disk layout. The boundary fields are optional and default to
/// `q₋ = −1, σ = −1, δ = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatteringDataFile {
    pub sigma_contour_samples: Vec<SampleRecord>,
    pub poles: Vec<PoleRecord>,
    #[serde(rename = "T_infinity")]
    pub t_infinity: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_minus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<i32>,
}

/// `ν(ζ) = −(2π)⁻¹ log(1 − ρρ̃)`, defined where `1 − ρρ̃` is real and positive.
pub fn nu(scat: &ScatteringData, zeta: C64) -> Result<f64> {
    nu_from(scat.one_minus_rho_rho_tilde(zeta)?)
}

pub fn nu_from(one_minus: C64) -> Result<f64> {
    if one_minus.re <= 0.0 || one_minus.im.abs() > BRANCH_TOL * one_minus.norm().max(1.0) {
        return Err(Error::Branch(format!("1 - rho*rho_tilde = {one_minus} is not real and positive")));
    }
    Ok(-one_minus.re.ln() / (2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(n: usize) -> ScatteringData {
        let b = BoundaryData::pt_family(-1.0).unwrap();
        let samples = (0..n)
            .map(|j| {
                let z = C64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
                ContourSample {
                    z,
                    rho: 0.2 * z.powi(2),
                    rho_tilde: 0.1 * z.powi(-2),
                }
            })
            .collect();
        ScatteringData::new(samples, vec![], c(1.0, 0.0), b).unwrap()
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu_from(c(1.0, 0.0)).unwrap(), 0.0);
        let v = nu_from(c((-2.0 * PI).exp(), 0.0)).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        assert!(matches!(nu_from(c(-0.5, 0.0)), Err(Error::Branch(_))));
        assert!(matches!(nu_from(c(0.9, 0.1)), Err(Error::Branch(_))));
    }

    #[test]
    fn nu_scaling_slope() {
        // d nu / d log|1 - rho rho~| = -1/(2 pi)
        let a = nu_from(c(0.8, 0.0)).unwrap();
        let b = nu_from(c(0.8 * 1.01, 0.0)).unwrap();
        assert!(((b - a) / 1.01f64.ln() + 1.0 / (2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn interpolation_is_accurate_on_the_circle() {
        let d = synthetic(256);
        for k in 0..37 {
            let z = C64::from_polar(1.0, -3.0 + 0.17 * k as f64);
            let (r, rt) = d.rho_at(z).unwrap();
            assert!((r - 0.2 * z * z).norm() < 1e-7);
            assert!((rt - 0.1 / (z * z)).norm() < 1e-7);
        }
        let nodes = d.samples[5];
        assert_eq!(d.rho_at(nodes.z).unwrap().0, nodes.rho);
        assert!(d.rho_at(c(0.5, 0.0)).is_err());
        let v = nu(&d, c(0.0, 1.0)).unwrap();
        assert!((v + (0.98f64).ln() / (2.0 * PI)).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip() {
        let d = synthetic(8);
        let back = ScatteringData::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        let minimal = r#"{"sigma_contour_samples": [], "poles": [], "T_infinity": [1, 0]}"#;
        let m = ScatteringData::from_json(minimal).unwrap();
        assert!(!m.has_radiation());
        assert_eq!(m.boundary, BoundaryData::pt_family(-1.0).unwrap());
    }

    #[test]
    fn rejects_vanishing_and_sparse_samples() {
        let b = BoundaryData::pt_family(-1.0).unwrap();
        let bad = vec![ContourSample {
            z: c(1.0, 0.0),
            rho: c(1.0, 0.0),
            rho_tilde: c(1.0, 0.0),
        }];
        assert!(matches!(
            ScatteringData::new(bad, vec![], c(1.0, 0.0), b),
            Err(Error::Nonvanishing { .. })
        ));
        let sparse = vec![ContourSample {
            z: c(1.0, 0.0),
            rho: c(0.1, 0.0),
            rho_tilde: c(0.0, 0.0),
        }];
        assert!(ScatteringData::new(sparse, vec![], c(1.0, 0.0), b).is_err());
    }
}
