//! Partial transmission `T(z)` for a ray `ξ`.
//!
//! `T(z) = Π_{k∈Δ} (z − η̂_k)/(z − η_k) · exp[(2πi)⁻¹ ∫_{Σ(ξ)} log(1 − ρρ̃)(s) ds/(s − z)]`
//! with `Σ(ξ)` the two counter-clockwise unit-circle arcs between the saddles
//! that contain `z = 1` and `z = −1`. Near the arcs the Cauchy integral is
//! split as `∫ (f(s) − f(s₀))/(s − z) ds + f(s₀) ∫ ds/(s − z)`, with `s₀` the
//! arc point closest to `z` and the second integral done in closed form.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use super::data::ScatteringData;
use crate::mat2::{c, C64, I};
use crate::phase::{growing_set, stationary_points, DEFAULT_EPS_LAMBDA};
use crate::soliton::mirror;
use crate::{Error, Result};

pub const NONVANISHING_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransmissionConfig {
    pub panels: usize,
    pub order: usize,
    pub eps_lambda: f64,
}

impl Default for TransmissionConfig {
    fn default() -> Self {
        TransmissionConfig {
            panels: 24,
            order: 16,
            eps_lambda: DEFAULT_EPS_LAMBDA,
        }
    }
}

/// Counter-clockwise arc `{e^{iφ} : start ≤ φ ≤ end}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
}

impl Arc {
    pub fn a(&self) -> C64 {
        C64::from_polar(1.0, self.start)
    }

    pub fn b(&self) -> C64 {
        C64::from_polar(1.0, self.end)
    }

    pub fn midpoint(&self) -> C64 {
        C64::from_polar(1.0, 0.5 * (self.start + self.end))
    }

    /// Angle of the arc point closest to `z`.
    fn nearest_angle(&self, z: C64) -> f64 {
        let mid = 0.5 * (self.start + self.end);
        let mut phi = z.arg();
        phi += 2.0 * PI * ((mid - phi) / (2.0 * PI)).round();
        phi.clamp(self.start, self.end)
    }

    /// `∫_arc ds/(s − z)` for `z` off the arc.
    fn log_integral(&self, z: C64) -> C64 {
        let (a, b) = (self.a(), self.b());
        let mut v = ((b - z) / (a - z)).ln();
        // the chord and the arc bound a circular segment (arc shorter than π)
        let side = |p: C64| ((p - a) * (b - a).conj()).im;
        if z.norm() < 1.0 && side(z) * side(self.midpoint()) > 0.0 {
            v += 2.0 * PI * I;
        }
        v
    }
}

/// The arcs of `Σ(ξ)`: `(−φ₀, φ₀)` and `(π − φ₀, π + φ₀)`, `φ₀ = arg ζ₁`.
pub fn radiation_arcs(xi: f64) -> Result<[Arc; 2]> {
    let s = stationary_points(xi)?;
    let phi0 = s.zeta[0].arg();
    Ok([
        Arc { start: -phi0, end: phi0 },
        Arc {
            start: PI - phi0,
            end: PI + phi0,
        },
    ])
}

#[derive(Clone, Copy, Debug)]
struct Node {
    s: C64,
    ds: C64,
    f: C64,
}

#[derive(Clone, Debug)]
pub struct PartialTransmission {
    pub xi: f64,
    pub arcs: [Arc; 2],
    /// Indices into the pole list of the factors in the Blaschke product.
    pub delta: Vec<usize>,
    pub t_infinity: C64,
    zeros: Vec<C64>,
    nodes: [Vec<Node>; 2],
    radiation: bool,
    scat: ScatteringData,
}

pub fn partial_transmission(scat: &ScatteringData, xi: f64) -> Result<PartialTransmission> {
    partial_transmission_with(scat, xi, &TransmissionConfig::default())
}

pub fn partial_transmission_with(scat: &ScatteringData, xi: f64, cfg: &TransmissionConfig) -> Result<PartialTransmission> {
    let arcs = radiation_arcs(xi)?;
    let etas = scat.etas();
    let delta = growing_set(&etas, xi, cfg.eps_lambda);
    let zeros = delta.iter().map(|&k| etas[k]).collect();
    let radiation = scat.has_radiation();
    let order = NonZeroUsize::new(cfg.order).ok_or_else(|| Error::Invalid("quadrature order 0".into()))?;
    let rule = GaussLegendre::new(order);
    let mut nodes: [Vec<Node>; 2] = [Vec::new(), Vec::new()];
    if radiation {
        for (arc, out) in arcs.iter().zip(nodes.iter_mut()) {
            let width = (arc.end - arc.start) / cfg.panels as f64;
            for p in 0..cfg.panels {
                let lo = arc.start + p as f64 * width;
                for &(x, w) in rule.as_node_weight_pairs() {
                    let phi = lo + 0.5 * width * (x + 1.0);
                    let s = C64::from_polar(1.0, phi);
                    out.push(Node {
                        s,
                        ds: I * s * (0.5 * width * w),
                        f: log_weight(scat, s)?,
                    });
                }
            }
        }
    }
    Ok(PartialTransmission {
        xi,
        arcs,
        delta,
        t_infinity: c(1.0, 0.0),
        zeros,
        nodes,
        radiation,
        scat: scat.clone(),
    })
}

fn log_weight(scat: &ScatteringData, s: C64) -> Result<C64> {
    let v = scat.one_minus_rho_rho_tilde(s)?;
    if v.norm() < NONVANISHING_TOL {
        return Err(Error::Nonvanishing { value: v.norm() });
    }
    Ok(v.ln())
}

impl PartialTransmission {
    fn blaschke(&self, z: C64) -> C64 {
        self.zeros.iter().map(|&e| (z - mirror(e)) / (z - e)).product()
    }

    fn arc_integral(&self, j: usize, z: C64) -> Result<C64> {
        let arc = &self.arcs[j];
        let s0 = C64::from_polar(1.0, arc.nearest_angle(z));
        let f0 = log_weight(&self.scat, s0)?;
        let sum: C64 = self.nodes[j].iter().map(|n| (n.f - f0) / (n.s - z) * n.ds).sum();
        Ok(sum + f0 * arc.log_integral(z))
    }

    /// `∫_{Σ(ξ)} log(1 − ρρ̃)(s) ds/(s − z)`.
    pub fn cauchy(&self, z: C64) -> Result<C64> {
        if !self.radiation {
            return Ok(c(0.0, 0.0));
        }
        Ok(self.arc_integral(0, z)? + self.arc_integral(1, z)?)
    }

    pub fn evaluate(&self, z: C64) -> Result<C64> {
        if self.zeros.iter().any(|&e| (z - e).norm() < 1e-14) {
            return Err(Error::Domain(format!("T has a pole at {z}")));
        }
        Ok(self.blaschke(z) * (self.cauchy(z)? / (2.0 * PI * I)).exp())
    }

    /// Finite part of `T` at an arc endpoint: the logarithmically divergent
    /// `∓f(ζ) log(ζ − z)` term of the endpoint's own arc is dropped.
    pub fn at_endpoint(&self, zeta: C64) -> Result<C64> {
        if !self.radiation {
            return self.evaluate(zeta);
        }
        let mut total = c(0.0, 0.0);
        let mut hit = false;
        for (j, arc) in self.arcs.iter().enumerate() {
            let (a, b) = (arc.a(), arc.b());
            let at_a = (zeta - a).norm() < 1e-12;
            let at_b = (zeta - b).norm() < 1e-12;
            if !(at_a || at_b) {
                total += self.arc_integral(j, zeta)?;
                continue;
            }
            hit = true;
            let f0 = log_weight(&self.scat, zeta)?;
            let sum: C64 = self.nodes[j].iter().map(|n| (n.f - f0) / (n.s - zeta) * n.ds).sum();
            let log_part = if at_a { (b - zeta).ln() } else { -(a - zeta).ln() };
            total += sum + f0 * log_part;
        }
        if !hit {
            return Err(Error::Domain(format!("{zeta} is not an endpoint of Σ(ξ)")));
        }
        Ok(self.blaschke(zeta) * (total / (2.0 * PI * I)).exp())
    }

    /// `T₁` in `T(z) = 1 + T₁/z + O(z⁻²)`.
    pub fn first_moment(&self) -> C64 {
        let poles: C64 = self.zeros.iter().map(|&e| e - mirror(e)).sum();
        let integral: C64 = self.nodes.iter().flatten().map(|n| n.f * n.ds).sum();
        poles - integral / (2.0 * PI * I)
    }

    pub fn at_zero(&self) -> Result<C64> {
        self.evaluate(c(0.0, 0.0))
    }

    /// `T_in/T_out − (1 − ρρ̃)` at `ζ` on an arc, sampled at `(1 ∓ ε)ζ`.
    pub fn plemelj_defect(&self, zeta: C64, eps: f64) -> Result<C64> {
        let inside = self.evaluate(zeta * (1.0 - eps))?;
        let outside = self.evaluate(zeta * (1.0 + eps))?;
        Ok(inside / outside - self.scat.one_minus_rho_rho_tilde(zeta)?)
    }

    pub fn scattering_data(&self) -> &ScatteringData {
        &self.scat
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::boundary::BoundaryData;
    use crate::scattering::data::ContourSample;
    use crate::soliton::Pole;

    fn pt() -> BoundaryData {
        BoundaryData::pt_family(-1.0).unwrap()
    }

    fn radiating(n: usize, eps: f64) -> ScatteringData {
        let samples = (0..n)
            .map(|j| {
                let z = C64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
                ContourSample {
                    z,
                    rho: eps * (c(1.0, 0.0) + 0.3 * z),
                    rho_tilde: eps * (c(1.0, 0.0) + 0.3 * z.conj()),
                }
            })
            .collect();
        ScatteringData::new(samples, vec![], c(1.0, 0.0), pt()).unwrap()
    }

    #[test]
    fn trivial_data_gives_one() {
        let d = ScatteringData::new(vec![], vec![], c(1.0, 0.0), pt()).unwrap();
        let t = partial_transmission(&d, 0.5).unwrap();
        assert_eq!(t.evaluate(c(0.3, 2.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(t.t_infinity, c(1.0, 0.0));
        assert_eq!(t.first_moment(), c(0.0, 0.0));
    }

    #[test]
    fn single_growing_pole_is_rational() {
        let eta = C64::from_polar(1.5, 0.4);
        let d = ScatteringData::new(vec![], vec![Pole { eta, c_hat: c(1.0, 0.0) }], c(1.0, 0.0), pt()).unwrap();
        let rate = |xi: f64| crate::phase::phase(eta, xi, 1.0).unwrap().re2itheta;
        let xi = if rate(-5.0) < 0.0 { -5.0 } else { 5.0 };
        assert!(rate(xi) < 0.0);
        let t = partial_transmission(&d, xi).unwrap();
        assert_eq!(t.delta, vec![0]);
        let z = c(0.2, -0.7);
        let expect = (z - mirror(eta)) / (z - eta);
        assert!((t.evaluate(z).unwrap() - expect).norm() < 1e-15);
        assert!((t.evaluate(c(1e8, 1e8)).unwrap() - 1.0).norm() < 1e-7);
    }

    #[test]
    fn first_moment_matches_refined_quadrature() {
        let d = radiating(512, 0.2);
        let t = partial_transmission(&d, 1.0).unwrap();
        let cfg = TransmissionConfig {
            panels: 48,
            ..TransmissionConfig::default()
        };
        let fine = partial_transmission_with(&d, 1.0, &cfg).unwrap();
        assert!((t.first_moment() - fine.first_moment()).norm() < 1e-9);
        // large-z behaviour agrees with the moment
        let z = c(0.0, 1e4);
        let approx = 1.0 + t.first_moment() / z;
        assert!((t.evaluate(z).unwrap() - approx).norm() < 1e-6);
    }

    #[test]
    fn jump_across_arcs() {
        let d = radiating(512, 0.3);
        let t = partial_transmission(&d, -1.5).unwrap();
        for arc in t.arcs {
            let defect = t.plemelj_defect(arc.midpoint(), 1e-9).unwrap();
            assert!(defect.norm() < 1e-6, "{defect}");
        }
        // continuous across the circle away from the arcs
        let z = C64::from_polar(1.0, 0.5 * PI);
        let jump = t.evaluate(z * (1.0 - 1e-9)).unwrap() - t.evaluate(z * (1.0 + 1e-9)).unwrap();
        assert!(jump.norm() < 1e-6);
    }

    #[test]
    fn endpoint_finite_part_is_finite() {
        let d = radiating(512, 0.3);
        let t = partial_transmission(&d, 2.0).unwrap();
        let s = stationary_points(2.0).unwrap();
        for z in s.zeta {
            let v = t.at_endpoint(z).unwrap();
            assert!(v.norm().is_finite() && v.norm() > 0.0);
        }
        assert!(t.at_endpoint(c(0.0, 1.0)).is_err());
    }
}
