use serde::{Deserialize, Serialize};

use super::boundary::BoundaryData;
use crate::{Error, Result};

/// Largest `|q₀(±L) − q±|` accepted for scattering runs.
pub const DECAY_TOL: f64 = 1e-8;

/// Samples of a real datum `q₀` on the symmetric grid `x_j = x0 + j h`,
/// `j = 0..n`, with `x0 = −(n − 1)h/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialDatum {
    pub x0: f64,
    pub h: f64,
    pub values: Vec<f64>,
    pub boundary: BoundaryData,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialDatumFile {
    pub x0: f64,
    pub h: f64,
    pub n: usize,
    pub values: Vec<f64>,
    pub q_minus: f64,
    pub sigma: i32,
    pub delta: i32,
}

impl InitialDatum {
    pub fn new(x0: f64, h: f64, values: Vec<f64>, boundary: BoundaryData) -> Result<Self> {
        let n = values.len();
        if n < 5 || n % 2 == 0 {
            return Err(Error::Invalid(format!("need an odd number (≥ 5) of samples, got {n}")));
        }
        if !(h > 0.0) {
            return Err(Error::Invalid(format!("step must be positive, got {h}")));
        }
        let half = h * ((n - 1) / 2) as f64;
        if (x0 + half).abs() > 1e-9 * half.max(1.0) {
            return Err(Error::Invalid(format!("grid is not symmetric: x0 = {x0}, expected {}", -half)));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("datum has non-finite samples".into()));
        }
        Ok(InitialDatum {
            x0: -half,
            h,
            values,
            boundary,
        })
    }

    /// Sample `q` on `[−L, L]` with `n` points.
    pub fn from_fn<F: Fn(f64) -> f64>(q: F, half_width: f64, n: usize, boundary: BoundaryData) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid("need at least two samples".into()));
        }
        let h = 2.0 * half_width / (n - 1) as f64;
        let values = (0..n).map(|j| q(-half_width + h * j as f64)).collect();
        InitialDatum::new(-half_width, h, values, boundary)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn half_width(&self) -> f64 {
        -self.x0
    }

    pub fn center(&self) -> usize {
        (self.n() - 1) / 2
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + self.h * j as f64
    }

    /// `(|q₀(−L) − q₋|, |q₀(L) − q₊|)`.
    pub fn decay(&self) -> (f64, f64) {
        let b = &self.boundary;
        ((self.values[0] - b.q_minus).abs(), (self.values[self.n() - 1] - b.q_plus).abs())
    }

    pub fn check_decay(&self) -> Result<()> {
        let (left, right) = self.decay();
        if left >= DECAY_TOL || right >= DECAY_TOL {
            return Err(Error::Decay { left, right });
        }
        Ok(())
    }

    /// Cubic (4-point Lagrange) interpolation at fractional index `s`.
    pub fn interpolate(&self, s: f64) -> f64 {
        let n = self.n();
        let j = (s.floor() as isize).clamp(1, n as isize - 3) as usize;
        let u = s - j as f64;
        let v = &self.values;
        let (a, b, c, d) = (v[j - 1], v[j], v[j + 1], v[j + 2]);
        let l0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
        let l1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
        let l2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
        let l3 = (u + 1.0) * u * (u - 1.0) / 6.0;
        a * l0 + b * l1 + c * l2 + d * l3
    }

    pub fn to_file(&self) -> InitialDatumFile {
        InitialDatumFile {
            x0: self.x0,
            h: self.h,
            n: self.n(),
            values: self.values.clone(),
            q_minus: self.boundary.q_minus,
            sigma: self.boundary.sigma,
            delta: self.boundary.delta,
        }
    }

    pub fn from_file(f: InitialDatumFile) -> Result<Self> {
        if f.values.len() != f.n {
            return Err(Error::Invalid(format!("n = {} but {} values given", f.n, f.values.len())));
        }
        let b = BoundaryData::new(f.q_minus, f.sigma, f.delta)?;
        InitialDatum::new(f.x0, f.h, f.values, b)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        InitialDatum::from_file(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }
}
