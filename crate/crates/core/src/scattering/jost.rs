//! Jost solutions by RK4 in the background-normalized variable.
//!
//! With `ψ = E± w e^{iλxσ₃}` the system becomes
//! `w' = iλ[σ₃, w] + E±⁻¹(Q(x) − Q±)E± w`, whose columns evolve as
//! `w₁' = diag(0, −2iλ) w₁ + P w₁` and `w₂' = diag(2iλ, 0) w₂ + P w₂`.
//! The perturbation `P` vanishes where the datum sits at its boundary value,
//! so `w ≡ I` there and integration starts from `I` at `x = ∓L`.

use serde::{Deserialize, Serialize};

use super::boundary::{background_eigenvector_matrix, Side};
use super::datum::InitialDatum;
use crate::mat2::{c, Mat2, C64, I};
use crate::{Error, Result};

pub const STEP_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JostConfig {
    /// Richardson estimate allowed, relative to `max(1, |w|)`.
    pub step_tol: f64,
    /// Skip the Richardson run (used inside the spectral search).
    pub estimate: bool,
}

impl Default for JostConfig {
    fn default() -> Self {
        JostConfig {
            step_tol: STEP_TOL,
            estimate: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JostPair {
    pub z: C64,
    pub minus: Mat2,
    pub plus: Mat2,
    pub step_estimate: f64,
}

/// Integrator for one `(datum, z)` pair.
pub(crate) struct ColumnIntegrator<'a> {
    datum: &'a InitialDatum,
    z: C64,
    lambda: C64,
}

impl<'a> ColumnIntegrator<'a> {
    pub(crate) fn new(datum: &'a InitialDatum, z: C64) -> Result<Self> {
        if z.norm() < 1e-12 || (z - I).norm() < 1e-12 || (z + I).norm() < 1e-12 {
            return Err(Error::Domain(format!("Jost solutions undefined at z = {z}")));
        }
        Ok(ColumnIntegrator {
            datum,
            z,
            lambda: 0.5 * (z + z.inv()),
        })
    }

    /// `Q(x) − Q±` at fractional grid index `s`.
    fn delta_q(&self, s: f64, side: Side) -> (f64, f64) {
        let d = self.datum;
        let b = &d.boundary;
        let mirror = (d.n() - 1) as f64 - s;
        let q = if s.fract() == 0.0 { d.values[s as usize] } else { d.interpolate(s) };
        let qr = if mirror.fract() == 0.0 {
            d.values[mirror as usize]
        } else {
            d.interpolate(mirror)
        };
        let qs = b.q(side);
        // Q = [[0, q(x)], [σ q(−x), 0]], Q± = [[0, q±], [−q±, 0]].
        (q - qs, b.sigma as f64 * qr + qs)
    }

    fn perturbation(&self, e: &Mat2, e_inv: &Mat2, s: f64, side: Side) -> Mat2 {
        let (upper, lower) = self.delta_q(s, side);
        let dq = Mat2::new(c(0.0, 0.0), c(upper, 0.0), c(lower, 0.0), c(0.0, 0.0));
        *e_inv * dq * *e
    }

    /// Column `col` of `w(0)` integrated from the `side` end with grid stride
    /// `stride`.
    fn column(&self, side: Side, col: usize, stride: usize) -> Result<[C64; 2]> {
        let e = background_eigenvector_matrix(&self.datum.boundary, self.z, side)?;
        let e_inv = e.inverse(1e-300).ok_or(Error::Singular {
            z: self.z,
            det: e.det().norm(),
        })?;
        let il = 2.0 * I * self.lambda;
        let diag = if col == 0 { [c(0.0, 0.0), -il] } else { [il, c(0.0, 0.0)] };
        let center = self.datum.center();
        let mut w = if col == 0 {
            [c(1.0, 0.0), c(0.0, 0.0)]
        } else {
            [c(0.0, 0.0), c(1.0, 0.0)]
        };
        let (start, dir) = match side {
            Side::Minus => (0isize, 1isize),
            Side::Plus => ((self.datum.n() - 1) as isize, -1isize),
        };
        let h = self.datum.h * dir as f64;
        let rhs = |p: &Mat2, w: &[C64; 2]| {
            let pw = p.mul_vec(*w);
            [diag[0] * w[0] + pw[0], diag[1] * w[1] + pw[1]]
        };
        let mut j = start;
        let target = center as isize;
        let mut p0 = self.perturbation(&e, &e_inv, j as f64, side);
        while j != target {
            let remaining = (target - j).abs() as usize;
            let m = stride.min(remaining);
            let step = h * m as f64;
            let s_mid = j as f64 + 0.5 * (m as isize * dir) as f64;
            let j_next = j + m as isize * dir;
            let pm = self.perturbation(&e, &e_inv, s_mid, side);
            let p1 = self.perturbation(&e, &e_inv, j_next as f64, side);
            let k1 = rhs(&p0, &w);
            let w2 = [w[0] + 0.5 * step * k1[0], w[1] + 0.5 * step * k1[1]];
            let k2 = rhs(&pm, &w2);
            let w3 = [w[0] + 0.5 * step * k2[0], w[1] + 0.5 * step * k2[1]];
            let k3 = rhs(&pm, &w3);
            let w4 = [w[0] + step * k3[0], w[1] + step * k3[1]];
            let k4 = rhs(&p1, &w4);
            for r in 0..2 {
                w[r] += step / 6.0 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
            }
            p0 = p1;
            j = j_next;
        }
        Ok(e.mul_vec(w))
    }

    /// Column of `ψ(0)` with its Richardson estimate (fine vs doubled step).
    pub(crate) fn psi_column(&self, side: Side, col: usize, estimate: bool) -> Result<([C64; 2], f64)> {
        let fine = self.column(side, col, 1)?;
        if !estimate {
            return Ok((fine, 0.0));
        }
        let coarse = self.column(side, col, 2)?;
        let scale = fine[0].norm().max(fine[1].norm()).max(1.0);
        let est = ((fine[0] - coarse[0]).norm().max((fine[1] - coarse[1]).norm())) / 15.0 / scale;
        Ok((fine, est))
    }
}

fn check_step(est: f64, cfg: &JostConfig) -> Result<()> {
    if est > cfg.step_tol {
        return Err(Error::Step {
            estimate: est,
            tolerance: cfg.step_tol,
        });
    }
    Ok(())
}

/// `ψ₋(0, z)` and `ψ₊(0, z)`.
pub fn jost_solutions(datum: &InitialDatum, z: C64) -> Result<JostPair> {
    jost_solutions_with(datum, z, &JostConfig::default())
}

pub fn jost_solutions_with(datum: &InitialDatum, z: C64, cfg: &JostConfig) -> Result<JostPair> {
    datum.check_decay()?;
    let integ = ColumnIntegrator::new(datum, z)?;
    let mut worst = 0.0f64;
    let mut cols = [[[C64::default(); 2]; 2]; 2];
    for (si, side) in [Side::Minus, Side::Plus].into_iter().enumerate() {
        for col in 0..2 {
            let (v, est) = integ.psi_column(side, col, cfg.estimate)?;
            worst = worst.max(est);
            cols[si][col] = v;
        }
    }
    check_step(worst, cfg)?;
    Ok(JostPair {
        z,
        minus: Mat2::from_columns(cols[0][0], cols[0][1]),
        plus: Mat2::from_columns(cols[1][0], cols[1][1]),
        step_estimate: worst,
    })
}

/// The two columns analytic in D₊: `ψ₊,1(0, z)` and `ψ₋,2(0, z)`.
pub fn analytic_columns(datum: &InitialDatum, z: C64, cfg: &JostConfig) -> Result<([C64; 2], [C64; 2])> {
    let integ = ColumnIntegrator::new(datum, z)?;
    let (a, ea) = integ.psi_column(Side::Plus, 0, cfg.estimate)?;
    let (b, eb) = integ.psi_column(Side::Minus, 1, cfg.estimate)?;
    check_step(ea.max(eb), cfg)?;
    Ok((a, b))
}
