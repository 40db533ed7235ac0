//! Fourier integrators for `q_t + 6q²q_x + q_xxx = 0`.
//!
//! The unknown is `u = q − q₋` on a periodic box `[−L, L)`. The linear part
//! `u_t = −6u_x − u_xxx` is always stepped exactly in Fourier space; the
//! remainder `u_t = −6 ∂_x(q₋u² + u³/3)` takes RK4 substeps inside Strang
//! splitting. `Yoshida4` composes three Strang steps into a fourth-order
//! step; `IntegratingFactorRk4` (Lawson) is also fourth order but conserves
//! `∫(q² − q₋²)` less well.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::scattering::boundary::BoundaryData;
use crate::{Error, Result};

pub const DEFAULT_DT: f64 = 1e-3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Strang,
    #[default]
    Yoshida4,
    IntegratingFactorRk4,
}

/// RK4 substeps per Yoshida stage; the stages are longer than `dt`, and two
/// substeps keep the drift of `∫(q² − q₋²)` near that of plain Strang.
const YOSHIDA_SUBSTEPS: usize = 2;

/// Triple-jump weights `(w₁, w₀, w₁)`.
fn yoshida_weights() -> [f64; 3] {
    let c = 2f64.powf(1.0 / 3.0);
    let w1 = 1.0 / (2.0 - c);
    [w1, -c * w1, w1]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicGrid {
    pub half_width: f64,
    pub n: usize,
}

impl PeriodicGrid {
    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + self.dx() * j as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n as i64;
        (0..n)
            .map(|j| {
                let m = if j <= n / 2 { j } else { j - n };
                PI * m as f64 / self.half_width
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evolution {
    pub grid: PeriodicGrid,
    pub scheme: Scheme,
    pub dt: f64,
    pub steps: usize,
    pub t_span: f64,
    pub q: Vec<f64>,
    /// `∫(q² − q₋²) dx` before and after.
    pub casimir: (f64, f64),
}

struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
    scratch: Vec<C64>,
}

impl Spectral {
    fn new(grid: &PeriodicGrid) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.n);
        let inverse = planner.plan_fft_inverse(grid.n);
        let len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Spectral {
            forward,
            inverse,
            k: grid.wavenumbers(),
            scratch: vec![C64::default(); len],
        }
    }

    /// `∂_x f` for real samples `f`.
    fn derivative(&mut self, f: &[f64], out: &mut [f64]) {
        let n = f.len();
        let mut buf: Vec<C64> = f.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.forward.process_with_scratch(&mut buf, &mut self.scratch);
        for (j, b) in buf.iter_mut().enumerate() {
            // Odd derivative: drop the unpaired Nyquist mode.
            let k = if n % 2 == 0 && j == n / 2 { 0.0 } else { self.k[j] };
            *b *= C64::new(0.0, k / n as f64);
        }
        self.inverse.process_with_scratch(&mut buf, &mut self.scratch);
        for (o, b) in out.iter_mut().zip(&buf) {
            *o = b.re;
        }
    }

    fn linear_step(&mut self, u: &mut [f64], tau: f64) {
        let n = u.len();
        let mut buf: Vec<C64> = u.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.forward.process_with_scratch(&mut buf, &mut self.scratch);
        for (j, b) in buf.iter_mut().enumerate() {
            let k = self.k[j];
            let omega = if n % 2 == 0 && j == n / 2 { 0.0 } else { k * k * k - 6.0 * k };
            *b *= C64::from_polar(1.0 / n as f64, omega * tau);
        }
        self.inverse.process_with_scratch(&mut buf, &mut self.scratch);
        for (o, b) in u.iter_mut().zip(&buf) {
            *o = b.re;
        }
    }
}

impl Spectral {
    fn to_fourier(&mut self, u: &[f64]) -> Vec<C64> {
        let mut buf: Vec<C64> = u.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.forward.process_with_scratch(&mut buf, &mut self.scratch);
        buf
    }

    fn to_real(&mut self, mut v: Vec<C64>) -> Vec<f64> {
        let n = v.len() as f64;
        self.inverse.process_with_scratch(&mut v, &mut self.scratch);
        v.iter().map(|b| b.re / n).collect()
    }

    /// Fourier transform of `−6 ∂_x(q₋u² + u³/3)` given `û`.
    fn nonlinear_hat(&mut self, q_minus: f64, v: &[C64]) -> Vec<C64> {
        let n = v.len();
        let u = self.to_real(v.to_vec());
        let flux: Vec<f64> = u.iter().map(|&w| q_minus * w * w + w * w * w / 3.0).collect();
        let mut f = self.to_fourier(&flux);
        for (j, b) in f.iter_mut().enumerate() {
            let k = if n % 2 == 0 && j == n / 2 { 0.0 } else { self.k[j] };
            *b *= C64::new(0.0, -6.0 * k);
        }
        f
    }

    fn propagators(&self, n: usize, tau: f64) -> Vec<C64> {
        (0..n)
            .map(|j| {
                let k = self.k[j];
                let omega = if n % 2 == 0 && j == n / 2 { 0.0 } else { k * k * k - 6.0 * k };
                C64::from_polar(1.0, omega * tau)
            })
            .collect()
    }
}

/// One Lawson RK4 step on `û`; `half` and `full` are the linear
/// propagators over `dt/2` and `dt`.
fn lawson_step(spec: &mut Spectral, q_minus: f64, v: &mut [C64], dt: f64, half: &[C64], full: &[C64]) {
    let n = v.len();
    let a = spec.nonlinear_hat(q_minus, v);
    let arg: Vec<C64> = (0..n).map(|j| half[j] * (v[j] + 0.5 * dt * a[j])).collect();
    let b = spec.nonlinear_hat(q_minus, &arg);
    let arg: Vec<C64> = (0..n).map(|j| half[j] * v[j] + 0.5 * dt * b[j]).collect();
    let c = spec.nonlinear_hat(q_minus, &arg);
    let arg: Vec<C64> = (0..n).map(|j| full[j] * v[j] + dt * half[j] * c[j]).collect();
    let d = spec.nonlinear_hat(q_minus, &arg);
    for j in 0..n {
        v[j] = full[j] * v[j] + dt / 6.0 * (full[j] * a[j] + 2.0 * half[j] * (b[j] + c[j]) + d[j]);
    }
}

fn nonlinear_rhs(spec: &mut Spectral, q_minus: f64, u: &[f64], out: &mut [f64]) {
    let flux: Vec<f64> = u.iter().map(|&v| q_minus * v * v + v * v * v / 3.0).collect();
    spec.derivative(&flux, out);
    for o in out.iter_mut() {
        *o *= -6.0;
    }
}

fn rk4(spec: &mut Spectral, q_minus: f64, u: &mut [f64], dt: f64) {
    let n = u.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    nonlinear_rhs(spec, q_minus, u, &mut k1);
    for j in 0..n {
        tmp[j] = u[j] + 0.5 * dt * k1[j];
    }
    nonlinear_rhs(spec, q_minus, &tmp, &mut k2);
    for j in 0..n {
        tmp[j] = u[j] + 0.5 * dt * k2[j];
    }
    nonlinear_rhs(spec, q_minus, &tmp, &mut k3);
    for j in 0..n {
        tmp[j] = u[j] + dt * k3[j];
    }
    nonlinear_rhs(spec, q_minus, &tmp, &mut k4);
    for j in 0..n {
        u[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
}

fn casimir(q: &[f64], q_minus: f64, dx: f64) -> f64 {
    q.iter().map(|&v| v * v - q_minus * q_minus).sum::<f64>() * dx
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Evolve samples of a PT-symmetric datum (`σ = −1`, `δ = 1`) over `t_span`
/// with the default scheme.
pub fn splitstep_local_mkdv(q0: &[f64], boundary: &BoundaryData, grid: PeriodicGrid, t_span: f64, dt: f64) -> Result<Evolution> {
    evolve_local_mkdv(q0, boundary, grid, t_span, dt, Scheme::default())
}

pub fn evolve_local_mkdv(
    q0: &[f64],
    boundary: &BoundaryData,
    grid: PeriodicGrid,
    t_span: f64,
    dt: f64,
    scheme: Scheme,
) -> Result<Evolution> {
    if boundary.sigma != -1 || boundary.delta != 1 {
        return Err(Error::Domain(format!(
            "split-step needs sigma = -1, delta = 1, got {}, {}",
            boundary.sigma, boundary.delta
        )));
    }
    if q0.len() != grid.n || grid.n < 4 {
        return Err(Error::Invalid(format!("expected {} samples, got {}", grid.n, q0.len())));
    }
    if !(dt > 0.0 && t_span >= 0.0 && grid.half_width > 0.0) {
        return Err(Error::Invalid("dt, t_span and the box must be positive".into()));
    }
    let steps = (t_span / dt).round() as usize;
    let h = if steps == 0 { 0.0 } else { t_span / steps as f64 };
    let qm = boundary.q_minus;
    let dx = grid.dx();
    let mut spec = Spectral::new(&grid);
    let mut u: Vec<f64> = q0.iter().map(|&v| v - qm).collect();
    let initial = sup(q0);
    let c0 = casimir(q0, qm, dx);

    let guard = |u: &[f64], step: usize| {
        let current = u
            .iter()
            .fold(0.0f64, |m, &v| if v.is_finite() { m.max((v + qm).abs()) } else { f64::INFINITY });
        if !current.is_finite() || current > 10.0 * initial {
            Err(Error::Blowup {
                initial,
                current,
                t: (step + 1) as f64 * h,
            })
        } else {
            Ok(())
        }
    };
    match scheme {
        Scheme::Strang => {
            for step in 0..steps {
                spec.linear_step(&mut u, 0.5 * h);
                rk4(&mut spec, qm, &mut u, h);
                spec.linear_step(&mut u, 0.5 * h);
                guard(&u, step)?;
            }
        }
        Scheme::Yoshida4 => {
            let w = yoshida_weights();
            for step in 0..steps {
                for &wi in &w {
                    spec.linear_step(&mut u, 0.5 * wi * h);
                    for _ in 0..YOSHIDA_SUBSTEPS {
                        rk4(&mut spec, qm, &mut u, wi * h / YOSHIDA_SUBSTEPS as f64);
                    }
                    spec.linear_step(&mut u, 0.5 * wi * h);
                }
                guard(&u, step)?;
            }
        }
        Scheme::IntegratingFactorRk4 => {
            let half = spec.propagators(grid.n, 0.5 * h);
            let full = spec.propagators(grid.n, h);
            let mut v = spec.to_fourier(&u);
            // The sup-norm guard needs physical space; check it every 50 steps.
            for step in 0..steps {
                lawson_step(&mut spec, qm, &mut v, h, &half, &full);
                if step % 50 == 49 || step + 1 == steps {
                    let w = spec.to_real(v.clone());
                    guard(&w, step)?;
                }
            }
            u = spec.to_real(v);
        }
    }
    let q: Vec<f64> = u.iter().map(|&v| v + qm).collect();
    let c1 = casimir(&q, qm, dx);
    Ok(Evolution {
        grid,
        scheme,
        dt: h,
        steps,
        t_span,
        q,
        casimir: (c0, c1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt() -> BoundaryData {
        BoundaryData::pt_family(1.0).unwrap()
    }

    #[test]
    fn background_is_stationary() {
        let grid = PeriodicGrid { half_width: 20.0, n: 256 };
        let q0 = vec![1.0; 256];
        let ev = splitstep_local_mkdv(&q0, &pt(), grid, 0.5, 1e-3).unwrap();
        assert!(ev.q.iter().all(|&v| (v - 1.0).abs() < 1e-10));
    }

    #[test]
    fn linear_step_is_exact_for_a_mode() {
        let grid = PeriodicGrid { half_width: PI, n: 64 };
        let mut spec = Spectral::new(&grid);
        let mut u: Vec<f64> = grid.points().iter().map(|&x| (3.0 * x).sin()).collect();
        spec.linear_step(&mut u, 0.25);
        // u_t = −6u_x − u_xxx moves sin(3x) with speed 6 − 9 = −3.
        for (j, &x) in grid.points().iter().enumerate() {
            assert!((u[j] - (3.0 * (x + 3.0 * 0.25)).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn schemes_agree_on_a_smooth_bump() {
        let grid = PeriodicGrid { half_width: 30.0, n: 512 };
        let q0: Vec<f64> = grid.points().iter().map(|&x| 1.0 + 0.1 * (-x * x / 4.0).exp()).collect();
        let runs: Vec<Evolution> = [Scheme::Strang, Scheme::Yoshida4, Scheme::IntegratingFactorRk4]
            .iter()
            .map(|&s| evolve_local_mkdv(&q0, &pt(), grid, 0.5, 1e-3, s).unwrap())
            .collect();
        let diff = |a: &Evolution, b: &Evolution| a.q.iter().zip(&b.q).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(diff(&runs[0], &runs[1]) < 1e-6);
        assert!(diff(&runs[1], &runs[2]) < 1e-9);
        for r in &runs {
            assert!((r.casimir.1 - r.casimir.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_other_families() {
        let b = BoundaryData::new(1.0, 1, -1).unwrap();
        let grid = PeriodicGrid { half_width: 10.0, n: 16 };
        assert!(matches!(
            splitstep_local_mkdv(&[1.0; 16], &b, grid, 1.0, 1e-3),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn blowup_guard_trips() {
        let grid = PeriodicGrid { half_width: 10.0, n: 128 };
        let q0: Vec<f64> = grid.points().iter().map(|&x| 1.0 + 30.0 * (-x * x).exp()).collect();
        let r = splitstep_local_mkdv(&q0, &pt(), grid, 1.0, 1e-3);
        assert!(matches!(r, Err(Error::Blowup { .. })), "{r:?}");
    }
}
