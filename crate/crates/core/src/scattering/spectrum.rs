//! Zeros of `s₁₁` in D₊.
//!
//! `s₁₁(z) = det[ψ₊,1, ψ₋,2](0, z)/(1 + z⁻²)` is analytic in D₊. Each of the
//! two components of D₊ inside the search annulus is covered by a polar mesh
//! in `(log r, φ)`; winding numbers of `s₁₁` around the cells count zeros,
//! multiply-occupied cells are subdivided, and every isolated zero is refined
//! by Newton's method with a four-point derivative.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::datum::InitialDatum;
use super::jost::{analytic_columns, JostConfig};
use crate::mat2::C64;
use crate::soliton::Pole;
use crate::{Error, Result};

pub const R_MIN: f64 = 0.05;
pub const R_MAX: f64 = 20.0;
pub const NEWTON_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Distance kept from Σ (in `|z|` and in `arg z`).
    pub margin: f64,
    pub n_radial: usize,
    pub n_angular: usize,
    /// Samples per cell edge before adaptive refinement.
    pub edge_samples: usize,
    pub max_depth: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            margin: 1e-3,
            n_radial: 12,
            n_angular: 12,
            edge_samples: 6,
            max_depth: 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralZero {
    pub eta: C64,
    pub c_hat: C64,
    /// `b` in `ψ₊,1(η) = b ψ₋,2(η)`.
    pub proportionality: C64,
    pub ds11: C64,
}

impl SpectralZero {
    pub fn pole(&self) -> Pole {
        Pole {
            eta: self.eta,
            c_hat: self.c_hat,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub zeros: Vec<SpectralZero>,
    /// Total winding number over all mesh cells.
    pub winding_count: i64,
}

struct S11<'a> {
    datum: &'a InitialDatum,
    cfg: JostConfig,
}

impl S11<'_> {
    fn eval(&self, z: C64) -> Result<C64> {
        let (a, b) = analytic_columns(self.datum, z, &self.cfg)?;
        Ok((a[0] * b[1] - a[1] * b[0]) / (1.0 + (z * z).inv()))
    }

    fn derivative(&self, z: C64) -> Result<C64> {
        let d = 1e-4 * z.norm().max(0.1);
        let f = |k: f64| self.eval(z + k * d);
        Ok((8.0 * (f(1.0)? - f(-1.0)?) - (f(2.0)? - f(-2.0)?)) / (12.0 * d))
    }
}

/// A mesh cell in `(log r, φ)` coordinates.
#[derive(Clone, Copy, Debug)]
struct Cell {
    u0: f64,
    u1: f64,
    p0: f64,
    p1: f64,
}

impl Cell {
    fn point(u: f64, p: f64) -> C64 {
        C64::from_polar(u.exp(), p)
    }

    fn corners(&self) -> [(f64, f64); 4] {
        [(self.u0, self.p0), (self.u1, self.p0), (self.u1, self.p1), (self.u0, self.p1)]
    }

    fn split(&self) -> [Cell; 4] {
        let um = 0.5 * (self.u0 + self.u1);
        let pm = 0.5 * (self.p0 + self.p1);
        [
            Cell {
                u0: self.u0,
                u1: um,
                p0: self.p0,
                p1: pm,
            },
            Cell {
                u0: um,
                u1: self.u1,
                p0: self.p0,
                p1: pm,
            },
            Cell {
                u0: self.u0,
                u1: um,
                p0: pm,
                p1: self.p1,
            },
            Cell {
                u0: um,
                u1: self.u1,
                p0: pm,
                p1: self.p1,
            },
        ]
    }

    fn center(&self) -> C64 {
        Cell::point(0.5 * (self.u0 + self.u1), 0.5 * (self.p0 + self.p1))
    }

    fn contains(&self, z: C64, slack: f64) -> bool {
        let u = z.norm().ln();
        let p = z.arg();
        let du = slack * (self.u1 - self.u0);
        let dp = slack * (self.p1 - self.p0);
        u >= self.u0 - du && u <= self.u1 + du && p >= self.p0 - dp && p <= self.p1 + dp
    }
}

/// Change of `arg f` along the straight (in `(u, φ)`) edge `a → b`.
fn edge_winding(f: &S11, a: (f64, f64), b: (f64, f64), samples: usize, depth: usize) -> Result<f64> {
    let pts: Vec<(f64, f64)> = (0..=samples)
        .map(|k| {
            let s = k as f64 / samples as f64;
            (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1))
        })
        .collect();
    let vals = pts.iter().map(|&(u, p)| f.eval(Cell::point(u, p))).collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for k in 0..samples {
        if vals[k].norm() == 0.0 || vals[k + 1].norm() == 0.0 {
            return Err(Error::Convergence(format!(
                "s11 vanishes on a mesh edge near {}",
                Cell::point(pts[k].0, pts[k].1)
            )));
        }
        let d = (vals[k + 1] / vals[k]).arg();
        if d.abs() > 1.0 && depth > 0 {
            total += edge_winding(f, pts[k], pts[k + 1], 4, depth - 1)?;
        } else {
            total += d;
        }
    }
    Ok(total)
}

fn winding(f: &S11, cell: &Cell, samples: usize) -> Result<i64> {
    let c = cell.corners();
    let mut total = 0.0;
    for k in 0..4 {
        total += edge_winding(f, c[k], c[(k + 1) % 4], samples, 6)?;
    }
    let w = total / (2.0 * std::f64::consts::PI);
    if (w - w.round()).abs() > 0.2 {
        return Err(Error::Convergence(format!("winding number {w} is not close to an integer")));
    }
    Ok(w.round() as i64)
}

fn newton(f: &S11, start: C64, cell: &Cell) -> Result<C64> {
    let mut z = start;
    for _ in 0..60 {
        let v = f.eval(z)?;
        let dv = f.derivative(z)?;
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        z -= step;
        if step.norm() < NEWTON_TOL * z.norm().max(1.0) {
            if !cell.contains(z, 0.5) {
                return Err(Error::Convergence(format!("Newton left its cell, reaching {z}")));
            }
            return Ok(z);
        }
    }
    Err(Error::Convergence(format!("Newton did not converge from {start}")))
}

fn resolve(f: &S11, cell: Cell, count: i64, depth: usize, cfg: &SearchConfig, out: &mut Vec<C64>) -> Result<()> {
    match count {
        0 => Ok(()),
        1 => {
            out.push(newton(f, cell.center(), &cell)?);
            Ok(())
        }
        n if n < 0 => Err(Error::Convergence(format!("negative winding {n} near {}", cell.center()))),
        n => {
            if depth >= cfg.max_depth {
                return Err(Error::Multiplicity {
                    z: cell.center(),
                    multiplicity: n,
                });
            }
            let mut seen = 0;
            for sub in cell.split() {
                let k = winding(f, &sub, cfg.edge_samples)?;
                seen += k;
                resolve(f, sub, k, depth + 1, cfg, out)?;
            }
            if seen != n {
                return Err(Error::Convergence(format!("cell count {n} split into {seen}")));
            }
            Ok(())
        }
    }
}

fn region_cells(cfg: &SearchConfig) -> Vec<Cell> {
    let m = cfg.margin;
    let regions = [
        // |z| > 1, Im z > 0
        ((1.0 + m).ln(), R_MAX.ln(), m, std::f64::consts::PI - m),
        // |z| < 1, Im z < 0
        (R_MIN.ln(), (1.0 - m).ln(), -std::f64::consts::PI + m, -m),
    ];
    let mut cells = Vec::new();
    for (ua, ub, pa, pb) in regions {
        for i in 0..cfg.n_radial {
            for j in 0..cfg.n_angular {
                let u0 = ua + (ub - ua) * i as f64 / cfg.n_radial as f64;
                let u1 = ua + (ub - ua) * (i + 1) as f64 / cfg.n_radial as f64;
                let p0 = pa + (pb - pa) * j as f64 / cfg.n_angular as f64;
                let p1 = pa + (pb - pa) * (j + 1) as f64 / cfg.n_angular as f64;
                cells.push(Cell { u0, u1, p0, p1 });
            }
        }
    }
    cells
}

pub fn discrete_spectrum(datum: &InitialDatum) -> Result<SpectrumReport> {
    discrete_spectrum_with(datum, &SearchConfig::default())
}

pub fn discrete_spectrum_with(datum: &InitialDatum, cfg: &SearchConfig) -> Result<SpectrumReport> {
    datum.check_decay()?;
    let f = S11 {
        datum,
        cfg: JostConfig {
            estimate: false,
            ..JostConfig::default()
        },
    };
    let cells = region_cells(cfg);
    let counts = cells
        .par_iter()
        .map(|cell| winding(&f, cell, cfg.edge_samples))
        .collect::<Result<Vec<_>>>()?;
    let winding_count: i64 = counts.iter().sum();
    let found = cells
        .par_iter()
        .zip(&counts)
        .map(|(cell, &k)| {
            let mut out = Vec::new();
            resolve(&f, *cell, k, 0, cfg, &mut out)?;
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut etas: Vec<C64> = found.into_iter().flatten().collect();
    etas.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    for w in etas.windows(2) {
        if (w[0] - w[1]).norm() < 1e-8 {
            return Err(Error::Multiplicity { z: w[0], multiplicity: 2 });
        }
    }
    let full = S11 {
        datum,
        cfg: JostConfig::default(),
    };
    let zeros = etas
        .par_iter()
        .map(|&eta| {
            let (a, b) = analytic_columns(datum, eta, &full.cfg)?;
            let k = if b[0].norm() > b[1].norm() { 0 } else { 1 };
            let prop = a[k] / b[k];
            let ds11 = full.derivative(eta)?;
            if ds11.norm() < 1e-12 {
                return Err(Error::Multiplicity { z: eta, multiplicity: 2 });
            }
            Ok(SpectralZero {
                eta,
                c_hat: prop / ds11,
                proportionality: prop,
                ds11,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumReport { zeros, winding_count })
}
