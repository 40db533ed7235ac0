use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{decay_fit, DecayFit};
use super::residual::{pde_residual, ResidualGrid, ResidualReport};
use super::splitstep::{evolve_local_mkdv, PeriodicGrid, Scheme};
use crate::asymptotics::{AsymptoticResult, AsymptoticSolver, ERROR_ORDER};
use crate::soliton::{q_sol, ReflectionlessData};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionCheck {
    pub t0: f64,
    pub t_span: f64,
    pub grid: PeriodicGrid,
    pub dt: f64,
    pub scheme: Scheme,
    /// `sup |q_split − q_sol(·, t₀ + Δt)|` over the grid.
    pub sup_error: f64,
    pub argmax: f64,
    /// `max(|q_sol(±L, t) − q₋|)` at both times.
    pub edge_mismatch: f64,
    pub casimir_drift: f64,
    #[serde(skip)]
    pub x: Vec<f64>,
    #[serde(skip)]
    pub q_split: Vec<f64>,
    #[serde(skip)]
    pub q_exact: Vec<f64>,
}

/// Evolve `q_sol(·, t₀)` with the split-step integrator and compare with
/// `q_sol(·, t₀ + Δt)`.
pub fn evolution_cross_check(
    data: &ReflectionlessData,
    t0: f64,
    t_span: f64,
    grid: PeriodicGrid,
    dt: f64,
    scheme: Scheme,
) -> Result<EvolutionCheck> {
    let x = grid.points();
    let sample = |t: f64| x.par_iter().map(|&xi| q_sol(data, xi, t)).collect::<Result<Vec<_>>>();
    let q0 = sample(t0)?;
    let q_exact = sample(t0 + t_span)?;
    let ev = evolve_local_mkdv(&q0, &data.boundary, grid, t_span, dt, scheme)?;
    let qm = data.boundary.q_minus;
    let edge = [q0[0], *q0.last().unwrap(), q_exact[0], *q_exact.last().unwrap()]
        .iter()
        .map(|v| (v - qm).abs())
        .fold(0.0, f64::max);
    let (mut sup, mut argmax) = (0.0, 0.0);
    for (j, (a, b)) in ev.q.iter().zip(&q_exact).enumerate() {
        let e = (a - b).abs();
        if !(e <= sup) {
            sup = e;
            argmax = x[j];
        }
    }
    Ok(EvolutionCheck {
        t0,
        t_span,
        grid,
        dt,
        scheme,
        sup_error: sup,
        argmax,
        edge_mismatch: edge,
        casimir_drift: (ev.casimir.1 - ev.casimir.0).abs(),
        x,
        q_split: ev.q,
        q_exact,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualScaling {
    pub coarse: ResidualReport,
    pub fine: ResidualReport,
    /// `max r(h) / max r(h/2)`; 4 for a second-order stencil.
    pub ratio: f64,
}

pub fn residual_scaling(data: &ReflectionlessData, grid: ResidualGrid, h: f64) -> Result<ResidualScaling> {
    let sigma = data.boundary.sigma;
    let coarse = pde_residual(data, sigma, grid, h, h)?;
    let fine = pde_residual(data, sigma, grid, 0.5 * h, 0.5 * h)?;
    let ratio = coarse.max_residual / fine.max_residual;
    Ok(ResidualScaling { coarse, fine, ratio })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayDecay {
    pub xi: f64,
    /// Fit of `|q_asym − c·q_sol|`.
    pub raw: DecayFit,
    /// Fit of `|q_asym − c·q_sol| / |f|`; slope exactly `−1/2` when the
    /// correction is assembled consistently.
    pub normalized: DecayFit,
    pub error_order: String,
}

pub fn ray_decay(solver: &AsymptoticSolver, xi: f64, ts: &[f64]) -> Result<RayDecay> {
    let res = solver.ray_sweep(xi, ts)?;
    let gap = |r: &AsymptoticResult| (r.q_asym_complex() - r.c * r.q_sol_term).norm();
    let raw: Vec<(f64, f64)> = res.iter().map(|r| (r.t, gap(r))).collect();
    let normalized: Vec<(f64, f64)> = res.iter().map(|r| (r.t, gap(r) / r.f.norm())).collect();
    Ok(RayDecay {
        xi,
        raw: decay_fit(&raw)?,
        normalized: decay_fit(&normalized)?,
        error_order: ERROR_ORDER.to_string(),
    })
}
