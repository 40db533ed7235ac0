use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{error_term_e1, local_model_residue, radiation_coefficient_f};
use super::pc::{pc_coefficients_with, BetaReading, PCCoefficients, BETA_READING};
use crate::mat2::{c, Mat2, C64};
use crate::phase::{soliton_activity, stationary_points, SaddleRecord, SaddleSet, DEFAULT_EPS_LAMBDA};
use crate::scattering::data::ScatteringData;
use crate::scattering::transmission::{partial_transmission_with, PartialTransmission, TransmissionConfig};
use crate::soliton::{modify_for_lambda, solve_outer, ReflectionlessData};
use crate::{Error, Result};

pub const T_MIN: f64 = 10.0;

/// Order of the neglected remainder.
pub const ERROR_ORDER: &str = "O(t^-1)";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticConfig {
    pub t_min: f64,
    pub eps_lambda: f64,
    pub transmission: TransmissionConfig,
    pub reading: BetaReading,
    /// Multiplier of `q_sol`.
    pub c: f64,
    /// Signs applied to the principal `√θ″(ζᵢ)`.
    pub branch_signs: [f64; 4],
}

impl Default for AsymptoticConfig {
    fn default() -> Self {
        AsymptoticConfig {
            t_min: T_MIN,
            eps_lambda: DEFAULT_EPS_LAMBDA,
            transmission: TransmissionConfig::default(),
            reading: BETA_READING,
            c: 1.0,
            branch_signs: [1.0; 4],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticResult {
    pub x: f64,
    pub t: f64,
    pub xi: f64,
    pub q_sol_term: f64,
    pub f: C64,
    /// `Re(c·q_sol − t^{−1/2} f)`.
    pub q_asym: f64,
    pub q_asym_imag: f64,
    pub c: f64,
    /// `T(∞)`, `T₁` and `T(0)`, reported next to `c`.
    pub t_infinity: C64,
    pub t_first_moment: C64,
    pub t_at_zero: C64,
    pub active: Vec<usize>,
    pub error_order: String,
}

impl AsymptoticResult {
    pub fn q_asym_complex(&self) -> C64 {
        c(self.q_asym, self.q_asym_imag)
    }
}

/// Everything computed on the way to one `q_asym` value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Intermediates {
    pub saddles: SaddleRecord,
    pub sqrt_ddtheta: [C64; 4],
    pub pc: PCCoefficients,
    pub e1: Mat2,
    pub local_model_residue: Mat2,
    pub active: Vec<usize>,
    pub delta: Vec<usize>,
    pub result: AsymptoticResult,
}

struct RayData {
    saddles: SaddleSet,
    sqrt_dd: [C64; 4],
    transmission: PartialTransmission,
    active: Vec<usize>,
    modified: ReflectionlessData,
    t_at_zero: C64,
}

fn key(a: f64, b: f64) -> (u64, u64) {
    (a.to_bits(), b.to_bits())
}

/// Long-time evaluator for fixed scattering data.
///
/// Ray data (saddles, `T`, modified discrete data) is cached per `ξ` and
/// parabolic-cylinder coefficients per `(ξ, t)`; both caches are shared by
/// concurrent readers.
pub struct AsymptoticSolver {
    scat: ScatteringData,
    cfg: AsymptoticConfig,
    rays: RwLock<HashMap<u64, Arc<RayData>>>,
    pcs: RwLock<HashMap<(u64, u64), Arc<PCCoefficients>>>,
}

impl AsymptoticSolver {
    pub fn new(scat: ScatteringData) -> Self {
        AsymptoticSolver::with_config(scat, AsymptoticConfig::default())
    }

    pub fn with_config(scat: ScatteringData, cfg: AsymptoticConfig) -> Self {
        AsymptoticSolver {
            scat,
            cfg,
            rays: RwLock::new(HashMap::new()),
            pcs: RwLock::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &AsymptoticConfig {
        &self.cfg
    }

    pub fn scattering_data(&self) -> &ScatteringData {
        &self.scat
    }

    fn ray(&self, xi: f64) -> Result<Arc<RayData>> {
        if let Some(r) = self.rays.read().unwrap().get(&xi.to_bits()) {
            return Ok(r.clone());
        }
        let saddles = stationary_points(xi)?;
        if saddles.degenerate {
            return Err(Error::Region {
                xi,
                reason: "theta'' nearly vanishes at a stationary point".into(),
            });
        }
        let principal = saddles.sqrt_ddtheta();
        let mut sqrt_dd = principal;
        for (r, s) in sqrt_dd.iter_mut().zip(self.cfg.branch_signs) {
            *r *= s;
        }
        let transmission = partial_transmission_with(&self.scat, xi, &self.cfg.transmission)?;
        let active = soliton_activity(&self.scat.etas(), xi, self.cfg.eps_lambda);
        let modified = modify_for_lambda(&self.scat.poles, &active, self.scat.boundary, |z| transmission.evaluate(z))?;
        let t_at_zero = transmission.at_zero()?;
        let r = Arc::new(RayData {
            saddles,
            sqrt_dd,
            transmission,
            active,
            modified,
            t_at_zero,
        });
        self.rays.write().unwrap().insert(xi.to_bits(), r.clone());
        Ok(r)
    }

    fn pc(&self, ray: &RayData, t: f64) -> Result<Arc<PCCoefficients>> {
        let k = key(ray.saddles.xi, t);
        if let Some(p) = self.pcs.read().unwrap().get(&k) {
            return Ok(p.clone());
        }
        let p = Arc::new(pc_coefficients_with(
            &self.scat,
            &ray.saddles,
            &ray.transmission,
            &ray.sqrt_dd,
            t,
            self.cfg.reading,
        )?);
        self.pcs.write().unwrap().insert(k, p.clone());
        Ok(p)
    }

    fn check(&self, x: f64, t: f64) -> Result<f64> {
        if !(t >= self.cfg.t_min) {
            return Err(Error::Region {
                xi: x / t,
                reason: format!("t = {t} is below t_min = {}", self.cfg.t_min),
            });
        }
        Ok(x / t)
    }

    pub fn evaluate(&self, x: f64, t: f64) -> Result<AsymptoticResult> {
        Ok(self.evaluate_full(x, t)?.result)
    }

    pub fn evaluate_full(&self, x: f64, t: f64) -> Result<Intermediates> {
        let xi = self.check(x, t)?;
        let ray = self.ray(xi)?;
        let pc = self.pc(&ray, t)?;
        let outer = solve_outer(&ray.modified, x, t)?;
        let q_sol = outer.q_sol()?;
        let f = radiation_coefficient_f(&outer, &pc);
        let q = self.cfg.c * q_sol - f / t.sqrt();
        let result = AsymptoticResult {
            x,
            t,
            xi,
            q_sol_term: q_sol,
            f,
            q_asym: q.re,
            q_asym_imag: q.im,
            c: self.cfg.c,
            t_infinity: ray.transmission.t_infinity,
            t_first_moment: ray.transmission.first_moment(),
            t_at_zero: ray.t_at_zero,
            active: ray.active.clone(),
            error_order: ERROR_ORDER.to_string(),
        };
        Ok(Intermediates {
            saddles: ray.saddles.to_record(),
            sqrt_ddtheta: ray.sqrt_dd,
            e1: error_term_e1(&outer, &pc),
            local_model_residue: local_model_residue(&pc),
            pc: (*pc).clone(),
            active: ray.active.clone(),
            delta: ray.transmission.delta.clone(),
            result,
        })
    }

    /// Evaluations at `x = ξt` for each `t`, in parallel.
    pub fn ray_sweep(&self, xi: f64, ts: &[f64]) -> Result<Vec<AsymptoticResult>> {
        ts.par_iter().map(|&t| self.evaluate(xi * t, t)).collect()
    }

    /// Mapped ray data for external use: the outer solution at `(x, t)`.
    pub fn outer(&self, x: f64, t: f64) -> Result<crate::soliton::OuterSolution> {
        let xi = self.check(x, t)?;
        let ray = self.ray(xi)?;
        solve_outer(&ray.modified, x, t)
    }

    pub fn pc_coefficients(&self, x: f64, t: f64) -> Result<PCCoefficients> {
        let xi = self.check(x, t)?;
        let ray = self.ray(xi)?;
        Ok((*self.pc(&ray, t)?).clone())
    }
}

pub fn q_asymptotic(x: f64, t: f64, scat: &ScatteringData) -> Result<AsymptoticResult> {
    AsymptoticSolver::new(scat.clone()).evaluate(x, t)
}
