use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use nlmkdv::asymptotics::{AsymptoticConfig, AsymptoticResult, AsymptoticSolver, BetaReading, Intermediates, ERROR_ORDER};
use nlmkdv::fixtures;
use nlmkdv::scattering::ScatteringData;
use nlmkdv::verify::{ray_decay, RayDecay};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::Output;
use crate::parse::FloatList;

#[derive(Args, Debug, Serialize)]
pub struct AsymArgs {
    /// Scattering data JSON (as written by `scatter`); defaults to the
    /// bundled radiation fixture.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Comma-separated rays `ξ = x/t`.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: FloatList,
    /// Comma-separated times, each at least 10.
    #[arg(long, default_value = "100,1000,10000")]
    pub t: FloatList,
    /// Multiplier of `q_sol`.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Damping factor in β: `e^{−πν/2}` or the literal `e^{−π/2}·ν`.
    #[arg(long, value_enum, default_value = "exponent-nu")]
    pub reading: ReadingArg,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReadingArg {
    ExponentNu,
    Literal,
}

impl From<ReadingArg> for BetaReading {
    fn from(r: ReadingArg) -> Self {
        match r {
            ReadingArg::ExponentNu => BetaReading::ExponentNu,
            ReadingArg::Literal => BetaReading::Literal,
        }
    }
}

pub fn load_data(path: Option<&std::path::Path>) -> Result<ScatteringData> {
    Ok(match path {
        Some(p) => ScatteringData::load(p)?,
        None => fixtures::radiation_fixture()?,
    })
}

#[derive(Serialize)]
struct Body<'a> {
    error_order: &'static str,
    c: f64,
    results: &'a [AsymptoticResult],
    decay: Vec<RayDecay>,
}

pub fn run(a: &AsymArgs, out: &Output) -> Result<()> {
    let xis = &a.xi.0;
    let ts = &a.t.0;
    let cfg = AsymptoticConfig {
        c: a.c,
        reading: a.reading.into(),
        ..AsymptoticConfig::default()
    };
    let solver = AsymptoticSolver::with_config(load_data(a.data.as_deref())?, cfg);
    let full: Vec<Intermediates> = xis
        .par_iter()
        .flat_map_iter(|&xi| ts.iter().map(move |&t| (xi, t)))
        .map(|(xi, t)| solver.evaluate_full(xi * t, t))
        .collect::<nlmkdv::Result<_>>()?;
    let results: Vec<AsymptoticResult> = full.iter().map(|i| i.result.clone()).collect();
    // A fit needs two decades; skip it for shorter sweeps.
    let decay = xis.iter().filter_map(|&xi| ray_decay(&solver, xi, ts).ok()).collect::<Vec<_>>();
    out.csv(
        "asym.csv",
        a,
        "xi,t,q_sol,re_f,im_f,q_asym,error_order",
        results.iter().map(|r| {
            format!(
                "{},{},{:e},{:e},{:e},{:e},{}",
                r.xi, r.t, r.q_sol_term, r.f.re, r.f.im, r.q_asym, r.error_order
            )
        }),
    )?;
    out.json(
        "asym.json",
        "asym",
        a,
        &Body {
            error_order: ERROR_ORDER,
            c: a.c,
            results: &results,
            decay: decay.clone(),
        },
    )?;
    if out.dump {
        out.json(
            "asym_intermediates.json",
            "asym",
            a,
            &serde_json::json!({ "error_order": ERROR_ORDER, "points": full }),
        )?;
    }
    for d in &decay {
        println!(
            "xi = {}: slope {:.9} (normalized), {:.6} (raw) {}",
            d.xi, d.normalized.slope, d.raw.slope, d.error_order
        );
    }
    for r in results.iter().take(8) {
        println!("xi = {}, t = {}: q_asym = {:.9e} + {}", r.xi, r.t, r.q_asym, r.error_order);
    }
    Ok(())
}
