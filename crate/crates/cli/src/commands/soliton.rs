use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use nlmkdv::soliton::solve_outer;
use rayon::prelude::*;
use serde::Serialize;

use crate::output::Output;
use crate::parse::{default_residual, load_poles, PolesFile, Span};

#[derive(Args, Debug, Serialize)]
pub struct SolitonArgs {
    /// Poles JSON `{poles: [{eta, c_hat}], q_minus, sigma, delta}`; defaults
    /// to a single reality orbit.
    #[arg(long)]
    pub poles: Option<PathBuf>,
    #[arg(long, default_value = "-10:10:201", allow_hyphen_values = true)]
    pub x: Span,
    #[arg(long, default_value = "-1:1:21", allow_hyphen_values = true)]
    pub t: Span,
}

#[derive(Serialize)]
struct Summary {
    poles: PolesFile,
    reduction_defect: f64,
    max_abs_q: f64,
    max_condition: f64,
    points: usize,
}

pub fn run(a: &SolitonArgs, out: &Output) -> Result<()> {
    let data = load_poles(a.poles.as_deref(), default_residual)?;
    let xs = a.x.points();
    let ts = a.t.points();
    let rows = ts
        .par_iter()
        .map(|&t| {
            xs.iter()
                .map(|&x| {
                    let o = solve_outer(&data, x, t)?;
                    Ok((x, t, o.q_sol()?, o.condition))
                })
                .collect::<nlmkdv::Result<Vec<_>>>()
        })
        .collect::<nlmkdv::Result<Vec<_>>>()?
        .concat();
    let max_abs_q = rows.iter().map(|r| r.2.abs()).fold(0.0, f64::max);
    let max_condition = rows.iter().map(|r| r.3).fold(0.0, f64::max);
    let p = out.csv("soliton.csv", a, "x,t,q", rows.iter().map(|r| format!("{},{},{:e}", r.0, r.1, r.2)))?;
    let summary = Summary {
        poles: PolesFile::from_data(&data),
        reduction_defect: data.reduction_defect(),
        max_abs_q,
        max_condition,
        points: rows.len(),
    };
    out.json("soliton.json", "soliton", a, &summary)?;
    println!("max |q| = {max_abs_q:.6}, {} points ({})", rows.len(), p.display());
    Ok(())
}
