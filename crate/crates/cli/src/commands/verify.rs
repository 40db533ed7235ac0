use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Subcommand, ValueEnum};
use nlmkdv::asymptotics::{AsymptoticConfig, AsymptoticSolver};
use nlmkdv::fixtures;
use nlmkdv::verify::{
    decay_fit, evolution_cross_check, ray_decay, residual_scaling, symmetry_suite, PeriodicGrid, ResidualGrid, Scheme, SuiteConfig,
};
use serde::Serialize;

use super::asym::{load_data, ReadingArg};
use crate::output::{read, Output};
use crate::parse::{default_residual, load_poles, FloatList, PolesFile, Span};

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// PDE residual of the reflectionless solution by central differences.
    Residual(ResidualArgs),
    /// Log-log decay fit, from samples or from an asymptotic sweep.
    Decay(DecayArgs),
    /// Split-step evolution compared with the exact solution.
    Evolve(EvolveArgs),
    /// Fixed battery of identities; exits 1 if any fails.
    Suite(SuiteArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct ResidualArgs {
    #[arg(long, conflicts_with = "orbits")]
    pub poles: Option<PathBuf>,
    /// Use the built-in solution with this many reality orbits (1 to 3).
    #[arg(long)]
    pub orbits: Option<usize>,
    #[arg(long, default_value = "-8:8:40", allow_hyphen_values = true)]
    pub x: Span,
    #[arg(long, default_value = "-1:1:40", allow_hyphen_values = true)]
    pub t: Span,
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct DecayArgs {
    /// CSV of `t,value` rows; `#` lines and a header are skipped.
    #[arg(long, conflicts_with_all = ["xi", "data"])]
    pub samples: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<f64>,
    #[arg(long, default_value = "100,1000,10000")]
    pub t: FloatList,
    #[arg(long)]
    pub data: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeArg {
    Strang,
    Yoshida4,
    IntegratingFactorRk4,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Strang => Scheme::Strang,
            SchemeArg::Yoshida4 => Scheme::Yoshida4,
            SchemeArg::IntegratingFactorRk4 => Scheme::IntegratingFactorRk4,
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct EvolveArgs {
    /// Real solution to evolve; defaults to a single slowly moving orbit.
    #[arg(long)]
    pub poles: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub span: f64,
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    #[arg(long, default_value_t = 150.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, value_enum, default_value = "yoshida4")]
    pub scheme: SchemeArg,
}

#[derive(Args, Debug, Serialize)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = SuiteConfig::default().seed)]
    pub seed: u64,
    #[arg(long, default_value_t = SuiteConfig::default().random_samples)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "exponent-nu")]
    pub reading: ReadingArg,
}

pub fn run(cmd: &VerifyCommand, out: &Output) -> Result<()> {
    match cmd {
        VerifyCommand::Residual(a) => residual(a, out),
        VerifyCommand::Decay(a) => decay(a, out),
        VerifyCommand::Evolve(a) => evolve(a, out),
        VerifyCommand::Suite(a) => suite(a, out),
    }
}

fn residual(a: &ResidualArgs, out: &Output) -> Result<()> {
    let data = match a.orbits {
        Some(n) => fixtures::residual_solution(n)?,
        None => load_poles(a.poles.as_deref(), default_residual)?,
    };
    let grid = ResidualGrid::new((a.x.lo, a.x.hi), (a.t.lo, a.t.hi), a.x.n, a.t.n);
    let sc = residual_scaling(&data, grid, a.h)?;
    out.csv(
        "residual.csv",
        a,
        "x,t,r",
        sc.coarse.field.iter().map(|p| format!("{:.12e},{:.12e},{:.12e}", p.x, p.t, p.r)),
    )?;
    #[derive(Serialize)]
    struct Body<'a> {
        poles: PolesFile,
        max_residual: f64,
        argmax: (f64, f64),
        max_residual_half_step: f64,
        ratio: f64,
        coarse: &'a nlmkdv::verify::ResidualReport,
    }
    out.json(
        "residual.json",
        "verify residual",
        a,
        &Body {
            poles: PolesFile::from_data(&data),
            max_residual: sc.coarse.max_residual,
            argmax: sc.coarse.argmax,
            max_residual_half_step: sc.fine.max_residual,
            ratio: sc.ratio,
            coarse: &sc.coarse,
        },
    )?;
    println!(
        "max residual {:.3e} at (x, t) = ({:.4}, {:.4}); h/2: {:.3e}, ratio {:.3}",
        sc.coarse.max_residual, sc.coarse.argmax.0, sc.coarse.argmax.1, sc.fine.max_residual, sc.ratio
    );
    Ok(())
}

fn read_samples(path: &std::path::Path) -> Result<Vec<(f64, f64)>> {
    let mut v = Vec::new();
    for (i, line) in read(path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split(',').map(|s| s.trim().parse::<f64>());
        match (it.next(), it.next()) {
            (Some(Ok(t)), Some(Ok(y))) => v.push((t, y)),
            _ if v.is_empty() => continue,
            _ => bail!("{}:{}: expected t,value", path.display(), i + 1),
        }
    }
    Ok(v)
}

fn decay(a: &DecayArgs, out: &Output) -> Result<()> {
    if let Some(p) = &a.samples {
        let fit = decay_fit(&read_samples(p)?)?;
        out.json("decay.json", "verify decay", a, &serde_json::json!({ "fit": fit }))?;
        println!("slope {:.9} ± {:.3e} ({} samples)", fit.slope, fit.slope_stderr, fit.n);
        return Ok(());
    }
    let xi = a.xi.ok_or_else(|| anyhow!("pass --samples or --xi"))?;
    let solver = AsymptoticSolver::with_config(load_data(a.data.as_deref())?, AsymptoticConfig::default());
    let d = ray_decay(&solver, xi, &a.t.0)?;
    out.json("decay.json", "verify decay", a, &d)?;
    println!(
        "xi = {xi}: normalized slope {:.9} ± {:.3e}, raw slope {:.6} {}",
        d.normalized.slope, d.normalized.slope_stderr, d.raw.slope, d.error_order
    );
    Ok(())
}

fn evolve(a: &EvolveArgs, out: &Output) -> Result<()> {
    let data = load_poles(a.poles.as_deref(), fixtures::evolution_solution)?;
    let grid = PeriodicGrid {
        half_width: a.half_width,
        n: a.n,
    };
    let ev = evolution_cross_check(&data, a.t0, a.span, grid, a.dt, a.scheme.into())?;
    let stride = (a.n / 1024).max(1);
    out.csv(
        "evolve.csv",
        a,
        "x,q_split,q_exact",
        (0..ev.x.len())
            .step_by(stride)
            .map(|j| format!("{},{:e},{:e}", ev.x[j], ev.q_split[j], ev.q_exact[j])),
    )?;
    out.json(
        "evolve.json",
        "verify evolve",
        a,
        &serde_json::json!({ "poles": PolesFile::from_data(&data), "check": ev }),
    )?;
    println!(
        "sup error {:.3e} at x = {:.3}, Casimir drift {:.3e}, edge mismatch {:.3e}",
        ev.sup_error, ev.argmax, ev.casimir_drift, ev.edge_mismatch
    );
    Ok(())
}

fn suite(a: &SuiteArgs, out: &Output) -> Result<()> {
    let cfg = SuiteConfig {
        seed: a.seed,
        random_samples: a.samples,
        reading: a.reading.into(),
    };
    let report = symmetry_suite(&cfg);
    out.json("suite.json", "verify suite", a, &report)?;
    for e in &report.entries {
        println!(
            "{} {:<24} {:.3e} (tol {:.1e})",
            if e.passed { "PASS" } else { "FAIL" },
            e.name,
            e.value,
            e.tolerance
        );
    }
    if !report.all_passed {
        let failed: Vec<&str> = report.entries.iter().filter(|e| !e.passed).map(|e| e.name.as_str()).collect();
        bail!("suite failed: {}", failed.join(", "));
    }
    Ok(())
}
