use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use nlmkdv::mat2::{to_pair, C64};
use nlmkdv::phase::contour_samples;
use nlmkdv::scattering::data::ScatteringDataFile;
use nlmkdv::scattering::jost::jost_solutions;
use nlmkdv::scattering::matrix::{from_jost, reflection_from_s};
use nlmkdv::scattering::spectrum::{discrete_spectrum_with, SearchConfig};
use nlmkdv::scattering::{ContourSample, InitialDatum, ScatteringData};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{read, Output};

#[derive(Args, Debug, Serialize)]
pub struct ScatterArgs {
    /// Initial datum JSON `{x0, h, n, values, q_minus, sigma, delta}`.
    #[arg(long)]
    pub datum: PathBuf,
    /// Points on the unit circle (and as many on the real axis).
    #[arg(long, default_value_t = 128)]
    pub n_contour: usize,
    /// Radial and angular mesh cells per component of D+.
    #[arg(long, default_value_t = 12)]
    pub mesh: usize,
}

#[derive(Serialize)]
struct Diagnostics {
    decay: (f64, f64),
    max_det_psi_defect: f64,
    max_det_s_defect: f64,
    winding_count: i64,
    zeros: Vec<ZeroOut>,
}

#[derive(Serialize)]
struct ZeroOut {
    eta: [f64; 2],
    c_hat: [f64; 2],
    proportionality: [f64; 2],
    ds11: [f64; 2],
}

#[derive(Serialize)]
struct Body {
    #[serde(flatten)]
    data: ScatteringDataFile,
    diagnostics: Diagnostics,
}

#[derive(Serialize)]
struct JostDump {
    z: [f64; 2],
    psi_minus: nlmkdv::mat2::Mat2,
    psi_plus: nlmkdv::mat2::Mat2,
    s: nlmkdv::mat2::Mat2,
    step_estimate: f64,
}

pub fn run(a: &ScatterArgs, out: &Output) -> Result<()> {
    let datum = InitialDatum::from_json(&read(&a.datum)?)?;
    datum.check_decay()?;
    let zs: Vec<C64> = contour_samples(a.n_contour, 0.05, 20.0);
    let computed = zs
        .par_iter()
        .map(|&z| {
            let jp = jost_solutions(&datum, z)?;
            let s = from_jost(&jp)?;
            let r = reflection_from_s(z, &s)?;
            Ok((jp, s, r))
        })
        .collect::<nlmkdv::Result<Vec<_>>>()?;
    let mut det_psi: f64 = 0.0;
    let mut det_s: f64 = 0.0;
    for (jp, s, _) in &computed {
        let target = 1.0 + (jp.z * jp.z).inv();
        det_psi = det_psi.max((jp.minus.det() - target).norm()).max((jp.plus.det() - target).norm());
        det_s = det_s.max((s.det() - 1.0).norm());
    }
    let cfg = SearchConfig {
        n_radial: a.mesh,
        n_angular: a.mesh,
        ..SearchConfig::default()
    };
    let spec = discrete_spectrum_with(&datum, &cfg)?;
    let samples = computed
        .iter()
        .map(|(_, _, r)| ContourSample {
            z: r.z,
            rho: r.rho,
            rho_tilde: r.rho_tilde,
        })
        .collect();
    let poles = spec.zeros.iter().map(|z| z.pole()).collect();
    let data = ScatteringData::new(samples, poles, C64::new(1.0, 0.0), datum.boundary)?;
    let body = Body {
        data: data.to_file(),
        diagnostics: Diagnostics {
            decay: datum.decay(),
            max_det_psi_defect: det_psi,
            max_det_s_defect: det_s,
            winding_count: spec.winding_count,
            zeros: spec
                .zeros
                .iter()
                .map(|z| ZeroOut {
                    eta: to_pair(z.eta),
                    c_hat: to_pair(z.c_hat),
                    proportionality: to_pair(z.proportionality),
                    ds11: to_pair(z.ds11),
                })
                .collect(),
        },
    };
    let p = out.json("scattering.json", "scatter", a, &body)?;
    println!("max |det s - 1| = {det_s:.3e}");
    println!("max |det psi - (1 + z^-2)| = {det_psi:.3e}");
    println!("discrete eigenvalues: {}", spec.zeros.len());
    println!("wrote {}", p.display());
    if out.dump {
        let dump: Vec<JostDump> = computed
            .iter()
            .map(|(jp, s, _)| JostDump {
                z: to_pair(jp.z),
                psi_minus: jp.minus,
                psi_plus: jp.plus,
                s: *s,
                step_estimate: jp.step_estimate,
            })
            .collect();
        out.json("scatter_intermediates.json", "scatter", a, &serde_json::json!({ "jost": dump }))?;
    }
    Ok(())
}
