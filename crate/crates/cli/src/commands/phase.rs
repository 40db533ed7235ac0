use anyhow::Result;
use clap::Args;
use nlmkdv::mat2::{to_pair, C64};
use nlmkdv::phase::{classify, signature_at, signature_table, stationary_points, Grid, Region};
use serde::Serialize;

use crate::output::Output;
use crate::parse::Span;

#[derive(Args, Debug, Serialize)]
pub struct PhaseArgs {
    /// Ray x/t.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: f64,
    /// Square lattice `lo:hi:n` for the signature table.
    #[arg(long, default_value = "-3:3:200", allow_hyphen_values = true)]
    pub grid: Span,
    /// Unit-circle samples appended to the table.
    #[arg(long, default_value_t = 360)]
    pub circle: usize,
}

#[derive(Serialize)]
struct SaddleOut {
    xi: f64,
    zeta: [[f64; 2]; 4],
    theta: [[f64; 2]; 4],
    ddtheta: [[f64; 2]; 4],
    sqrt_ddtheta: [[f64; 2]; 4],
    degenerate: bool,
}

pub fn run(a: &PhaseArgs, out: &Output) -> Result<()> {
    let s = stationary_points(a.xi)?;
    let rec = s.to_record();
    let body = SaddleOut {
        xi: rec.xi,
        zeta: rec.zeta,
        theta: rec.theta,
        ddtheta: rec.ddtheta,
        sqrt_ddtheta: s.sqrt_ddtheta().map(to_pair),
        degenerate: s.degenerate,
    };
    let p = out.json("saddles.json", "phase", a, &body)?;
    println!("zeta1 = {:.12} ({})", s.zeta[0], p.display());

    let grid = Grid::square(a.grid.lo, a.grid.hi, a.grid.n);
    let mut rows: Vec<String> = signature_table(a.xi, &grid)
        .into_iter()
        .map(|cell| row(a.xi, cell.z, cell.sign, "lattice"))
        .collect();
    for j in 0..a.circle {
        let z = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / a.circle as f64);
        if classify(z) == Region::Contour {
            rows.push(row(a.xi, z, signature_at(a.xi, z), "circle"));
        }
    }
    let p = out.csv("signature.csv", a, "re,im,kind,signature,re_2itheta", rows)?;
    println!("signature table: {}", p.display());
    Ok(())
}

fn row(xi: f64, z: C64, sign: i8, kind: &str) -> String {
    let r = nlmkdv::phase::phase(z, xi, 1.0).map(|p| p.re2itheta).unwrap_or(f64::NAN);
    format!("{},{},{kind},{sign},{r:e}", z.re, z.im)
}
