//! Geometry of the uniformized spectral plane.
//!
//! The two-sheeted relation `λ² − k² = 1` is resolved by `z = k + λ`, so that
//! `k = (z − 1/z)/2` and `λ = (z + 1/z)/2`.  The continuous spectrum is
//! `Σ = ℝ ∪ {|z| = 1}` and the analyticity domains are
//! `D± = {(|z| − 1) Im z ≷ 0}`.
//!
//! # Phase and stationary points
//!
//! With `θ(z; x, t) = λ [x + (4k² − 2) t]` one has `4k² − 2 = z² + z⁻² − 4`,
//! hence
//!
//! ```text
//! θ(z; x, t) = ½ [ t (z³ + z⁻³) + (x − 3t)(z + z⁻¹) ].
//! ```
//!
//! Along a ray `x = ξ t` put `t = 1`.  Then
//!
//! ```text
//! 2 z⁴ θ′(z) = (z² − 1)(3 z⁴ + ξ z² + 3),
//! ```
//!
//! so besides `z = ±1` the stationary points solve `3 z⁴ + ξ z² + 3 = 0`.
//! For `|ξ| < 6` the two roots in `z²` are complex conjugate with product 1,
//! i.e. they lie on the unit circle: `cos 2φ = −ξ/6`, equivalently
//! `sin² φ = (ξ + 6)/12`.  On `z = e^{iφ}` the phase is real,
//! `θ = cos φ (ξ − 2 − 4 sin² φ)`, with
//! `dθ/dφ = −sin φ (ξ + 6 − 12 sin² φ)`, which vanishes at the same angles.
//! The four points are labelled by quadrant: `ζ₁ = e^{iφ}`, `ζ₂ = −ζ̄₁`,
//! `ζ₃ = −ζ₁`, `ζ₄ = ζ̄₁`.  As `ξ → −6` they collapse onto `z = ±1`, and as
//! `ξ → 6` onto `z = ±i`; in both limits `θ″(ζᵢ) → 0`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::mat2::{c, to_pair, C64, I};
use crate::{Error, Result};

/// Distance from Σ below which a point is classified as lying on it.
pub const CONTOUR_TOL: f64 = 1e-12;

/// `|Re(2iθ)|` below which a signature-table cell reports `0`.
pub const SIGNATURE_TOL: f64 = 1e-10;

/// Default threshold for soliton activity; only velocity-matched poles pass.
pub const DEFAULT_EPS_LAMBDA: f64 = 1e-8;

/// Stationary points with `min |θ″(ζᵢ)|` below this are flagged degenerate.
pub const DEGENERACY_TOL: f64 = 1e-6;

const NEWTON_TOL: f64 = 1e-13;
const NEWTON_MAX_ITER: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    DPlus,
    DMinus,
    Contour,
}

#[derive(Clone, Copy, Debug)]
pub struct UniformizedPoint {
    pub z: C64,
    pub k: C64,
    pub lambda: C64,
    pub region: Region,
}

pub fn classify(z: C64) -> Region {
    let r = z.norm();
    if z.im.abs() < CONTOUR_TOL || (r - 1.0).abs() < CONTOUR_TOL {
        Region::Contour
    } else if (r - 1.0) * z.im > 0.0 {
        Region::DPlus
    } else {
        Region::DMinus
    }
}

pub fn uniformize(z: C64) -> Result<UniformizedPoint> {
    if z == c(0.0, 0.0) {
        return Err(Error::Domain("z = 0 is a pole of the uniformization".into()));
    }
    let zi = z.inv();
    Ok(UniformizedPoint {
        z,
        k: 0.5 * (z - zi),
        lambda: 0.5 * (z + zi),
        region: classify(z),
    })
}

#[derive(Clone, Copy, Debug)]
pub struct PhaseValue {
    pub theta: C64,
    pub dtheta: C64,
    pub ddtheta: C64,
    pub re2itheta: f64,
}

/// `θ(z; x, t)` together with its first two `z`-derivatives.
pub fn phase(z: C64, x: f64, t: f64) -> Result<PhaseValue> {
    if z == c(0.0, 0.0) {
        return Err(Error::Domain("phase is singular at z = 0".into()));
    }
    Ok(phase_unchecked(z, x, t))
}

#[inline]
pub(crate) fn phase_unchecked(z: C64, x: f64, t: f64) -> PhaseValue {
    let zi = z.inv();
    let zi2 = zi * zi;
    let zi3 = zi2 * zi;
    let z2 = z * z;
    let s = x - 3.0 * t;
    let theta = 0.5 * (t * (z2 * z + zi3) + s * (z + zi));
    let dtheta = 0.5 * (3.0 * t * (z2 - zi2 * zi2) + s * (1.0 - zi2));
    let ddtheta = 3.0 * t * (z + 2.0 * zi3 * zi2) + s * zi3;
    PhaseValue {
        theta,
        dtheta,
        ddtheta,
        re2itheta: (2.0 * I * theta).re,
    }
}

/// `θ(z; x, t)` only.
#[inline]
pub fn theta(z: C64, x: f64, t: f64) -> C64 {
    phase_unchecked(z, x, t).theta
}

/// The four unit-circle stationary points of `θ(·; ξ, 1)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SaddleSet {
    pub xi: f64,
    pub zeta: [C64; 4],
    pub theta_at: [C64; 4],
    pub ddtheta_at: [C64; 4],
    /// Set when `θ″` nearly vanishes (ray close to `ξ = ±6`).
    pub degenerate: bool,
}

impl SaddleSet {
    /// Principal square roots of `θ″(ζᵢ)`.
    pub fn sqrt_ddtheta(&self) -> [C64; 4] {
        self.ddtheta_at.map(|d| d.sqrt())
    }

    /// Square roots of `θ″(ζᵢ)` continued from a neighbouring ray: each root
    /// takes the sign closer to `previous`.
    pub fn sqrt_ddtheta_continued(&self, previous: &[C64; 4]) -> [C64; 4] {
        let mut out = self.sqrt_ddtheta();
        for (r, p) in out.iter_mut().zip(previous) {
            if (*r - *p).norm() > (*r + *p).norm() {
                *r = -*r;
            }
        }
        out
    }

    pub fn to_record(&self) -> SaddleRecord {
        SaddleRecord {
            xi: self.xi,
            zeta: self.zeta.map(to_pair),
            theta: self.theta_at.map(to_pair),
            ddtheta: self.ddtheta_at.map(to_pair),
        }
    }
}

/// JSON form of a saddle set.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SaddleRecord {
    pub xi: f64,
    pub zeta: [[f64; 2]; 4],
    pub theta: [[f64; 2]; 4],
    pub ddtheta: [[f64; 2]; 4],
}

/// Closed-form `ζ₁` for the ray `ξ`: the first-quadrant root of
/// `3 w² + ξ w + 3 = 0`, `w = z²`.
pub fn zeta1_closed_form(xi: f64) -> C64 {
    let w = c(-xi, (36.0 - xi * xi).max(0.0).sqrt()) / 6.0;
    w.sqrt()
}

/// Newton refinement of a root of `θ′(·; ξ, 1)`.
pub fn refine_stationary_point(xi: f64, seed: C64) -> Result<C64> {
    let mut z = seed;
    for _ in 0..NEWTON_MAX_ITER {
        let p = phase_unchecked(z, xi, 1.0);
        if p.dtheta.norm() < NEWTON_TOL {
            return Ok(z);
        }
        if p.ddtheta.norm() == 0.0 {
            break;
        }
        z -= p.dtheta / p.ddtheta;
        if !z.re.is_finite() || !z.im.is_finite() {
            break;
        }
    }
    let p = phase_unchecked(z, xi, 1.0);
    if p.dtheta.norm() < NEWTON_TOL {
        Ok(z)
    } else {
        Err(Error::Convergence(format!(
            "Newton on θ′ from seed {seed} stalled at |θ′| = {:.3e}",
            p.dtheta.norm()
        )))
    }
}

fn check_ray(xi: f64) -> Result<()> {
    if !(xi > -6.0 && xi < 6.0) {
        return Err(Error::Region {
            xi,
            reason: "stationary points leave the unit circle outside -6 < x/t < 6".into(),
        });
    }
    Ok(())
}

pub fn stationary_points(xi: f64) -> Result<SaddleSet> {
    stationary_points_from_seed(xi, zeta1_closed_form(xi))
}

/// Same as [`stationary_points`] but starting Newton from an arbitrary seed
/// for `ζ₁`; the other three seeds follow by symmetry.
pub fn stationary_points_from_seed(xi: f64, seed1: C64) -> Result<SaddleSet> {
    check_ray(xi)?;
    let z1 = refine_stationary_point(xi, seed1)?;
    // project back onto the circle; Newton may drift by rounding only
    let z1 = z1 / z1.norm();
    let zeta = [z1, -z1.conj(), -z1, z1.conj()];
    let mut theta_at = [C64::default(); 4];
    let mut ddtheta_at = [C64::default(); 4];
    for i in 0..4 {
        let p = phase_unchecked(zeta[i], xi, 1.0);
        theta_at[i] = p.theta;
        ddtheta_at[i] = p.ddtheta;
    }
    let degenerate = ddtheta_at.iter().any(|d| d.norm() < DEGENERACY_TOL);
    Ok(SaddleSet {
        xi,
        zeta,
        theta_at,
        ddtheta_at,
        degenerate,
    })
}

/// Saddle sets along a sweep of rays with `√θ″` continued in `ξ`.
pub fn sweep_sqrt_branches(xis: &[f64]) -> Result<Vec<(SaddleSet, [C64; 4])>> {
    let mut out: Vec<(SaddleSet, [C64; 4])> = Vec::with_capacity(xis.len());
    for &xi in xis {
        let s = stationary_points(xi)?;
        let roots = match out.last() {
            Some((_, prev)) => s.sqrt_ddtheta_continued(prev),
            None => s.sqrt_ddtheta(),
        };
        out.push((s, roots));
    }
    Ok(out)
}

/// Rectangular lattice `[re_min, re_max] × [im_min, im_max]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Grid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
}

impl Grid {
    pub fn square(lo: f64, hi: f64, n: usize) -> Self {
        Grid {
            re_min: lo,
            re_max: hi,
            im_min: lo,
            im_max: hi,
            n_re: n,
            n_im: n,
        }
    }

    fn axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
        if n <= 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    }

    pub fn point(&self, i_re: usize, i_im: usize) -> C64 {
        c(
            Self::axis(self.re_min, self.re_max, self.n_re, i_re),
            Self::axis(self.im_min, self.im_max, self.n_im, i_im),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignatureCell {
    pub z: C64,
    pub sign: i8,
}

/// Sign of `Re(2iθ(z; ξ, 1))`, with `0` on Σ and below [`SIGNATURE_TOL`].
pub fn signature_at(xi: f64, z: C64) -> i8 {
    if classify(z) == Region::Contour {
        return 0;
    }
    let r = phase_unchecked(z, xi, 1.0).re2itheta;
    if r.abs() < SIGNATURE_TOL {
        0
    } else if r > 0.0 {
        1
    } else {
        -1
    }
}

/// Signature table over a lattice; `z = 0` is skipped.  Rows are evaluated in
/// parallel and concatenated in row order.
pub fn signature_table(xi: f64, grid: &Grid) -> Vec<SignatureCell> {
    (0..grid.n_im)
        .into_par_iter()
        .map(|j| {
            (0..grid.n_re)
                .filter_map(|i| {
                    let z = grid.point(i, j);
                    (z != c(0.0, 0.0)).then(|| SignatureCell {
                        z,
                        sign: signature_at(xi, z),
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .concat()
}

/// Points on Σ: `n` equally spaced angles on the unit circle, offset by half
/// a step so that `±i` is never hit, and `n` real
/// points in `±[r_min, r_max]`, log-spaced.
pub fn contour_samples(n: usize, r_min: f64, r_max: f64) -> Vec<C64> {
    let mut pts: Vec<C64> = (0..n)
        .map(|j| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n as f64))
        .collect();
    let half = n / 2;
    for j in 0..half {
        let s = if half > 1 { j as f64 / (half - 1) as f64 } else { 0.0 };
        let r = r_min * (r_max / r_min).powf(s);
        pts.push(c(r, 0.0));
        pts.push(c(-r, 0.0));
    }
    pts
}

/// Indices of poles whose exponential `e^{2itθ(η)}` is neither growing nor
/// decaying on the ray: `|Re(2iθ(η; ξ, 1))| <= eps_lambda`.
pub fn soliton_activity(eta: &[C64], xi: f64, eps_lambda: f64) -> Vec<usize> {
    eta.iter()
        .enumerate()
        .filter(|(_, &e)| e != c(0.0, 0.0) && phase_unchecked(e, xi, 1.0).re2itheta.abs() <= eps_lambda)
        .map(|(k, _)| k)
        .collect()
}

/// Indices of poles with `Re(2iθ(η; ξ, 1)) < −eps_lambda`, i.e. whose residue
/// factor `e^{−2itθ(η)}` grows along the ray.
pub fn growing_set(eta: &[C64], xi: f64, eps_lambda: f64) -> Vec<usize> {
    eta.iter()
        .enumerate()
        .filter(|(_, &e)| e != c(0.0, 0.0) && phase_unchecked(e, xi, 1.0).re2itheta < -eps_lambda)
        .map(|(k, _)| k)
        .collect()
}

/// Ray on which a pole is velocity-matched: the root of
/// `ξ ↦ Re(2iθ(η; ξ, 1))`.  The map is affine in `ξ`.
pub fn matched_ray(eta: C64) -> Option<f64> {
    let a = phase_unchecked(eta, 0.0, 1.0).re2itheta;
    let b = phase_unchecked(eta, 1.0, 1.0).re2itheta - a;
    (b.abs() > 0.0).then(|| -a / b)
}
