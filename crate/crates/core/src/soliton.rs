//! Reflectionless outer model and the N-soliton potential.
//!
//! The outer model `m(z)` is meromorphic on `ℂ \ {0}`, tends to `I` at
//! infinity and obeys the uniformization symmetry
//! `m(−1/z) = −i z m(z) σ₃Q₋`, which fixes its singular part at the origin to
//! `(i/z) σ₃Q₋`.  Each pole `η ∈ D₊` carries a column-1 residue
//!
//! ```text
//! Res_{η} m = lim_{z→η} m(z) [[0, 0], [Ĉ e^{−2iθ(η)}, 0]]
//! ```
//!
//! and, through the symmetry, its mirror `η̂ = −1/η ∈ D₋` carries a column-2
//! residue with nilpotent `[[0, (Ĉ/η²) e^{2iθ(η̂)}], [0, 0]]`.  Writing
//! `r_j` and `r̂_j` for the residue vectors, the ansatz
//!
//! ```text
//! m(z) = I + (i/z) σ₃Q₋ + Σ_j r_j e₁ᵀ/(z − η_j) + Σ_j r̂_j e₂ᵀ/(z − η̂_j)
//! ```
//!
//! turns the residue conditions into a `2N × 2N` linear system shared by both
//! vector components.  The potential is `q = −i (m₁)₁₂` with `m₁` the `1/z`
//! coefficient at infinity.
//!
//! # Nonlocal reduction
//!
//! The dressing construction yields a solution of the coupled system with
//! `Q = [[0, q], [r, 0]]`.  The reduction `r(x, t) = σ q(−x, −t)` holds when
//! the pole set satisfies `Π_j (−1/η_j²) = δ` and the constants satisfy
//! `Ĉ_j² = −σ δ Π₀⁻¹ a_j²` with `a_j = Res_{η_j} Π_l (z − η̂_l)/(z − η_l)`;
//! reality of `q` additionally needs the set closed under `η ↦ −η̄` with
//! `Ĉ(−η̄) = −conj Ĉ(η)`.  [`ReflectionlessData::nonlocal`] builds constants
//! obeying these rules.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::mat2::{c, from_pair, to_pair, Mat2, C64, I};
use crate::phase::{classify, theta, Region};
use crate::scattering::boundary::BoundaryData;
use crate::{Error, Result};

/// Conditioning limit for the residue system.
pub const MAX_CONDITION: f64 = 1e12;

/// Imaginary part tolerated in the recovered potential before it is
/// considered a convention error.
pub const REALITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub eta: C64,
    pub c_hat: C64,
}

/// JSON form `{eta: [re, im], c_hat: [re, im]}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleRecord {
    pub eta: [f64; 2],
    pub c_hat: [f64; 2],
}

impl From<Pole> for PoleRecord {
    fn from(p: Pole) -> Self {
        PoleRecord {
            eta: to_pair(p.eta),
            c_hat: to_pair(p.c_hat),
        }
    }
}

impl From<PoleRecord> for Pole {
    fn from(p: PoleRecord) -> Self {
        Pole {
            eta: from_pair(p.eta),
            c_hat: from_pair(p.c_hat),
        }
    }
}

#[inline]
pub fn mirror(eta: C64) -> C64 {
    -eta.inv()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReflectionlessData {
    pub poles: Vec<Pole>,
    pub boundary: BoundaryData,
}

impl ReflectionlessData {
    pub fn new(poles: Vec<Pole>, boundary: BoundaryData) -> Result<Self> {
        let data = ReflectionlessData { poles, boundary };
        data.validate()?;
        Ok(data)
    }

    pub fn empty(boundary: BoundaryData) -> Self {
        ReflectionlessData {
            poles: Vec::new(),
            boundary,
        }
    }

    fn validate(&self) -> Result<()> {
        for (k, p) in self.poles.iter().enumerate() {
            if p.eta.norm() < 1e-12 || (p.eta - I).norm() < 1e-12 || (p.eta + I).norm() < 1e-12 {
                return Err(Error::Invalid(format!("pole {k} at {} is 0 or ±i", p.eta)));
            }
            if classify(p.eta) == Region::Contour {
                return Err(Error::Invalid(format!("pole {k} at {} lies on Σ", p.eta)));
            }
            for q in &self.poles[..k] {
                if (q.eta - p.eta).norm() < 1e-12 {
                    return Err(Error::Invalid(format!("pole {} repeated", p.eta)));
                }
            }
            for q in &self.poles {
                if (mirror(q.eta) - p.eta).norm() < 1e-12 {
                    return Err(Error::Invalid(format!("pole {} coincides with a mirror", p.eta)));
                }
            }
        }
        Ok(())
    }

    pub fn etas(&self) -> Vec<C64> {
        self.poles.iter().map(|p| p.eta).collect()
    }

    /// Reflectionless data compatible with `r(x, t) = σ q(−x, −t)`.
    ///
    /// `signs[j] = ±1` picks the root for `Ĉ_j`; signs must agree within
    /// each `η ↦ −η̄` pair for the potential to be real.
    pub fn nonlocal(etas: &[C64], signs: &[f64], boundary: BoundaryData) -> Result<Self> {
        if etas.len() != signs.len() {
            return Err(Error::Invalid("one sign per pole required".into()));
        }
        let pi0 = mirror_product(etas);
        if (pi0 - c(boundary.delta as f64, 0.0)).norm() > 1e-10 {
            return Err(Error::Invalid(format!(
                "pole set violates the nonlocal constraint: Π(−1/η²) = {pi0}, δ = {}",
                boundary.delta
            )));
        }
        let gamma2 = c(boundary.delta as f64, 0.0) / pi0;
        let scale = (c(-boundary.sigma as f64, 0.0) * gamma2).sqrt();
        let poles = etas
            .iter()
            .zip(signs)
            .enumerate()
            .map(|(j, (&eta, &s))| Pole {
                eta,
                c_hat: scale * s * blaschke_residue(etas, j),
            })
            .collect();
        ReflectionlessData::new(poles, boundary)
    }

    /// `max_j |Ĉ_j² − (−σδ/Π₀) a_j²| / |a_j²|`, zero for exactly reduced data.
    pub fn reduction_defect(&self) -> f64 {
        let etas = self.etas();
        if etas.is_empty() {
            return 0.0;
        }
        let pi0 = mirror_product(&etas);
        let target = c(-(self.boundary.sigma * self.boundary.delta) as f64, 0.0) / pi0;
        let mut worst = (pi0 - c(self.boundary.delta as f64, 0.0)).norm();
        for (j, p) in self.poles.iter().enumerate() {
            let a = blaschke_residue(&etas, j);
            let d = (p.c_hat * p.c_hat - target * a * a).norm() / (a * a).norm();
            worst = worst.max(d);
        }
        worst
    }
}

/// `Π_j (−1/η_j²) = Π_j η̂_j/η_j`.
pub fn mirror_product(etas: &[C64]) -> C64 {
    etas.iter().fold(c(1.0, 0.0), |acc, &e| acc * (-(e * e).inv()))
}

/// Residue at `η_j` of `Π_l (z − η̂_l)/(z − η_l)`.
pub fn blaschke_residue(etas: &[C64], j: usize) -> C64 {
    let ej = etas[j];
    let mut r = ej - mirror(ej);
    for (l, &el) in etas.iter().enumerate() {
        if l != j {
            r *= (ej - mirror(el)) / (ej - el);
        }
    }
    r
}

/// Solved outer model at a fixed `(x, t)`.
#[derive(Clone, Debug)]
pub struct OuterSolution {
    pub x: f64,
    pub t: f64,
    q_minus: f64,
    etas: Vec<C64>,
    /// Column-1 residue vectors at `η_j`.
    residues: Vec<[C64; 2]>,
    /// Column-2 residue vectors at `η̂_j`.
    mirror_residues: Vec<[C64; 2]>,
    pub condition: f64,
}

impl OuterSolution {
    pub fn evaluate(&self, z: C64) -> Mat2 {
        let iq = I * self.q_minus / z;
        let mut m = Mat2::new(c(1.0, 0.0), iq, iq, c(1.0, 0.0));
        for (j, &eta) in self.etas.iter().enumerate() {
            let d = (z - eta).inv();
            let dh = (z - mirror(eta)).inv();
            let r = self.residues[j];
            let rh = self.mirror_residues[j];
            m.0[0][0] += r[0] * d;
            m.0[1][0] += r[1] * d;
            m.0[0][1] += rh[0] * dh;
            m.0[1][1] += rh[1] * dh;
        }
        m
    }

    /// Coefficient of `1/z` in the expansion at infinity.
    pub fn first_moment(&self) -> Mat2 {
        let iq = I * self.q_minus;
        let mut m1 = Mat2::new(c(0.0, 0.0), iq, iq, c(0.0, 0.0));
        for j in 0..self.etas.len() {
            let r = self.residues[j];
            let rh = self.mirror_residues[j];
            m1.0[0][0] += r[0];
            m1.0[1][0] += r[1];
            m1.0[0][1] += rh[0];
            m1.0[1][1] += rh[1];
        }
        m1
    }

    /// `−i (m₁)₁₂` before the reality check.
    pub fn q_complex(&self) -> C64 {
        -I * self.first_moment().at(0, 1)
    }

    /// Companion potential `r = i (m₁)₂₁` (the `(2,1)` entry of `Q`).
    pub fn r_complex(&self) -> C64 {
        I * self.first_moment().at(1, 0)
    }

    /// Real potential; errors when the imaginary part exceeds [`REALITY_TOL`].
    pub fn q_sol(&self) -> Result<f64> {
        let q = self.q_complex();
        if q.im.abs() >= REALITY_TOL {
            return Err(Error::Reality { imag: q.im });
        }
        Ok(q.re)
    }
}

/// Residue-condition exponents `log(Ĉ_j e^{−2iθ(η_j)})`.
fn log_weights(data: &ReflectionlessData, x: f64, t: f64) -> Vec<C64> {
    data.poles.iter().map(|p| p.c_hat.ln() - 2.0 * I * theta(p.eta, x, t)).collect()
}

pub fn solve_outer(data: &ReflectionlessData, x: f64, t: f64) -> Result<OuterSolution> {
    solve_outer_with_weights(data, &log_weights(data, x, t), x, t)
}

/// Solve with precomputed `log(Ĉ_j e^{−2iθ(η_j)})`; lets callers advance
/// phases analytically instead of through `(x, t)`.
pub fn solve_outer_with_weights(data: &ReflectionlessData, log_w: &[C64], x: f64, t: f64) -> Result<OuterSolution> {
    Ok(ResidueSystem::assemble(data, log_w)?.base_solution(x, t))
}

/// Residue system in row-scaled form `S (D(x, t) + K) r = S b`, where only the
/// diagonal `D = diag(e^{−w})` depends on `(x, t)`.
struct ResidueSystem {
    n: usize,
    q_minus: f64,
    etas: Vec<C64>,
    /// `S D` on the diagonal.
    diag: Vec<C64>,
    matrix: DMatrix<C64>,
    rhs: DMatrix<C64>,
    solution: DMatrix<C64>,
    condition: f64,
}

fn norm1(m: &DMatrix<C64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

impl ResidueSystem {
    fn assemble(data: &ReflectionlessData, log_w: &[C64]) -> Result<Self> {
        let n = data.poles.len();
        let q_minus = data.boundary.q_minus;
        let etas = data.etas();
        let hats: Vec<C64> = etas.iter().map(|&e| mirror(e)).collect();
        let dim = 2 * n;
        let mut a = DMatrix::<C64>::zeros(dim, dim);
        let mut b = DMatrix::<C64>::zeros(dim, 2);
        let mut diag = vec![C64::default(); dim];
        let iq = I * q_minus;

        // Row j reads e^{−w} r_j − Σ_l r̂_l/(η_j − η̂_l) = v_j, multiplied
        // by e^{w} when that keeps entries bounded.
        for j in 0..n {
            let lw = log_w[j];
            let lw_hat = lw - 2.0 * etas[j].ln();
            for (row, lw, pole, upper) in [(j, lw, etas[j], true), (n + j, lw_hat, hats[j], false)] {
                let (d, coupling) = if lw.re > 0.0 {
                    ((-lw).exp(), c(1.0, 0.0))
                } else {
                    (c(1.0, 0.0), lw.exp())
                };
                diag[row] = d;
                a[(row, row)] = d;
                if upper {
                    for l in 0..n {
                        a[(row, n + l)] = -coupling / (pole - hats[l]);
                    }
                    b[(row, 0)] = coupling * iq / pole;
                    b[(row, 1)] = coupling;
                } else {
                    for l in 0..n {
                        a[(row, l)] = -coupling / (pole - etas[l]);
                    }
                    b[(row, 0)] = coupling;
                    b[(row, 1)] = coupling * iq / pole;
                }
            }
        }

        let condition = if n == 0 {
            1.0
        } else {
            match a.clone().try_inverse() {
                Some(inv) => norm1(&a) * norm1(&inv),
                None => f64::INFINITY,
            }
        };
        if !condition.is_finite() || condition > MAX_CONDITION {
            let (i, j) = closest_pair(&etas);
            return Err(Error::SingularSystem { condition, i, j });
        }
        let solution = if n == 0 {
            DMatrix::zeros(0, 2)
        } else {
            a.clone().lu().solve(&b).ok_or(Error::SingularSystem { condition, i: 0, j: 0 })?
        };
        Ok(ResidueSystem {
            n,
            q_minus,
            etas,
            diag,
            matrix: a,
            rhs: b,
            solution,
            condition,
        })
    }

    fn unpack(&self, sol: &DMatrix<C64>) -> (Vec<[C64; 2]>, Vec<[C64; 2]>) {
        let n = self.n;
        let residues = (0..n).map(|j| [sol[(j, 0)], sol[(j, 1)]]).collect();
        let mirror_residues = (0..n).map(|j| [sol[(n + j, 0)], sol[(n + j, 1)]]).collect();
        (residues, mirror_residues)
    }

    fn base_solution(&self, x: f64, t: f64) -> OuterSolution {
        let (residues, mirror_residues) = self.unpack(&self.solution);
        OuterSolution {
            x,
            t,
            q_minus: self.q_minus,
            etas: self.etas.clone(),
            residues,
            mirror_residues,
            condition: self.condition,
        }
    }

    /// `q(x + dx, t + dt) − q(x, t)` with rounding errors of order `ε·|dx|`
    /// rather than `ε`: the diagonal update is formed with `expm1` and the
    /// correction is solved for directly.
    fn q_shift(&self, dx: f64, dt: f64) -> Result<f64> {
        if self.n == 0 {
            return Ok(0.0);
        }
        let n = self.n;
        let mut delta_a = DMatrix::<C64>::zeros(2 * n, 2 * n);
        for j in 0..n {
            let (ax, at) = phase_rates(self.etas[j]);
            let dw = -2.0 * I * (ax * dx + at * dt);
            let e = expm1(-dw);
            delta_a[(j, j)] = self.diag[j] * e;
            delta_a[(n + j, n + j)] = self.diag[n + j] * e;
        }
        let shifted = &self.matrix + &delta_a;
        let base_residual = &self.rhs - &self.matrix * &self.solution;
        let rhs = base_residual - &delta_a * &self.solution;
        let corr = shifted.lu().solve(&rhs).ok_or(Error::SingularSystem {
            condition: self.condition,
            i: 0,
            j: 0,
        })?;
        let dq: C64 = (0..n).map(|j| corr[(n + j, 0)]).sum::<C64>() * (-I);
        if dq.im.abs() >= REALITY_TOL {
            return Err(Error::Reality { imag: dq.im });
        }
        Ok(dq.re)
    }
}

/// `(∂θ/∂x, ∂θ/∂t)` at `z`; `θ` is affine in `(x, t)`.
fn phase_rates(z: C64) -> (C64, C64) {
    let s1 = z + z.inv();
    let s3 = z * z * z + (z * z * z).inv();
    (0.5 * s1, 0.5 * (s3 - 3.0 * s1))
}

fn expm1(w: C64) -> C64 {
    let s = w.im.sin();
    let half = (0.5 * w.im).sin();
    c(w.re.exp_m1(), 0.0) * C64::from_polar(1.0, w.im) + c(-2.0 * half * half, s)
}

/// `q(x, t)` together with `q(x + dx_k, t + dt_k) − q(x, t)` for each offset.
///
/// Differences are computed without forming the shifted values, so finite
/// difference quotients built from them are free of the `ε/h³` rounding
/// floor that independent evaluations would carry.
pub fn q_sol_with_shifts(data: &ReflectionlessData, x: f64, t: f64, offsets: &[(f64, f64)]) -> Result<(f64, Vec<f64>)> {
    let sys = ResidueSystem::assemble(data, &log_weights(data, x, t))?;
    let q = sys.base_solution(x, t).q_sol()?;
    let shifts = offsets.iter().map(|&(dx, dt)| sys.q_shift(dx, dt)).collect::<Result<Vec<_>>>()?;
    Ok((q, shifts))
}

fn closest_pair(etas: &[C64]) -> (usize, usize) {
    let mut best = (0, 0, f64::INFINITY);
    for i in 0..etas.len() {
        for j in 0..etas.len() {
            let d = if i == j {
                (etas[i] - mirror(etas[i])).norm()
            } else {
                (etas[i] - etas[j]).norm().min((etas[i] - mirror(etas[j])).norm())
            };
            if d < best.2 {
                best = (i, j, d);
            }
        }
    }
    (best.0, best.1)
}

pub fn q_sol(data: &ReflectionlessData, x: f64, t: f64) -> Result<f64> {
    solve_outer(data, x, t)?.q_sol()
}

/// Restrict to the poles in `active` and rescale `Ĉ_k → Ĉ_k T(η_k)^{−2}`.
pub fn modify_for_lambda<F>(full: &[Pole], active: &[usize], boundary: BoundaryData, transmission: F) -> Result<ReflectionlessData>
where
    F: Fn(C64) -> Result<C64>,
{
    let poles = active
        .iter()
        .map(|&k| {
            let p = full[k];
            let tk = transmission(p.eta)?;
            Ok(Pole {
                eta: p.eta,
                c_hat: p.c_hat / (tk * tk),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ReflectionlessData::new(poles, boundary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt() -> BoundaryData {
        BoundaryData::pt_family(1.0).unwrap()
    }

    #[test]
    fn empty_data_gives_background() {
        let b = BoundaryData::new(-1.0, 1, -1).unwrap();
        let d = ReflectionlessData::empty(b);
        let s = solve_outer(&d, 0.3, 2.0).unwrap();
        assert_eq!(s.q_sol().unwrap(), -1.0);
        let z = c(0.4, 1.7);
        let m = s.evaluate(z);
        let expected = Mat2::IDENTITY + b.sigma3_q_minus().scale(I / z);
        assert!((m - expected).max_abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_poles() {
        let b = pt();
        let bad = [c(0.0, 1.0), c(2.0, 0.0), C64::from_polar(1.0, 0.4), c(0.0, 0.0)];
        for eta in bad {
            let r = ReflectionlessData::new(vec![Pole { eta, c_hat: c(1.0, 0.0) }], b);
            assert!(r.is_err(), "{eta}");
        }
        let r = ReflectionlessData::nonlocal(&[c(0.0, 2.0)], &[1.0], b);
        assert!(r.is_err());
    }

    #[test]
    fn nonlocal_constants_are_reduced() {
        let d = ReflectionlessData::nonlocal(&[c(0.0, 2.0), c(0.0, -0.5)], &[1.0, 1.0], pt()).unwrap();
        assert!(d.reduction_defect() < 1e-12);
    }

    #[test]
    fn matrix_determinant_and_reality() {
        let d = ReflectionlessData::nonlocal(&[c(0.0, 2.0), c(0.0, -0.5)], &[1.0, 1.0], pt()).unwrap();
        let s = solve_outer(&d, 0.4, 0.2).unwrap();
        for &z in &[c(0.3, 0.9), c(-2.0, 0.5), c(1.1, -0.2)] {
            let det = s.evaluate(z).det();
            assert!((det - (1.0 + (z * z).inv())).norm() < 1e-9, "{det}");
        }
        assert!(s.q_complex().im.abs() < 1e-12);
    }
}
