use crate::mat2::{Mat2, C64, I};
use crate::soliton::OuterSolution;

use super::pc::PCCoefficients;

/// `m^{(lo)}(z) = I + ½ t^{−1/2} Σᵢ m^{(pc)}_{i,1}/(√θ″(ζᵢ)(z − ζᵢ))`.
pub fn local_model(pc: &PCCoefficients, z: C64) -> Mat2 {
    let mut m = Mat2::IDENTITY;
    let k = 0.5 / pc.t.sqrt();
    for s in &pc.saddles {
        m = m + s.m1().scale(k / (s.sqrt_ddtheta * (z - s.zeta)));
    }
    m
}

/// Coefficient of `1/z` in `m^{(lo)}`.
pub fn local_model_residue(pc: &PCCoefficients) -> Mat2 {
    let k = 0.5 / pc.t.sqrt();
    pc.saddles.iter().fold(Mat2::ZERO, |acc, s| acc + s.m1().scale(k / s.sqrt_ddtheta))
}

/// Per-saddle terms `t^{−1/2}/(2i√θ″) · m^{(out)}(ζᵢ) m^{(pc)}_{i,1} m^{(out)}(ζᵢ)⁻¹`.
pub fn error_term_e1_parts(outer: &OuterSolution, pc: &PCCoefficients) -> [Mat2; 4] {
    let k = 1.0 / pc.t.sqrt();
    pc.saddles.map(|s| {
        let m = outer.evaluate(s.zeta);
        let conj = m * s.m1() * m.adjugate().scale(m.det().inv());
        conj.scale(k / (2.0 * I * s.sqrt_ddtheta))
    })
}

/// `E₁`; the neglected remainder is `O(t⁻¹)`.
pub fn error_term_e1(outer: &OuterSolution, pc: &PCCoefficients) -> Mat2 {
    error_term_e1_parts(outer, pc).iter().fold(Mat2::ZERO, |acc, m| acc + *m)
}

/// Per-saddle terms `(2√θ″)⁻¹(m₁₁²β₁₂ + m₁₂²β₂₁)` with `m = m^{(out)}(ζᵢ)`.
pub fn radiation_coefficient_parts(outer: &OuterSolution, pc: &PCCoefficients) -> [C64; 4] {
    pc.saddles.map(|s| {
        let m = outer.evaluate(s.zeta);
        let (m11, m12) = (m.at(0, 0), m.at(0, 1));
        (m11 * m11 * s.beta12 + m12 * m12 * s.beta21) / (2.0 * s.sqrt_ddtheta)
    })
}

pub fn radiation_coefficient_f(outer: &OuterSolution, pc: &PCCoefficients) -> C64 {
    radiation_coefficient_parts(outer, pc).iter().sum()
}

/// `f_i / (−i (E₁)_{i,12} t^{1/2})` per saddle; `None` where a term vanishes.
pub fn dual_path_ratios(outer: &OuterSolution, pc: &PCCoefficients) -> [Option<C64>; 4] {
    let f = radiation_coefficient_parts(outer, pc);
    let e = error_term_e1_parts(outer, pc);
    let mut out = [None; 4];
    for i in 0..4 {
        let alt = -I * e[i].at(0, 1) * pc.t.sqrt();
        if alt.norm() > 0.0 {
            out[i] = Some(f[i] / alt);
        }
    }
    out
}

/// `f / (−i (E₁)₁₂ t^{1/2})` for the full sums.
pub fn dual_path_ratio(outer: &OuterSolution, pc: &PCCoefficients) -> Option<C64> {
    let alt = -I * error_term_e1(outer, pc).at(0, 1) * pc.t.sqrt();
    (alt.norm() > 0.0).then(|| radiation_coefficient_f(outer, pc) / alt)
}
