use std::f64::consts::PI;

use crate::mat2::{c, C64};
use crate::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

/// `Γ(w)` by the Lanczos approximation, reflected for `Re w < 1/2`.
pub fn complex_gamma(w: C64) -> Result<C64> {
    if w.im == 0.0 && w.re <= 0.0 && w.re.fract() == 0.0 {
        return Err(Error::Pole(w));
    }
    if w.re < 0.5 {
        let s = (PI * w).sin();
        return Ok(PI / (s * lanczos(1.0 - w)));
    }
    Ok(lanczos(w))
}

pub fn ln_gamma(w: C64) -> Result<C64> {
    if w.im == 0.0 && w.re <= 0.0 && w.re.fract() == 0.0 {
        return Err(Error::Pole(w));
    }
    if w.re < 0.5 {
        // branch is not continued; callers only need exp of it
        return Ok(c(PI.ln(), 0.0) - (PI * w).sin().ln() - ln_lanczos(1.0 - w));
    }
    Ok(ln_lanczos(w))
}

fn series(z: C64) -> C64 {
    let mut x = c(LANCZOS[0], 0.0);
    for (k, &a) in LANCZOS.iter().enumerate().skip(1) {
        x += a / (z + k as f64);
    }
    x
}

fn ln_lanczos(w: C64) -> C64 {
    let z = w - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series(z).ln()
}

fn lanczos(w: C64) -> C64 {
    ln_lanczos(w).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Stirling series after shifting `w` up by 20; independent of the
    /// Lanczos coefficients.
    fn stirling(w: C64) -> C64 {
        let n = 20;
        let mut shift = c(1.0, 0.0);
        for k in 0..n {
            shift *= w + k as f64;
        }
        let z = w + n as f64;
        let b = [
            1.0 / 12.0,
            -1.0 / 360.0,
            1.0 / 1260.0,
            -1.0 / 1680.0,
            1.0 / 1188.0,
            -691.0 / 360360.0,
        ];
        let mut corr = c(0.0, 0.0);
        let mut zp = z;
        for bk in b {
            corr += bk / zp;
            zp *= z * z;
        }
        ((z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + corr).exp() / shift
    }

    #[test]
    fn exact_values() {
        assert!((complex_gamma(c(0.5, 0.0)).unwrap() - PI.sqrt()).norm() < 1e-13);
        assert!((complex_gamma(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((complex_gamma(c(5.0, 0.0)).unwrap() - 24.0).norm() < 1e-12);
        assert!((complex_gamma(c(-0.5, 0.0)).unwrap() + 2.0 * PI.sqrt()).norm() < 1e-13);
    }

    #[test]
    fn imaginary_axis_modulus() {
        for nu in [0.1, 1.0, 2.0] {
            let g = complex_gamma(c(0.0, nu)).unwrap();
            let expect = PI / (nu * (PI * nu).sinh());
            assert!((g.norm_sqr() - expect).abs() < 1e-11 * expect.max(1.0), "{nu}");
        }
    }

    #[test]
    fn poles() {
        for n in [0.0, -1.0, -7.0] {
            assert!(matches!(complex_gamma(c(n, 0.0)), Err(Error::Pole(_))));
        }
        assert!(complex_gamma(c(-1.0, 1e-3)).is_ok());
    }

    proptest! {
        #[test]
        fn agrees_with_stirling(re in -4.5f64..6.0, im in -10.0f64..10.0) {
            prop_assume!(im.abs() > 1e-3 || (re - re.round()).abs() > 1e-3);
            let w = c(re, im);
            let g = complex_gamma(w).unwrap();
            let s = stirling(w);
            prop_assert!((g - s).norm() <= 1e-12 * s.norm(), "{} vs {}", g, s);
        }

        #[test]
        fn recurrence(re in -3.0f64..5.0, im in -10.0f64..10.0) {
            prop_assume!(im.abs() > 1e-2);
            let w = c(re, im);
            let lhs = complex_gamma(w + 1.0).unwrap();
            let rhs = w * complex_gamma(w).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
        }
    }
}
