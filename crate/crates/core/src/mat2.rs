//! Dense 2×2 complex matrices.
//!
//! Everything in the Riemann-Hilbert and Lax-pair machinery is 2×2, so a
//! fixed-size value type with explicit formulas is both faster and clearer
//! than a general matrix library here.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Row-major 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[C64 { re: 0.0, im: 0.0 }; 2]; 2]);
    pub const IDENTITY: Mat2 = Mat2([
        [C64 { re: 1.0, im: 0.0 }, C64 { re: 0.0, im: 0.0 }],
        [C64 { re: 0.0, im: 0.0 }, C64 { re: 1.0, im: 0.0 }],
    ]);

    pub fn new(a11: C64, a12: C64, a21: C64, a22: C64) -> Self {
        Mat2([[a11, a12], [a21, a22]])
    }

    pub fn diag(a: C64, b: C64) -> Self {
        Mat2::new(a, C64::new(0.0, 0.0), C64::new(0.0, 0.0), b)
    }

    pub fn from_columns(c1: [C64; 2], c2: [C64; 2]) -> Self {
        Mat2::new(c1[0], c2[0], c1[1], c2[1])
    }

    /// Pauli σ₃.
    pub fn sigma3() -> Self {
        Mat2::diag(c(1.0, 0.0), c(-1.0, 0.0))
    }

    /// Pauli σ₁.
    pub fn sigma1() -> Self {
        Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }

    pub fn column(&self, j: usize) -> [C64; 2] {
        [self.0[0][j], self.0[1][j]]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Adjugate; `a · adj(a) = det(a) I`.
    pub fn adjugate(&self) -> Self {
        let [[a, b], [cc, d]] = self.0;
        Mat2::new(d, -b, -cc, a)
    }

    /// Inverse, or `None` when `|det| <= tiny`.
    pub fn inverse(&self, tiny: f64) -> Option<Self> {
        let d = self.det();
        if d.norm() <= tiny {
            None
        } else {
            Some(self.adjugate().scale(d.inv()))
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let [[a, b], [cc, d]] = self.0;
        Mat2::new(a * s, b * s, cc * s, d * s)
    }

    /// Max-modulus entry norm.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flat_map(|r| r.iter()).map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: [C64; 2]) -> [C64; 2] {
        [self.0[0][0] * v[0] + self.0[0][1] * v[1], self.0[1][0] * v[0] + self.0[1][1] * v[1]]
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += o.0[i][j];
            }
        }
        out
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        self + (-o)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(c(-1.0, 0.0))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let a = self.0;
        let b = o.0;
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }
}

/// `[re, im]` pairs used by every JSON schema in the crate.
pub fn to_pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn from_pair(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}
