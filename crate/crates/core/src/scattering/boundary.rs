use serde::{Deserialize, Serialize};

use crate::mat2::{c, Mat2, C64};
use crate::{Error, Result};

/// Boundary values `q(x → ±∞) = q±` with `|q±| = 1`, `q₊ = δ q₋`, `σ δ = −1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub q_minus: f64,
    pub q_plus: f64,
    pub sigma: i32,
    pub delta: i32,
}

impl BoundaryData {
    pub fn new(q_minus: f64, sigma: i32, delta: i32) -> Result<Self> {
        if q_minus.abs() != 1.0 {
            return Err(Error::Invalid(format!("|q_-| must be 1, got {q_minus}")));
        }
        if sigma.abs() != 1 || delta.abs() != 1 {
            return Err(Error::Invalid(format!("sigma, delta must be ±1, got {sigma}, {delta}")));
        }
        if sigma * delta != -1 {
            return Err(Error::Invalid(format!("sigma*delta must be -1, got {}", sigma * delta)));
        }
        Ok(BoundaryData {
            q_minus,
            q_plus: delta as f64 * q_minus,
            sigma,
            delta,
        })
    }

    /// `σ = −1, δ = 1`: the family in which the PT-symmetric reduction to the
    /// local focusing mKdV lives.
    pub fn pt_family(q_minus: f64) -> Result<Self> {
        BoundaryData::new(q_minus, -1, 1)
    }

    pub fn q(&self, side: Side) -> f64 {
        match side {
            Side::Minus => self.q_minus,
            Side::Plus => self.q_plus,
        }
    }

    /// `Q± = [[0, q±], [−q±, 0]]`.
    pub fn q_matrix(&self, side: Side) -> Mat2 {
        let q = self.q(side);
        Mat2::new(c(0.0, 0.0), c(q, 0.0), c(-q, 0.0), c(0.0, 0.0))
    }

    /// `σ₃ Q₋ = q₋ σ₁`.
    pub fn sigma3_q_minus(&self) -> Mat2 {
        Mat2::sigma1().scale(c(self.q_minus, 0.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Minus,
    Plus,
}

/// `E±(z) = I + (i/z) σ₃ Q± = [[1, i q±/z], [i q±/z, 1]]`, using `k + λ = z`.
pub fn background_eigenvector_matrix(boundary: &BoundaryData, z: C64, side: Side) -> Result<Mat2> {
    if z == c(0.0, 0.0) || (z - c(0.0, 1.0)).norm() == 0.0 || (z + c(0.0, 1.0)).norm() == 0.0 {
        return Err(Error::Domain(format!("E_± is singular at z = {z}")));
    }
    let off = c(0.0, boundary.q(side)) / z;
    Ok(Mat2::new(c(1.0, 0.0), off, off, c(1.0, 0.0)))
}
