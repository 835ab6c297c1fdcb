//! The four-well potential `W_ε(u1, u2) = ¼(1 − u1² − u2²)² + (ε/2)·u1²u2²`.
//!
//! For `ε > 0` its global minimizers are exactly `(±1, 0)` and `(0, ±1)`; at
//! `ε = 0` it reduces to the Ginzburg-Landau potential `¼(1 − |u|²)²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    epsilon: f64,
}

impl PotentialParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::EpsilonOutOfRange(epsilon));
        }
        Ok(Self { epsilon })
    }

    /// The Ginzburg-Landau limit `ε = 0`.
    pub fn ginzburg_landau() -> Self {
        Self { epsilon: 0.0 }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn eval(&self, u1: f64, u2: f64) -> f64 {
        let s = 1.0 - u1 * u1 - u2 * u2;
        0.25 * s * s + 0.5 * self.epsilon * u1 * u1 * u2 * u2
    }

    pub fn grad(&self, u1: f64, u2: f64) -> (f64, f64) {
        let s = 1.0 - u1 * u1 - u2 * u2;
        let e = self.epsilon;
        (-s * u1 + e * u1 * u2 * u2, -s * u2 + e * u2 * u1 * u1)
    }

    /// Exact second partials, row-major `[[∂11, ∂12], [∂21, ∂22]]`.
    pub fn hess(&self, u1: f64, u2: f64) -> [[f64; 2]; 2] {
        let s = 1.0 - u1 * u1 - u2 * u2;
        let e = self.epsilon;
        let off = 2.0 * u1 * u2 * (1.0 + e);
        [
            [-s + 2.0 * u1 * u1 + e * u2 * u2, off],
            [off, -s + 2.0 * u2 * u2 + e * u1 * u1],
        ]
    }
}

impl Default for PotentialParams {
    fn default() -> Self {
        Self::ginzburg_landau()
    }
}
