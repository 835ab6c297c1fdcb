//! The explicit Ginzburg-Landau periodic family
//! `u_θ(x) = √(1−θ²)·(cos θx, sin θx)`, which solves `u″ = ∇W₀(u)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest frequency for which the family has a positive defect, `√(2/3)`.
pub fn defect_threshold() -> f64 {
    (2.0f64 / 3.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaFamily {
    theta: f64,
}

impl ThetaFamily {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::ThetaOutOfRange(theta));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn amplitude(&self) -> f64 {
        (1.0 - self.theta * self.theta).sqrt()
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.theta
    }

    /// `L = π/(2θ)`.
    pub fn quarter_period(&self) -> f64 {
        PI / (2.0 * self.theta)
    }

    pub fn u(&self, x: f64) -> (f64, f64) {
        let a = self.amplitude();
        let (s, c) = (self.theta * x).sin_cos();
        (a * c, a * s)
    }

    pub fn du(&self, x: f64) -> (f64, f64) {
        let a = self.amplitude() * self.theta;
        let (s, c) = (self.theta * x).sin_cos();
        (-a * s, a * c)
    }

    pub fn d2u(&self, x: f64) -> (f64, f64) {
        let (u1, u2) = self.u(x);
        let t2 = self.theta * self.theta;
        (-t2 * u1, -t2 * u2)
    }

    /// The constant value of `½|u_θ′|² − W₀(u_θ)`, namely `θ²(2 − 3θ²)/4`.
    pub fn defect_constant(&self) -> f64 {
        let t2 = self.theta * self.theta;
        t2 * (2.0 - 3.0 * t2) / 4.0
    }

    /// `∫₀^L ½|u_θ′|² + W₀(u_θ) dx = L·(θ²/2 − θ⁴/4)`.
    pub fn gl_energy_on_quarter_period(&self) -> f64 {
        let t2 = self.theta * self.theta;
        self.quarter_period() * (0.5 * t2 - 0.25 * t2 * t2)
    }
}
