//! Extension of a quarter-period solution to the whole period by reflections,
//! and the quantities that certify it violates `½|u′|² ≤ W(u)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ThetaFamily;
use crate::grid::{Grid, HalfCellField};
use crate::minimize::energy;
use crate::potential::PotentialParams;

/// Samples of `(u₁, u₂)` on `[−L, 3L)` with spacing `h`; `4(n−1)` nodes, node
/// `j` at `x = (j − (n−1))·h`. Derivatives are periodic central differences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullPeriodSolution {
    pub theta: f64,
    pub epsilon: f64,
    pub h: f64,
    pub xs: Vec<f64>,
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    pub du1: Vec<f64>,
    pub du2: Vec<f64>,
}

fn central(u: &[f64], h: f64) -> Vec<f64> {
    let m = u.len();
    (0..m)
        .map(|j| (u[(j + 1) % m] - u[(j + m - 1) % m]) / (2.0 * h))
        .collect()
}

impl FullPeriodSolution {
    /// Builds a solution from raw period samples (e.g. read back from disk).
    pub fn from_samples(
        theta: f64,
        epsilon: f64,
        xs: Vec<f64>,
        u1: Vec<f64>,
        u2: Vec<f64>,
    ) -> Result<Self> {
        ThetaFamily::new(theta)?;
        PotentialParams::new(epsilon)?;
        let m = xs.len();
        if m < 8 || !m.is_multiple_of(4) {
            return Err(Error::InvalidConfig(format!(
                "period sample count must be a positive multiple of 4 (>= 8), got {m}"
            )));
        }
        for len in [u1.len(), u2.len()] {
            if len != m {
                return Err(Error::LengthMismatch {
                    expected: m,
                    got: len,
                });
            }
        }
        let h = 2.0 * PI / (theta * m as f64);
        let du1 = central(&u1, h);
        let du2 = central(&u2, h);
        Ok(Self {
            theta,
            epsilon,
            h,
            xs,
            u1,
            u2,
            du1,
            du2,
        })
    }

    /// Nodes per quarter period plus one, i.e. the `n` of the source grid.
    pub fn quarter_nodes(&self) -> usize {
        self.xs.len() / 4 + 1
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// `(u₁, u₂)` restricted to `[0, L]`.
    pub fn quarter(&self) -> (&[f64], &[f64]) {
        let q = self.quarter_nodes() - 1;
        (&self.u1[q..=2 * q], &self.u2[q..=2 * q])
    }

    pub fn potential(&self) -> PotentialParams {
        PotentialParams::new(self.epsilon).expect("validated at construction")
    }
}

/// Reflects the quarter cell: odd/even (u₁/u₂) about `x = L`, then even/odd
/// about `x = 0`, and repeats with period `4L`.
pub fn extend(v: &HalfCellField, grid: &Grid, pot: &PotentialParams) -> Result<FullPeriodSolution> {
    if v.len() != grid.n() {
        return Err(Error::LengthMismatch {
            expected: grid.n(),
            got: v.len(),
        });
    }
    let (q1, q2) = v.encode();
    let q = grid.n() - 1;
    let m = 4 * q;
    let quarter = |k: usize| -> (f64, f64) {
        // k in [0, 4q): offset from x = 0.
        if k <= q {
            (q1[k], q2[k])
        } else if k <= 2 * q {
            let s = 2 * q - k;
            (-q1[s], q2[s])
        } else {
            let s = m - k;
            let (a, b) = if s <= q {
                (q1[s], q2[s])
            } else {
                (-q1[2 * q - s], q2[2 * q - s])
            };
            (a, -b)
        }
    };
    let h = grid.h();
    let mut xs = Vec::with_capacity(m);
    let mut u1 = Vec::with_capacity(m);
    let mut u2 = Vec::with_capacity(m);
    for j in 0..m {
        xs.push((j as f64 - q as f64) * h);
        let (a, b) = quarter((j + m - q) % m);
        u1.push(a);
        u2.push(b);
    }
    let du1 = central(&u1, h);
    let du2 = central(&u2, h);
    Ok(FullPeriodSolution {
        theta: grid.theta(),
        epsilon: pot.epsilon(),
        h,
        xs,
        u1,
        u2,
        du1,
        du2,
    })
}

/// `max_j |u″_j − ∇W_ε(u_j)|` with the periodic three-point stencil.
pub fn ode_residual(s: &FullPeriodSolution, pot: &PotentialParams) -> f64 {
    let m = s.len();
    let h2 = s.h * s.h;
    (0..m)
        .map(|j| {
            let (p, nx) = ((j + m - 1) % m, (j + 1) % m);
            let a1 = ((s.u1[p] - s.u1[j]) + (s.u1[nx] - s.u1[j])) / h2;
            let a2 = ((s.u2[p] - s.u2[j]) + (s.u2[nx] - s.u2[j])) / h2;
            let (g1, g2) = pot.grad(s.u1[j], s.u2[j]);
            (a1 - g1).hypot(a2 - g2)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Defect {
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

/// Nodewise `½|u′|² − W_ε(u)`; positive values violate the gradient estimate.
pub fn defect(s: &FullPeriodSolution, pot: &PotentialParams) -> Defect {
    let values: Vec<f64> = (0..s.len())
        .map(|j| 0.5 * (s.du1[j] * s.du1[j] + s.du2[j] * s.du2[j]) - pot.eval(s.u1[j], s.u2[j]))
        .collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Defect { values, min, max }
}

/// Spread of the first integral `½|u′|² − W(u)` over the period.
pub fn hamiltonian_spread(s: &FullPeriodSolution, pot: &PotentialParams) -> f64 {
    let d = defect(s, pot);
    d.max - d.min
}

/// `max_j (u₁² + u₂²)`; solutions must stay strictly inside the unit disc.
pub fn check_unit_ball(s: &FullPeriodSolution) -> f64 {
    s.u1.iter()
        .zip(&s.u2)
        .map(|(a, b)| a * a + b * b)
        .fold(0.0, f64::max)
}

/// `max|U − u_θ| + max|U′ − u_θ′|` over the sampled period.
pub fn c1_distance(s: &FullPeriodSolution, fam: &ThetaFamily) -> Result<f64> {
    if (s.theta - fam.theta()).abs() > 1e-12 * fam.theta() {
        return Err(Error::ThetaMismatch {
            solution: s.theta,
            reference: fam.theta(),
        });
    }
    let (mut d0, mut d1) = (0.0f64, 0.0f64);
    for j in 0..s.len() {
        let (e1, e2) = fam.u(s.xs[j]);
        let (f1, f2) = fam.du(s.xs[j]);
        d0 = d0.max((s.u1[j] - e1).hypot(s.u2[j] - e2));
        d1 = d1.max((s.du1[j] - f1).hypot(s.du2[j] - f2));
    }
    Ok(d0 + d1)
}

/// Thresholds used to build a [`VerificationReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Certification requires `ode_residual_inf <= ode_residual_factor · max(1, energy_quarter / L)`.
    pub ode_residual_factor: f64,
    /// Nontrivial means `energy_quarter < π/(8θ) − nontrivial_margin`.
    pub nontrivial_margin: f64,
    /// Flag bound `hamiltonian_spread <= hamiltonian_constant · h² · max(1, |defect|)`.
    pub hamiltonian_constant: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            ode_residual_factor: 1e-4,
            nontrivial_margin: 1e-6,
            hamiltonian_constant: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theta: f64,
    pub epsilon: f64,
    pub n: usize,
    pub h: f64,
    pub energy_quarter: f64,
    pub defect_min: f64,
    pub defect_max: f64,
    pub hamiltonian_spread: f64,
    pub hamiltonian_bound: f64,
    pub hamiltonian_within_bound: bool,
    pub ode_residual_inf: f64,
    pub ode_residual_tol: f64,
    pub max_modulus_sq: f64,
    pub within_unit_ball: bool,
    pub sym1_residual: f64,
    pub sym2_residual: f64,
    pub c1_distance_to_gl: f64,
    pub trivial_energy: f64,
    pub nontrivial: bool,
    pub counterexample_certified: bool,
    pub tolerances: Tolerances,
}

fn sym_residuals(s: &FullPeriodSolution) -> (f64, f64) {
    let q = s.quarter_nodes() - 1;
    let (q1, q2) = s.quarter();
    let sym1 = (0..=q)
        .map(|i| (q1[q - i] - q2[i]).abs())
        .fold(0.0, f64::max);
    let m = s.len();
    let sym2 = (0..m)
        .map(|j| {
            let k = (2 * q + m - j) % m;
            (s.u1[k] - s.u1[j]).abs().max((s.u2[k] + s.u2[j]).abs())
        })
        .fold(0.0, f64::max);
    (sym1, sym2)
}

impl VerificationReport {
    pub fn compute(s: &FullPeriodSolution, tol: Tolerances) -> Result<Self> {
        let pot = s.potential();
        let fam = ThetaFamily::new(s.theta)?;
        let n = s.quarter_nodes();
        let grid = Grid::new(s.theta, n)?;
        let (q1, q2) = s.quarter();
        let energy_quarter = energy(q1, q2, &grid, &pot)?;
        let d = defect(s, &pot);
        let spread = d.max - d.min;
        let hamiltonian_bound =
            tol.hamiltonian_constant * s.h * s.h * d.min.abs().max(d.max.abs()).max(1.0);
        let ode = ode_residual(s, &pot);
        let ode_tol = tol.ode_residual_factor * (energy_quarter.abs() / grid.length()).max(1.0);
        let max_mod = check_unit_ball(s);
        let (sym1, sym2) = sym_residuals(s);
        let trivial_energy = PI / (8.0 * s.theta);
        let nontrivial = energy_quarter < trivial_energy - tol.nontrivial_margin;
        let certified = d.min > 0.0 && ode <= ode_tol && nontrivial;
        Ok(Self {
            theta: s.theta,
            epsilon: s.epsilon,
            n,
            h: s.h,
            energy_quarter,
            defect_min: d.min,
            defect_max: d.max,
            hamiltonian_spread: spread,
            hamiltonian_bound,
            hamiltonian_within_bound: spread <= hamiltonian_bound,
            ode_residual_inf: ode,
            ode_residual_tol: ode_tol,
            max_modulus_sq: max_mod,
            within_unit_ball: max_mod < 1.0,
            sym1_residual: sym1,
            sym2_residual: sym2,
            c1_distance_to_gl: c1_distance(s, &fam)?,
            trivial_energy,
            nontrivial,
            counterexample_certified: certified,
            tolerances: tol,
        })
    }
}

/// Extends `v` and computes its report with default tolerances.
pub fn verify(
    v: &HalfCellField,
    grid: &Grid,
    pot: &PotentialParams,
) -> Result<(FullPeriodSolution, VerificationReport)> {
    let sol = extend(v, grid, pot)?;
    let rep = VerificationReport::compute(&sol, Tolerances::default())?;
    Ok((sol, rep))
}
