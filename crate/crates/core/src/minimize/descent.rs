//! Barzilai-Borwein gradient descent with monotone Armijo backtracking.
//!
//! Directions and BB steps are taken in the lumped-mass (L²) metric, i.e. the
//! nodal gradient is divided by `h·w_i`. Step lengths are clamped to
//! `[MIN_STEP_H2·h², MAX_STEP]`.

use super::{inf_norm, reduced_energy_raw, reduced_gradient_into, MinimizeOutcome, SolverConfig};
use crate::error::{Error, Result};
use crate::grid::HalfCellField;

pub const ARMIJO_C: f64 = 1e-4;
pub const ARMIJO_SHRINK: f64 = 0.5;
pub const MIN_STEP_H2: f64 = 1e-8;
pub const MAX_STEP: f64 = 1e4;

pub fn descend(start: &HalfCellField, cfg: &SolverConfig) -> Result<MinimizeOutcome> {
    let grid = cfg.grid()?;
    let pot = cfg.potential()?;
    let n = grid.n();
    if start.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: start.len(),
        });
    }
    let h = grid.h();
    let mass: Vec<f64> = (0..n).map(|i| h * grid.weight(i)).collect();
    let min_step = MIN_STEP_H2 * h * h;

    let mut v = start.values().to_vec();
    let mut e = reduced_energy_raw(&v, &grid, &pot);
    if !e.is_finite() {
        return Err(Error::NonFiniteEnergy(0));
    }
    let mut g = vec![0.0; n];
    reduced_gradient_into(&v, &grid, &pot, &mut g);
    let mut g_new = vec![0.0; n];
    let mut dir = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut history = vec![e];
    let mut step = h * h;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_descent_iters {
        if inf_norm(&g) <= cfg.descent_tol {
            converged = true;
            break;
        }
        for i in 0..n - 1 {
            dir[i] = g[i] / mass[i];
        }
        dir[n - 1] = 0.0;
        let slope: f64 = g.iter().zip(&dir).map(|(a, b)| a * b).sum();

        let mut alpha = step;
        let accepted = loop {
            for i in 0..n {
                trial[i] = v[i] - alpha * dir[i];
            }
            let et = reduced_energy_raw(&trial, &grid, &pot);
            if et.is_finite() && et <= e - ARMIJO_C * alpha * slope {
                break Some(et);
            }
            alpha *= ARMIJO_SHRINK;
            if alpha < min_step {
                break None;
            }
        };
        let Some(et) = accepted else {
            // No admissible step left: round-off floor or a stall.
            break;
        };
        iterations += 1;

        reduced_gradient_into(&trial, &grid, &pot, &mut g_new);
        let (mut sms, mut sy) = (0.0, 0.0);
        for i in 0..n - 1 {
            let s = trial[i] - v[i];
            sms += mass[i] * s * s;
            sy += s * (g_new[i] - g[i]);
        }
        step = if sy > 0.0 { sms / sy } else { MAX_STEP };
        step = step.clamp(min_step, MAX_STEP);

        std::mem::swap(&mut v, &mut trial);
        std::mem::swap(&mut g, &mut g_new);
        e = et;
        history.push(e);
    }
    if !converged && inf_norm(&g) <= cfg.descent_tol {
        converged = true;
    }

    let field = HalfCellField::new(v, &grid)?;
    Ok(MinimizeOutcome {
        positive: field.is_positive_interior(),
        field,
        energy: e,
        grad_inf_norm: inf_norm(&g),
        descent_converged: converged,
        descent_iterations: iterations,
        energy_history: history,
        newton_converged: false,
        newton_iterations: 0,
        newton_history: Vec::new(),
        newton_failure: None,
        min_pivot_ratio: None,
        polished: false,
    })
}
