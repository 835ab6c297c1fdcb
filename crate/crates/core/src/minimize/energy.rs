//! Discrete energy on the quarter period and its exact gradient.
//!
//! Kinetic terms use the edge differences `(u_{i+1} − u_i)/h`, each weighted
//! by `h`; the potential is integrated with the trapezoid rule. Differentiating
//! this sum gives the three-point stencil with a reflecting ghost node at
//! `x = 0`, scaled by the trapezoid weight of each node.

use crate::error::{Error, Result};
use crate::grid::{Grid, HalfCellField};
use crate::potential::PotentialParams;

fn check(grid: &Grid, len: usize) -> Result<()> {
    if len != grid.n() {
        return Err(Error::LengthMismatch {
            expected: grid.n(),
            got: len,
        });
    }
    Ok(())
}

fn kinetic(u: &[f64], h: f64) -> f64 {
    u.windows(2)
        .map(|w| (w[1] - w[0]) * (w[1] - w[0]))
        .sum::<f64>()
        / h
}

/// `∫₀^L ½(u₁′² + u₂′²) + W_ε(u₁, u₂) dx` for an arbitrary pair.
pub fn energy(u1: &[f64], u2: &[f64], grid: &Grid, pot: &PotentialParams) -> Result<f64> {
    check(grid, u1.len())?;
    check(grid, u2.len())?;
    let h = grid.h();
    let w: Vec<f64> = u1.iter().zip(u2).map(|(&a, &b)| pot.eval(a, b)).collect();
    Ok(0.5 * (kinetic(u1, h) + kinetic(u2, h)) + grid.trapezoid(&w)?)
}

pub(crate) fn reduced_energy_raw(v: &[f64], grid: &Grid, pot: &PotentialParams) -> f64 {
    let n = v.len();
    let h = grid.h();
    let mut pe = 0.5 * (pot.eval(v[0], v[n - 1]) + pot.eval(v[n - 1], v[0]));
    for i in 1..n - 1 {
        pe += pot.eval(v[i], v[n - 1 - i]);
    }
    kinetic(v, h) + h * pe
}

/// Energy of the symmetric pair encoded by `v`. Both kinetic terms coincide
/// under the exchange symmetry, so this is `∫ v′² + W_ε(v(x), v(L−x))`.
pub fn reduced_energy(v: &HalfCellField, grid: &Grid, pot: &PotentialParams) -> Result<f64> {
    check(grid, v.len())?;
    Ok(reduced_energy_raw(v.values(), grid, pot))
}

pub(crate) fn reduced_gradient_into(v: &[f64], grid: &Grid, pot: &PotentialParams, g: &mut [f64]) {
    let n = v.len();
    let h = grid.h();
    let k = 2.0 / h;
    for i in 0..n - 1 {
        let m = n - 1 - i;
        let (a, b) = (v[i], v[m]);
        let d1 = pot.grad(a, b).0;
        let d2 = pot.grad(b, a).1;
        let left = if i == 0 { 0.0 } else { v[i] - v[i - 1] };
        let right = v[i + 1] - v[i];
        g[i] = k * (left - right) + h * grid.weight(i) * (d1 + d2);
    }
    g[n - 1] = 0.0;
}

/// Exact gradient of [`reduced_energy`] with respect to `v_0 … v_{n−2}`;
/// the Dirichlet entry is 0.
pub fn reduced_gradient(v: &HalfCellField, grid: &Grid, pot: &PotentialParams) -> Result<Vec<f64>> {
    check(grid, v.len())?;
    let mut g = vec![0.0; v.len()];
    reduced_gradient_into(v.values(), grid, pot, &mut g);
    Ok(g)
}

pub(crate) fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}
