//! Test-only oracles that share no code path with the reduced solver.
#![allow(dead_code)]

use modica_core::minimize::energy;
use modica_core::{Grid, PotentialParams};

/// Gradient of the full two-component energy with respect to all `2n` nodal
/// values, derived independently of the reduced formulation.
pub fn full_gradient(
    u1: &[f64],
    u2: &[f64],
    grid: &Grid,
    pot: &PotentialParams,
) -> (Vec<f64>, Vec<f64>) {
    let n = u1.len();
    let h = grid.h();
    let mut g1 = vec![0.0; n];
    let mut g2 = vec![0.0; n];
    for i in 0..n - 1 {
        let d1 = (u1[i + 1] - u1[i]) / h;
        let d2 = (u2[i + 1] - u2[i]) / h;
        g1[i] -= d1;
        g1[i + 1] += d1;
        g2[i] -= d2;
        g2[i + 1] += d2;
    }
    for i in 0..n {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let (a, b) = pot.grad(u1[i], u2[i]);
        g1[i] += h * w * a;
        g2[i] += h * w * b;
    }
    (g1, g2)
}

/// Orthogonal projection onto `{u₁(L − x) = u₂(x), u₂(0) = 0}`.
pub fn project(u1: &mut [f64], u2: &mut [f64]) {
    let n = u1.len();
    for i in 0..n {
        let j = n - 1 - i;
        if i > j {
            continue;
        }
        let a = 0.5 * (u1[j] + u2[i]);
        let b = 0.5 * (u1[i] + u2[j]);
        u1[j] = a;
        u2[i] = a;
        u1[i] = b;
        u2[j] = b;
    }
    u1[n - 1] = 0.0;
    u2[0] = 0.0;
}

fn inf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().chain(b).fold(0.0, |m, v| m.max(v.abs()))
}

pub struct ProjectedResult {
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    pub iterations: usize,
    pub grad_norm: f64,
}

/// Projected Barzilai-Borwein descent with Armijo backtracking on the full
/// `(u₁, u₂)` system.
pub fn projected_solve(
    grid: &Grid,
    pot: &PotentialParams,
    mut u1: Vec<f64>,
    mut u2: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> ProjectedResult {
    let n = u1.len();
    let h = grid.h();
    project(&mut u1, &mut u2);
    let e_of = |a: &[f64], b: &[f64]| energy(a, b, grid, pot).unwrap();
    let pgrad = |a: &[f64], b: &[f64]| {
        let (mut g1, mut g2) = full_gradient(a, b, grid, pot);
        project(&mut g1, &mut g2);
        (g1, g2)
    };
    let mut e = e_of(&u1, &u2);
    let (mut g1, mut g2) = pgrad(&u1, &u2);
    let mut step = h;
    let mut it = 0;
    while it < max_iter && inf(&g1, &g2) > tol {
        let slope: f64 = g1.iter().chain(&g2).map(|g| g * g).sum();
        let mut alpha = step;
        let (t1, t2, et) = loop {
            let t1: Vec<f64> = u1.iter().zip(&g1).map(|(u, g)| u - alpha * g).collect();
            let t2: Vec<f64> = u2.iter().zip(&g2).map(|(u, g)| u - alpha * g).collect();
            let et = e_of(&t1, &t2);
            if et <= e - 1e-4 * alpha * slope || alpha < 1e-20 {
                break (t1, t2, et);
            }
            alpha *= 0.5;
        };
        let (n1, n2) = pgrad(&t1, &t2);
        let (mut ss, mut sy) = (0.0, 0.0);
        for i in 0..n {
            let s1 = t1[i] - u1[i];
            let s2 = t2[i] - u2[i];
            ss += s1 * s1 + s2 * s2;
            sy += s1 * (n1[i] - g1[i]) + s2 * (n2[i] - g2[i]);
        }
        step = if sy > 0.0 { ss / sy } else { 1e3 };
        u1 = t1;
        u2 = t2;
        g1 = n1;
        g2 = n2;
        e = et;
        it += 1;
    }
    ProjectedResult {
        grad_norm: inf(&g1, &g2),
        u1,
        u2,
        iterations: it,
    }
}

/// Full-system Hessian times `(p1, p2)`.
pub fn full_hessvec(
    u1: &[f64],
    u2: &[f64],
    p1: &[f64],
    p2: &[f64],
    grid: &Grid,
    pot: &PotentialParams,
) -> (Vec<f64>, Vec<f64>) {
    let n = u1.len();
    let h = grid.h();
    let mut q1 = vec![0.0; n];
    let mut q2 = vec![0.0; n];
    for i in 0..n - 1 {
        let d1 = (p1[i + 1] - p1[i]) / h;
        let d2 = (p2[i + 1] - p2[i]) / h;
        q1[i] -= d1;
        q1[i + 1] += d1;
        q2[i] -= d2;
        q2[i + 1] += d2;
    }
    for i in 0..n {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let hs = pot.hess(u1[i], u2[i]);
        q1[i] += h * w * (hs[0][0] * p1[i] + hs[0][1] * p2[i]);
        q2[i] += h * w * (hs[1][0] * p1[i] + hs[1][1] * p2[i]);
    }
    (q1, q2)
}

fn dot(a1: &[f64], a2: &[f64], b1: &[f64], b2: &[f64]) -> f64 {
    a1.iter()
        .zip(b1)
        .chain(a2.iter().zip(b2))
        .map(|(x, y)| x * y)
        .sum()
}

/// Projected Newton iteration on the full system; each step solves
/// `P H P δ = −P∇E` by conjugate gradients inside the symmetric subspace.
pub fn projected_newton_cg(
    grid: &Grid,
    pot: &PotentialParams,
    mut u1: Vec<f64>,
    mut u2: Vec<f64>,
    tol: f64,
    max_newton: usize,
) -> ProjectedResult {
    let n = u1.len();
    project(&mut u1, &mut u2);
    let mut it = 0;
    let mut gnorm;
    loop {
        let (mut g1, mut g2) = full_gradient(&u1, &u2, grid, pot);
        project(&mut g1, &mut g2);
        gnorm = inf(&g1, &g2);
        if gnorm <= tol || it == max_newton {
            break;
        }
        let (mut x1, mut x2) = (vec![0.0; n], vec![0.0; n]);
        let mut r1: Vec<f64> = g1.iter().map(|g| -g).collect();
        let mut r2: Vec<f64> = g2.iter().map(|g| -g).collect();
        let (mut d1, mut d2) = (r1.clone(), r2.clone());
        let mut rr = dot(&r1, &r2, &r1, &r2);
        let stop = rr * 1e-30;
        for _ in 0..50 * n {
            if rr <= stop {
                break;
            }
            let (mut q1, mut q2) = full_hessvec(&u1, &u2, &d1, &d2, grid, pot);
            project(&mut q1, &mut q2);
            let alpha = rr / dot(&d1, &d2, &q1, &q2);
            for i in 0..n {
                x1[i] += alpha * d1[i];
                x2[i] += alpha * d2[i];
                r1[i] -= alpha * q1[i];
                r2[i] -= alpha * q2[i];
            }
            let rr_new = dot(&r1, &r2, &r1, &r2);
            let beta = rr_new / rr;
            rr = rr_new;
            for i in 0..n {
                d1[i] = r1[i] + beta * d1[i];
                d2[i] = r2[i] + beta * d2[i];
            }
        }
        for i in 0..n {
            u1[i] += x1[i];
            u2[i] += x2[i];
        }
        project(&mut u1, &mut u2);
        it += 1;
    }
    ProjectedResult {
        u1,
        u2,
        iterations: it,
        grad_norm: gnorm,
    }
}
