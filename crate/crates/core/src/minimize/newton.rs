//! Newton iteration on the discrete Euler-Lagrange system `∇E_h(v) = 0`.
//!
//! The Hessian of the reduced energy is tridiagonal (stencil) plus the
//! anti-diagonal coupling `i ↔ n−1−i`. Grouping each node with its mirror
//! gives 2×2 blocks: block `j` holds `(v_{c−j}, v_{c+j})` with `c = (n−1)/2`,
//! and the unused lanes (the midpoint's partner and the Dirichlet node) are
//! padded with identity rows.

use super::{inf_norm, reduced_gradient_into, MinimizeOutcome, NewtonFailure, SolverConfig};
use crate::error::{Error, Result};
use crate::grid::{Grid, HalfCellField};
use crate::linalg::BlockTridiag;
use crate::potential::PotentialParams;

struct Layout {
    n: usize,
    center: usize,
}

impl Layout {
    fn slot(&self, k: usize) -> (usize, usize) {
        if k <= self.center {
            (self.center - k, 0)
        } else {
            (k - self.center, 1)
        }
    }

    fn blocks(&self) -> usize {
        self.center + 1
    }
}

fn add(m: &mut BlockTridiag, lay: &Layout, k: usize, l: usize, val: f64) {
    if k == lay.n - 1 || l == lay.n - 1 {
        return;
    }
    let (bk, lk) = lay.slot(k);
    let (bl, ll) = lay.slot(l);
    if bk == bl {
        m.diag[bk][lk][ll] += val;
    } else if bl == bk + 1 {
        m.upper[bk][lk][ll] += val;
    } else if bl + 1 == bk {
        m.lower[bk][lk][ll] += val;
    } else {
        unreachable!("coupling {k}-{l} outside block band");
    }
}

pub(crate) fn assemble_hessian(v: &[f64], grid: &Grid, pot: &PotentialParams) -> BlockTridiag {
    let n = v.len();
    let lay = Layout {
        n,
        center: (n - 1) / 2,
    };
    let mut m = BlockTridiag::zeros(lay.blocks());
    m.diag[0][1][1] = 1.0;
    m.diag[lay.center][1][1] = 1.0;
    let h = grid.h();
    let k = 2.0 / h;
    for i in 0..n - 1 {
        add(&mut m, &lay, i, i, k);
        add(&mut m, &lay, i + 1, i + 1, k);
        add(&mut m, &lay, i, i + 1, -k);
        add(&mut m, &lay, i + 1, i, -k);
    }
    for i in 0..n {
        let mi = n - 1 - i;
        let hw = h * grid.weight(i);
        let hs = pot.hess(v[i], v[mi]);
        add(&mut m, &lay, i, i, hw * hs[0][0]);
        add(&mut m, &lay, mi, mi, hw * hs[1][1]);
        add(&mut m, &lay, i, mi, hw * hs[0][1]);
        add(&mut m, &lay, mi, i, hw * hs[1][0]);
    }
    m
}

pub fn newton_refine(v: &HalfCellField, cfg: &SolverConfig) -> Result<MinimizeOutcome> {
    let grid = cfg.grid()?;
    let pot = cfg.potential()?;
    let n = grid.n();
    if v.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: v.len(),
        });
    }
    let lay = Layout {
        n,
        center: (n - 1) / 2,
    };
    let mut x = v.values().to_vec();
    let mut g = vec![0.0; n];
    reduced_gradient_into(&x, &grid, &pot, &mut g);
    let mut gn = inf_norm(&g);
    let mut history = vec![gn];
    let mut failure = None;
    let mut converged = false;
    let mut iterations = 0;
    let mut min_ratio = f64::INFINITY;

    loop {
        if !gn.is_finite() {
            failure = Some(NewtonFailure::NonFinite);
            break;
        }
        if gn <= cfg.newton_tol {
            converged = true;
            break;
        }
        if iterations == cfg.max_newton_iters {
            failure = Some(NewtonFailure::IterationCap);
            break;
        }
        let jac = assemble_hessian(&x, &grid, &pot);
        let mut rhs = vec![[0.0; 2]; lay.blocks()];
        for (i, gi) in g.iter().enumerate().take(n - 1) {
            let (b, l) = lay.slot(i);
            rhs[b][l] = -gi;
        }
        let solved = match jac.solve(&rhs) {
            Ok(s) => s,
            Err(p) => {
                failure = Some(NewtonFailure::SingularJacobian {
                    block: p.block,
                    pivot_ratio: p.pivot_ratio,
                });
                break;
            }
        };
        min_ratio = min_ratio.min(solved.min_pivot_ratio);
        for (i, xi) in x.iter_mut().enumerate().take(n - 1) {
            let (b, l) = lay.slot(i);
            *xi += solved.x[b][l];
        }
        iterations += 1;
        reduced_gradient_into(&x, &grid, &pot, &mut g);
        let next = inf_norm(&g);
        history.push(next);
        if next > 10.0 * gn {
            failure = Some(NewtonFailure::Diverged {
                before: gn,
                after: next,
            });
            gn = next;
            break;
        }
        gn = next;
    }

    let mut out = MinimizeOutcome::from_field(HalfCellField::new(x, &grid)?, &grid, &pot)?;
    out.grad_inf_norm = gn;
    out.newton_converged = converged;
    out.newton_iterations = iterations;
    out.newton_history = history;
    out.newton_failure = failure;
    out.min_pivot_ratio = min_ratio.is_finite().then_some(min_ratio);
    Ok(out)
}
