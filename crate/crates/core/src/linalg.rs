//! Block-tridiagonal solver with 2×2 blocks.
//!
//! The Newton Jacobian of the reduced problem couples node `i` with `i ± 1`
//! (stencil) and with `n−1−i` (exchange symmetry). Pairing `i` with its mirror
//! turns that pattern into a block-tridiagonal matrix.

pub(crate) type Mat2 = [[f64; 2]; 2];

const ZERO: Mat2 = [[0.0; 2]; 2];

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = ZERO;
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn mul_vec(a: &Mat2, x: [f64; 2]) -> [f64; 2] {
    [
        a[0][0] * x[0] + a[0][1] * x[1],
        a[1][0] * x[0] + a[1][1] * x[1],
    ]
}

fn sub(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

fn norm(a: &Mat2) -> f64 {
    a.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
}

/// Failure of the block elimination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SingularPivot {
    pub block: usize,
    /// `|det(pivot)| / ‖pivot‖²` at the failing block.
    pub pivot_ratio: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct BlockTridiag {
    pub lower: Vec<Mat2>,
    pub diag: Vec<Mat2>,
    pub upper: Vec<Mat2>,
}

/// Result of a successful solve, with the smallest normalized pivot seen.
#[derive(Debug)]
pub(crate) struct Solved {
    pub x: Vec<[f64; 2]>,
    pub min_pivot_ratio: f64,
}

impl BlockTridiag {
    pub fn zeros(blocks: usize) -> Self {
        Self {
            lower: vec![ZERO; blocks],
            diag: vec![ZERO; blocks],
            upper: vec![ZERO; blocks],
        }
    }

    /// Block LU without inter-block pivoting.
    pub fn solve(&self, rhs: &[[f64; 2]]) -> Result<Solved, SingularPivot> {
        let nb = self.diag.len();
        let mut c: Vec<Mat2> = Vec::with_capacity(nb);
        let mut y: Vec<[f64; 2]> = Vec::with_capacity(nb);
        let mut min_ratio = f64::INFINITY;
        for j in 0..nb {
            let (piv, r) = if j == 0 {
                (self.diag[0], rhs[0])
            } else {
                let lc = mul(&self.lower[j], &c[j - 1]);
                let ly = mul_vec(&self.lower[j], y[j - 1]);
                (
                    sub(&self.diag[j], &lc),
                    [rhs[j][0] - ly[0], rhs[j][1] - ly[1]],
                )
            };
            let det = piv[0][0] * piv[1][1] - piv[0][1] * piv[1][0];
            let scale = norm(&piv);
            let ratio = if scale > 0.0 {
                det.abs() / (scale * scale)
            } else {
                0.0
            };
            if ratio.is_nan() || ratio <= 1e-14 || !det.is_finite() {
                return Err(SingularPivot {
                    block: j,
                    pivot_ratio: ratio,
                });
            }
            min_ratio = min_ratio.min(ratio);
            let inv = [
                [piv[1][1] / det, -piv[0][1] / det],
                [-piv[1][0] / det, piv[0][0] / det],
            ];
            c.push(mul(&inv, &self.upper[j]));
            y.push(mul_vec(&inv, r));
        }
        let mut x = y;
        for j in (0..nb.saturating_sub(1)).rev() {
            let cx = mul_vec(&c[j], x[j + 1]);
            x[j] = [x[j][0] - cx[0], x[j][1] - cx[1]];
        }
        Ok(Solved {
            x,
            min_pivot_ratio: min_ratio,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_dense_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for nb in [1usize, 2, 5, 40] {
            let mut m = BlockTridiag::zeros(nb);
            let mut dense = DMatrix::<f64>::zeros(2 * nb, 2 * nb);
            for j in 0..nb {
                for a in 0..2 {
                    for b in 0..2 {
                        let d = rng.gen_range(-1.0..1.0) + if a == b { 6.0 } else { 0.0 };
                        m.diag[j][a][b] = d;
                        dense[(2 * j + a, 2 * j + b)] = d;
                        if j > 0 {
                            let l = rng.gen_range(-1.0..1.0);
                            m.lower[j][a][b] = l;
                            dense[(2 * j + a, 2 * (j - 1) + b)] = l;
                        }
                        if j + 1 < nb {
                            let u = rng.gen_range(-1.0..1.0);
                            m.upper[j][a][b] = u;
                            dense[(2 * j + a, 2 * (j + 1) + b)] = u;
                        }
                    }
                }
            }
            let rhs: Vec<[f64; 2]> = (0..nb)
                .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
                .collect();
            let b = DVector::from_iterator(2 * nb, rhs.iter().flatten().copied());
            let want = dense.lu().solve(&b).unwrap();
            let got = m.solve(&rhs).unwrap();
            for j in 0..nb {
                for a in 0..2 {
                    assert!((got.x[j][a] - want[2 * j + a]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn reports_singular_pivot() {
        let mut m = BlockTridiag::zeros(3);
        m.diag[0] = [[1.0, 0.0], [0.0, 1.0]];
        m.diag[1] = [[1.0, 2.0], [2.0, 4.0]];
        m.diag[2] = [[1.0, 0.0], [0.0, 1.0]];
        let err = m.solve(&[[1.0, 1.0]; 3]).unwrap_err();
        assert_eq!(err.block, 1);
    }
}
