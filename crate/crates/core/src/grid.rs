//! Uniform mesh on the quarter period `[0, L]`, `L = π/(2θ)`, together with
//! the reduced field representation used by the solver.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    theta: f64,
    n: usize,
    length: f64,
    h: f64,
}

impl Grid {
    pub fn new(theta: f64, n: usize) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::ThetaOutOfRange(theta));
        }
        if n < 3 {
            return Err(Error::TooFewNodes(n));
        }
        if n.is_multiple_of(2) {
            return Err(Error::EvenNodeCount(n));
        }
        let length = PI / (2.0 * theta);
        Ok(Self {
            theta,
            n,
            length,
            h: length / (n - 1) as f64,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Quarter period `L`.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Node `i`; the last node returns `L` itself rather than `(n−1)·h`.
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.length
        } else {
            i as f64 * self.h
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Trapezoid weight of node `i` (½ at the ends, 1 inside).
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n {
            0.5
        } else {
            1.0
        }
    }

    /// Index of the node at `L − x_i`.
    pub fn mirror_index(&self, i: usize) -> Result<usize> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            });
        }
        Ok(self.n - 1 - i)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: len,
            });
        }
        Ok(())
    }

    /// Three-point second difference with a reflecting ghost node at `x = 0`
    /// (`v′(0) = 0`). The entry at the Dirichlet node `x = L` is left at 0.
    pub fn second_derivative(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v.len())?;
        let h2 = self.h * self.h;
        let mut out = vec![0.0; self.n];
        out[0] = 2.0 * (v[1] - v[0]) / h2;
        for i in 1..self.n - 1 {
            out[i] = ((v[i - 1] - v[i]) + (v[i + 1] - v[i])) / h2;
        }
        Ok(out)
    }

    pub fn trapezoid(&self, values: &[f64]) -> Result<f64> {
        self.check_len(values.len())?;
        let inner: f64 = values[1..self.n - 1].iter().sum();
        Ok(self.h * (0.5 * (values[0] + values[self.n - 1]) + inner))
    }
}

/// Nodal values `v_i ≈ u₁(x_i)` of a symmetric candidate. The pair is
/// recovered as `u₁(x) = v(x)`, `u₂(x) = v(L − x)`, so `u₂(0) = v(L) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfCellField {
    values: Vec<f64>,
}

impl HalfCellField {
    pub fn new(values: Vec<f64>, grid: &Grid) -> Result<Self> {
        grid.check_len(values.len())?;
        let last = values[values.len() - 1];
        if last != 0.0 {
            return Err(Error::DirichletViolated(last));
        }
        Ok(Self { values })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            values: vec![0.0; grid.n()],
        }
    }

    /// Samples `f` at the nodes and pins the Dirichlet node to 0.
    pub fn from_fn(grid: &Grid, f: impl FnMut(f64) -> f64) -> Self {
        let mut values: Vec<f64> = grid.nodes().into_iter().map(f).collect();
        values[grid.n() - 1] = 0.0;
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `(u₁, u₂)` on the quarter-period nodes.
    pub fn encode(&self) -> (Vec<f64>, Vec<f64>) {
        let u1 = self.values.clone();
        let u2 = self.values.iter().rev().copied().collect();
        (u1, u2)
    }

    pub fn abs(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Whether `u₁, u₂ > 0` at every interior node of `(0, L)`.
    pub fn is_positive_interior(&self) -> bool {
        let n = self.values.len();
        self.values[1..n - 1].iter().all(|&v| v > 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_examples() {
        let g = Grid::new(0.1, 5).unwrap();
        assert!((g.length() - 15.707_963_267_948_966).abs() < 1e-12);
        assert!((g.h() - 3.926_990_816_987_241_5).abs() < 1e-12);
        let g = Grid::new(0.5, 3).unwrap();
        assert!((g.h() - PI / 2.0).abs() < 1e-15);
        assert!((g.h() * 2.0 - g.length()).abs() < 1e-15);
        assert_eq!(g.x(0), 0.0);
        assert_eq!(g.x(2), g.length());
    }

    #[test]
    fn build_rejections_are_distinct() {
        assert_eq!(Grid::new(0.0, 5), Err(Error::ThetaOutOfRange(0.0)));
        assert_eq!(Grid::new(1.0, 5), Err(Error::ThetaOutOfRange(1.0)));
        assert_eq!(Grid::new(0.1, 4), Err(Error::EvenNodeCount(4)));
        assert_eq!(Grid::new(0.1, 1), Err(Error::TooFewNodes(1)));
        assert!(Error::ThetaOutOfRange(0.0)
            .to_string()
            .contains("theta out of range"));
    }

    #[test]
    fn mirror() {
        let g = Grid::new(0.1, 101).unwrap();
        assert_eq!(g.mirror_index(0).unwrap(), 100);
        assert_eq!(g.mirror_index(50).unwrap(), 50);
        assert!(g.mirror_index(101).is_err());
        for i in 0..101 {
            assert_eq!(g.mirror_index(g.mirror_index(i).unwrap()).unwrap(), i);
        }
    }

    #[test]
    fn second_derivative_exact_on_quadratics() {
        let g = Grid::new(0.1, 65).unwrap();
        assert!(g
            .second_derivative(&vec![0.0; 65])
            .unwrap()
            .iter()
            .all(|&d| d == 0.0));
        let q: Vec<f64> = g.nodes().iter().map(|x| x * x - 3.0 * x + 1.0).collect();
        let d = g.second_derivative(&q).unwrap();
        for di in &d[1..64] {
            assert!((di - 2.0).abs() < 1e-10, "{di}");
        }
        let affine: Vec<f64> = g.nodes().iter().map(|x| 0.5 * x - 2.0).collect();
        let d = g.second_derivative(&affine).unwrap();
        for di in &d[1..64] {
            assert!(di.abs() < 1e-12);
        }
        assert!(g.second_derivative(&[0.0; 3]).is_err());
    }

    fn cos_error(n: usize) -> f64 {
        let theta = 0.1;
        let g = Grid::new(theta, n).unwrap();
        let v: Vec<f64> = g.nodes().iter().map(|x| (theta * x).cos()).collect();
        let d = g.second_derivative(&v).unwrap();
        (0..n - 1)
            .map(|i| (d[i] + theta * theta * v[i]).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn second_derivative_is_second_order() {
        let (e1, e2) = (cos_error(1025), cos_error(2049));
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
        assert!((ratio.log2() - 2.0).abs() < 0.1);
    }

    #[test]
    fn trapezoid_examples() {
        let g = Grid::new(0.1, 4097).unwrap();
        let ones = vec![1.0; 4097];
        assert!((g.trapezoid(&ones).unwrap() - g.length()).abs() < 1e-12);
        let lin = g.nodes();
        let l = g.length();
        assert!((g.trapezoid(&lin).unwrap() - l * l / 2.0).abs() < 1e-10);
        let cos2: Vec<f64> = lin.iter().map(|x| (0.1 * x).cos().powi(2)).collect();
        let closed = l / 2.0 + (0.2 * l).sin() / 0.4;
        assert!((g.trapezoid(&cos2).unwrap() - closed).abs() <= g.h() * g.h());
        assert!(g.trapezoid(&[1.0; 3]).is_err());
    }

    fn sin_quad_error(n: usize) -> f64 {
        let g = Grid::new(0.1, n).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|x| (0.1 * x).sin()).collect();
        // ∫₀^L sin(θx) dx = 1/θ since θL = π/2.
        (g.trapezoid(&f).unwrap() - 10.0).abs()
    }

    #[test]
    fn trapezoid_is_second_order() {
        let ratio = sin_quad_error(257) / sin_quad_error(513);
        assert!((ratio.log2() - 2.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn half_cell_field_invariants() {
        let g = Grid::new(0.2, 9).unwrap();
        assert_eq!(
            HalfCellField::new(vec![1.0; 9], &g),
            Err(Error::DirichletViolated(1.0))
        );
        assert!(HalfCellField::new(vec![0.0; 7], &g).is_err());
        let f = HalfCellField::from_fn(&g, |x| 1.0 + x);
        let (u1, u2) = f.encode();
        assert_eq!(u2[0], 0.0);
        for i in 0..9 {
            assert_eq!(u1[g.mirror_index(i).unwrap()], u2[i]);
        }
        assert!(f.is_positive_interior());
    }
}
