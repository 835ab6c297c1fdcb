use crate::error::{Error, Result};
use crate::grid::{Grid, HalfCellField};

/// Plateau competitor in the symmetric class with θ-independent energy.
///
/// `u₂` ramps from 0 to 1 on `[0, 1]` and stays at 1 up to `L/2 − 1`, while
/// `u₁ = 0` there; across `[L/2 − 1, L/2 + 1]` the two components exchange
/// linearly. Encoded as `v = u₁`, which is 0 on `[0, L/2 − 1]`, rises
/// linearly to 1 at `L/2 + 1`, stays at 1, and ramps down to 0 on `[L−1, L]`.
pub fn build_test_function(grid: &Grid) -> Result<HalfCellField> {
    let l = grid.length();
    if l < 4.0 {
        return Err(Error::PlateauTooShort(l));
    }
    let mid = 0.5 * l;
    Ok(HalfCellField::from_fn(grid, |x| {
        if x <= mid - 1.0 {
            0.0
        } else if x <= mid + 1.0 {
            0.5 * (x - (mid - 1.0))
        } else if x <= l - 1.0 {
            1.0
        } else {
            (l - x).max(0.0)
        }
    }))
}
