use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{solve, InitMode, MinimizeOutcome, SolverConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultistartReport {
    /// One outcome per seed `cfg.seed + k`, in seed order. Unconverged runs
    /// are kept.
    pub outcomes: Vec<MinimizeOutcome>,
    /// `(max E − min E) / |min E|` over Newton-converged runs.
    pub energy_spread_rel: f64,
    /// Largest pairwise inf-norm distance between Newton-converged fields.
    pub max_pairwise_distance: f64,
    pub converged_runs: usize,
}

/// Independent solves from `k` randomly perturbed starts.
pub fn multistart(cfg: &SolverConfig, k: usize) -> Result<MultistartReport> {
    if k < 2 {
        return Err(Error::TooFewStarts(k));
    }
    cfg.validate()?;
    let outcomes = (0..k as u64)
        .into_par_iter()
        .map(|j| {
            let run = cfg
                .clone()
                .with_init(InitMode::RandomPerturbed)
                .with_seed(cfg.seed.wrapping_add(j));
            solve(&run)
        })
        .collect::<Result<Vec<_>>>()?;

    let good: Vec<&MinimizeOutcome> = outcomes.iter().filter(|o| o.newton_converged).collect();
    let (lo, hi) = good
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), o| {
            (lo.min(o.energy), hi.max(o.energy))
        });
    let energy_spread_rel = if good.is_empty() {
        f64::NAN
    } else {
        (hi - lo) / lo.abs()
    };
    let mut max_pairwise_distance = 0.0f64;
    for (i, a) in good.iter().enumerate() {
        for b in &good[i + 1..] {
            max_pairwise_distance = max_pairwise_distance.max(a.field.max_abs_diff(&b.field));
        }
    }
    Ok(MultistartReport {
        converged_runs: good.len(),
        outcomes,
        energy_spread_rel,
        max_pairwise_distance,
    })
}
