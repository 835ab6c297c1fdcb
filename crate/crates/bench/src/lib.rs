//! Benchmark fixtures shared by the criterion targets.

use modica_core::{HalfCellField, InitMode, SolverConfig};

/// The main experiment: θ = 0.1, ε = 0.01.
pub fn headline_config(n: usize) -> SolverConfig {
    SolverConfig::new(0.1, 0.01, n)
}

/// A seeded perturbed start for `cfg`.
pub fn perturbed_start(cfg: &SolverConfig, seed: u64) -> HalfCellField {
    let cfg = cfg
        .clone()
        .with_init(InitMode::RandomPerturbed)
        .with_seed(seed);
    modica_core::minimize::initial_field(&cfg).expect("valid config")
}
