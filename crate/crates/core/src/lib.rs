//! Periodic solutions of `u″ = ∇W_ε(u)` for the four-well potential
//! `W_ε(u) = ¼(1 − |u|²)² + (ε/2)u₁²u₂²`, computed by symmetric energy
//! minimization, and numerical certificates that they violate the pointwise
//! gradient bound `½|u′|² ≤ W(u)`.

pub mod error;
pub mod exact;
pub mod grid;
mod linalg;
pub mod minimize;
pub mod pipeline;
pub mod potential;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use exact::ThetaFamily;
pub use grid::{Grid, HalfCellField};
pub use minimize::{InitMode, MinimizeOutcome, SolverConfig};
pub use pipeline::{run, run_from, SolveRun};
pub use potential::PotentialParams;
pub use sweep::{Study, SweepPlan};
pub use verify::{FullPeriodSolution, Tolerances, VerificationReport};
