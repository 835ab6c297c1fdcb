use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::HalfCellField;
use crate::minimize::{solve, solve_from, MinimizeOutcome, SolverConfig};
use crate::verify::{verify, FullPeriodSolution, VerificationReport};

/// A solved and verified configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveRun {
    pub config: SolverConfig,
    pub outcome: MinimizeOutcome,
    pub solution: FullPeriodSolution,
    pub report: VerificationReport,
}

impl SolveRun {
    /// Newton converged and the counterexample certificate holds.
    pub fn certified(&self) -> bool {
        self.outcome.newton_converged && self.report.counterexample_certified
    }
}

fn finish(cfg: &SolverConfig, outcome: MinimizeOutcome) -> Result<SolveRun> {
    let grid = cfg.grid()?;
    let pot = cfg.potential()?;
    let (solution, report) = verify(&outcome.field, &grid, &pot)?;
    Ok(SolveRun {
        config: cfg.clone(),
        outcome,
        solution,
        report,
    })
}

/// Descent, Newton, positivity polish, extension, verification.
pub fn run(cfg: &SolverConfig) -> Result<SolveRun> {
    finish(cfg, solve(cfg)?)
}

pub fn run_from(start: &HalfCellField, cfg: &SolverConfig) -> Result<SolveRun> {
    finish(cfg, solve_from(start, cfg)?)
}
