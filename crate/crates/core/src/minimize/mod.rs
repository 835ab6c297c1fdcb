//! Minimization of the discrete energy over the symmetric class, Newton
//! refinement of the Euler-Lagrange system, and positivity normalization.

mod competitor;
mod descent;
mod energy;
mod multistart;
mod newton;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ThetaFamily;
use crate::grid::{Grid, HalfCellField};
use crate::potential::PotentialParams;

pub use competitor::build_test_function;
pub use descent::{descend, ARMIJO_C, ARMIJO_SHRINK};
pub use energy::{energy, reduced_energy, reduced_gradient};
pub use multistart::{multistart, MultistartReport};
pub use newton::newton_refine;

pub(crate) use energy::{inf_norm, reduced_energy_raw, reduced_gradient_into};

/// Amplitude of the uniform noise added by [`InitMode::RandomPerturbed`].
pub const PERTURBATION_AMPLITUDE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMode {
    /// `v_i = √(1−θ²)·cos(θ x_i)`, the exact ε = 0 solution.
    GlProfile,
    /// The GL profile plus uniform noise in `[−0.1, 0.1]` drawn from `seed`.
    RandomPerturbed,
    /// Caller supplies the start field (see [`solve_from`]).
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub theta: f64,
    pub epsilon: f64,
    pub n: usize,
    pub descent_tol: f64,
    pub newton_tol: f64,
    pub max_descent_iters: usize,
    pub max_newton_iters: usize,
    pub seed: u64,
    pub init_mode: InitMode,
}

impl SolverConfig {
    pub fn new(theta: f64, epsilon: f64, n: usize) -> Self {
        Self {
            theta,
            epsilon,
            n,
            descent_tol: 1e-6,
            newton_tol: 1e-10,
            max_descent_iters: 200_000,
            max_newton_iters: 50,
            seed: 0,
            init_mode: InitMode::GlProfile,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_init(mut self, init_mode: InitMode) -> Self {
        self.init_mode = init_mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.potential()?;
        let tols = [self.descent_tol, self.newton_tol];
        if tols.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        if self.newton_tol >= self.descent_tol {
            return Err(Error::InvalidConfig(
                "newton_tol must be smaller than descent_tol".into(),
            ));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.theta, self.n)
    }

    pub fn potential(&self) -> Result<PotentialParams> {
        PotentialParams::new(self.epsilon)
    }
}

/// Why Newton refinement stopped without meeting `newton_tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NewtonFailure {
    /// Elimination hit a (near) singular 2×2 pivot; `pivot_ratio` is
    /// `|det| / ‖pivot‖²` there.
    SingularJacobian {
        block: usize,
        pivot_ratio: f64,
    },
    /// Gradient norm grew by more than 10× in one step.
    Diverged {
        before: f64,
        after: f64,
    },
    NonFinite,
    IterationCap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOutcome {
    pub field: HalfCellField,
    pub energy: f64,
    pub grad_inf_norm: f64,
    pub descent_converged: bool,
    pub descent_iterations: usize,
    /// Energies of the start and every accepted descent step.
    pub energy_history: Vec<f64>,
    pub newton_converged: bool,
    pub newton_iterations: usize,
    /// Gradient inf-norm before each Newton step and after the last one.
    pub newton_history: Vec<f64>,
    pub newton_failure: Option<NewtonFailure>,
    /// Smallest normalized pivot seen in the Newton solves.
    pub min_pivot_ratio: Option<f64>,
    pub polished: bool,
    pub positive: bool,
}

impl MinimizeOutcome {
    pub(crate) fn from_field(
        field: HalfCellField,
        grid: &Grid,
        pot: &PotentialParams,
    ) -> Result<Self> {
        let energy = reduced_energy(&field, grid, pot)?;
        let grad = reduced_gradient(&field, grid, pot)?;
        let positive = field.is_positive_interior();
        Ok(Self {
            field,
            energy,
            grad_inf_norm: inf_norm(&grad),
            descent_converged: false,
            descent_iterations: 0,
            energy_history: vec![energy],
            newton_converged: false,
            newton_iterations: 0,
            newton_history: Vec::new(),
            newton_failure: None,
            min_pivot_ratio: None,
            polished: false,
            positive,
        })
    }
}

/// Start field selected by `cfg.init_mode`.
pub fn initial_field(cfg: &SolverConfig) -> Result<HalfCellField> {
    let grid = cfg.grid()?;
    let fam = ThetaFamily::new(cfg.theta)?;
    match cfg.init_mode {
        InitMode::GlProfile => Ok(HalfCellField::from_fn(&grid, |x| fam.u(x).0)),
        InitMode::RandomPerturbed => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            Ok(HalfCellField::from_fn(&grid, |x| {
                fam.u(x).0 + rng.gen_range(-PERTURBATION_AMPLITUDE..=PERTURBATION_AMPLITUDE)
            }))
        }
        InitMode::Custom => Err(Error::InvalidConfig(
            "custom init mode needs an explicit start field".into(),
        )),
    }
}

/// Replaces a converged field with its absolute value when some interior
/// component is negative, then re-minimizes. `|v|` never has larger energy
/// since `W_ε` is even in each argument.
pub fn polish_positive(outcome: MinimizeOutcome, cfg: &SolverConfig) -> Result<MinimizeOutcome> {
    if outcome.field.is_positive_interior() {
        return Ok(MinimizeOutcome {
            positive: true,
            ..outcome
        });
    }
    let flipped = outcome.field.abs();
    let mut out = descend_then_newton(&flipped, cfg)?;
    out.polished = true;
    out.positive = out.field.is_positive_interior();
    Ok(out)
}

fn descend_then_newton(start: &HalfCellField, cfg: &SolverConfig) -> Result<MinimizeOutcome> {
    let desc = descend(start, cfg)?;
    let mut out = newton_refine(&desc.field, cfg)?;
    out.descent_converged = desc.descent_converged;
    out.descent_iterations = desc.descent_iterations;
    out.energy_history = desc.energy_history;
    Ok(out)
}

/// Full pipeline from an explicit start: descent, Newton, positivity polish.
pub fn solve_from(start: &HalfCellField, cfg: &SolverConfig) -> Result<MinimizeOutcome> {
    cfg.validate()?;
    let out = descend_then_newton(start, cfg)?;
    polish_positive(out, cfg)
}

/// Full pipeline from the start field selected by `cfg.init_mode`.
pub fn solve(cfg: &SolverConfig) -> Result<MinimizeOutcome> {
    cfg.validate()?;
    solve_from(&initial_field(cfg)?, cfg)
}
