use thiserror::Error;

/// Errors raised by the core solver and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("theta out of range: {0} (expected 0 < theta < 1)")]
    ThetaOutOfRange(f64),
    #[error("epsilon must be finite and non-negative, got {0}")]
    EpsilonOutOfRange(f64),
    #[error("grid node count must be odd, got {0}")]
    EvenNodeCount(usize),
    #[error("grid needs at least 3 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("index {index} out of range for grid with {n} nodes")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("Dirichlet node must be 0, got {0}")]
    DirichletViolated(f64),
    #[error("theta too large for plateau competitor (L = {0}, need L >= 4)")]
    PlateauTooShort(f64),
    #[error("theta mismatch: solution has {solution}, reference has {reference}")]
    ThetaMismatch { solution: f64, reference: f64 },
    #[error("non-finite energy encountered at descent iteration {0}")]
    NonFiniteEnergy(usize),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid sweep plan: {0}")]
    InvalidPlan(String),
    #[error("multistart needs at least 2 runs, got {0}")]
    TooFewStarts(usize),
    #[error("solve did not converge at theta = {theta}, epsilon = {epsilon}")]
    Unconverged { theta: f64, epsilon: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
