//! Parameter studies: ε → 0 continuation, θ scan for nontriviality, and the
//! defect sign map over (θ, ε).
//!
//! Independent cells run on a rayon pool capped by `MODICA_THREADS`; results
//! are always returned in plan order.

use std::f64::consts::PI;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{defect_threshold, ThetaFamily};
use crate::grid::Grid;
use crate::minimize::{InitMode, SolverConfig};
use crate::pipeline::{run, run_from};

pub const THREADS_ENV: &str = "MODICA_THREADS";
pub const SCAN_SEEDS: u64 = 5;
pub const NONTRIVIAL_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Study {
    EpsConvergence,
    ThetaScan,
    DefectMap,
}

impl Study {
    pub fn name(&self) -> &'static str {
        match self {
            Study::EpsConvergence => "eps_convergence",
            Study::ThetaScan => "theta_scan",
            Study::DefectMap => "defect_map",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "eps_convergence" => Some(Study::EpsConvergence),
            "theta_scan" => Some(Study::ThetaScan),
            "defect_map" => Some(Study::DefectMap),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub study: Study,
    pub theta_list: Vec<f64>,
    pub eps_list: Vec<f64>,
    pub n: usize,
    pub base_seed: u64,
    pub outputs: PathBuf,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidPlan(m));
        if self.theta_list.is_empty() {
            return bad("theta_list is empty".into());
        }
        if self.eps_list.is_empty() {
            return bad("eps_list is empty".into());
        }
        for &t in &self.theta_list {
            ThetaFamily::new(t)?;
        }
        for &e in &self.eps_list {
            if !(e.is_finite() && e >= 0.0) {
                return Err(Error::EpsilonOutOfRange(e));
            }
        }
        Grid::new(self.theta_list[0], self.n)?;
        match self.study {
            Study::EpsConvergence => {
                if self.theta_list.len() != 1 {
                    return bad("eps_convergence takes exactly one theta".into());
                }
                check_decreasing(&self.eps_list)
            }
            Study::ThetaScan => {
                if self.eps_list.len() != 1 {
                    return bad("theta_scan takes exactly one eps".into());
                }
                check_increasing(&self.theta_list)
            }
            Study::DefectMap => Ok(()),
        }
    }
}

fn check_decreasing(eps: &[f64]) -> Result<()> {
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidPlan(
            "eps_list must be strictly decreasing for continuation".into(),
        ));
    }
    Ok(())
}

fn check_increasing(thetas: &[f64]) -> Result<()> {
    if thetas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidPlan(
            "theta_list must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Pool sized by `MODICA_THREADS`, or rayon's default when unset.
pub fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsRow {
    pub epsilon: f64,
    pub c1_distance: f64,
    pub defect_min: f64,
    pub energy: f64,
    pub hamiltonian_spread: f64,
    pub newton_converged: bool,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsConvergenceTable {
    pub theta: f64,
    pub n: usize,
    pub rows: Vec<EpsRow>,
    /// `None` for a single row.
    pub monotone_decreasing: Option<bool>,
    /// Set when an unconverged solve cut the chain short; `rows` then holds
    /// the partial results.
    pub aborted: Option<String>,
}

/// Warm-started chain over a strictly decreasing ε list; the first solve
/// starts from the GL profile, each later one from its predecessor.
pub fn eps_convergence_study(
    theta: f64,
    eps_list: &[f64],
    n: usize,
) -> Result<EpsConvergenceTable> {
    if eps_list.is_empty() {
        return Err(Error::InvalidPlan("eps_list is empty".into()));
    }
    check_decreasing(eps_list)?;
    let mut rows = Vec::with_capacity(eps_list.len());
    let mut aborted = None;
    let mut prev = None;
    for &eps in eps_list {
        let cfg = SolverConfig::new(theta, eps, n);
        let solved = match &prev {
            None => run(&cfg),
            Some(start) => run_from(start, &cfg.clone().with_init(InitMode::Custom)),
        }?;
        rows.push(EpsRow {
            epsilon: eps,
            c1_distance: solved.report.c1_distance_to_gl,
            defect_min: solved.report.defect_min,
            energy: solved.report.energy_quarter,
            hamiltonian_spread: solved.report.hamiltonian_spread,
            newton_converged: solved.outcome.newton_converged,
            certified: solved.certified(),
        });
        if !solved.outcome.newton_converged {
            aborted = Some(format!("newton did not converge at epsilon = {eps}"));
            break;
        }
        prev = Some(solved.outcome.field);
    }
    let monotone_decreasing =
        (rows.len() > 1).then(|| rows.windows(2).all(|w| w[1].c1_distance < w[0].c1_distance));
    Ok(EpsConvergenceTable {
        theta,
        n,
        rows,
        monotone_decreasing,
        aborted,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaRow {
    pub theta: f64,
    pub best_energy: f64,
    pub trivial_energy: f64,
    pub nontrivial: bool,
    pub converged_runs: usize,
    pub best_defect_min: f64,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaScanTable {
    pub epsilon: f64,
    pub n: usize,
    pub rows: Vec<ThetaRow>,
    /// Largest scanned θ below which every scanned θ gave a nontrivial minimizer.
    pub last_nontrivial_theta: Option<f64>,
    /// First scanned θ whose best minimizer was trivial.
    pub first_trivial_theta: Option<f64>,
    /// `√(2/3)`, reported alongside for comparison only.
    pub defect_threshold: f64,
}

/// For each θ, five seeded random starts; the lowest-energy converged run
/// decides nontriviality against `π/(8θ) − 1e−6`.
pub fn theta_threshold_scan(
    theta_list: &[f64],
    eps: f64,
    n: usize,
    base_seed: u64,
) -> Result<ThetaScanTable> {
    if theta_list.is_empty() {
        return Err(Error::InvalidPlan("theta_list is empty".into()));
    }
    check_increasing(theta_list)?;
    let cells: Vec<(usize, u64)> = (0..theta_list.len())
        .flat_map(|i| (0..SCAN_SEEDS).map(move |s| (i, s)))
        .collect();
    let results: Vec<_> = thread_pool().install(|| {
        cells
            .par_iter()
            .map(|&(i, s)| {
                let cfg = SolverConfig::new(theta_list[i], eps, n)
                    .with_init(InitMode::RandomPerturbed)
                    .with_seed(base_seed.wrapping_add(s));
                run(&cfg)
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(theta_list.len());
    for (i, &theta) in theta_list.iter().enumerate() {
        let trivial_energy = PI / (8.0 * theta);
        let mut best: Option<(f64, f64)> = None;
        let mut converged_runs = 0;
        let mut failures = Vec::new();
        for (cell, res) in cells.iter().zip(&results) {
            if cell.0 != i {
                continue;
            }
            match res {
                Ok(r) if r.outcome.newton_converged => {
                    converged_runs += 1;
                    let e = r.report.energy_quarter;
                    if best.is_none_or(|(b, _)| e < b) {
                        best = Some((e, r.report.defect_min));
                    }
                }
                Ok(r) => failures.push(format!(
                    "seed {}: newton failed ({:?})",
                    base_seed.wrapping_add(cell.1),
                    r.outcome.newton_failure
                )),
                Err(e) => failures.push(format!("seed {}: {e}", base_seed.wrapping_add(cell.1))),
            }
        }
        let (best_energy, best_defect_min) = best.unwrap_or((f64::NAN, f64::NAN));
        rows.push(ThetaRow {
            theta,
            best_energy,
            trivial_energy,
            nontrivial: best_energy < trivial_energy - NONTRIVIAL_MARGIN,
            converged_runs,
            best_defect_min,
            failures,
        });
    }
    let first_trivial = rows.iter().position(|r| !r.nontrivial);
    let last_nontrivial_theta = match first_trivial {
        Some(0) => None,
        Some(k) => Some(rows[k - 1].theta),
        None => rows.last().map(|r| r.theta),
    };
    Ok(ThetaScanTable {
        epsilon: eps,
        n,
        last_nontrivial_theta,
        first_trivial_theta: first_trivial.map(|k| rows[k].theta),
        rows,
        defect_threshold: defect_threshold(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectCell {
    pub theta: f64,
    pub epsilon: f64,
    pub defect_min: f64,
    pub defect_constant: f64,
    pub energy: f64,
    pub nontrivial: bool,
    pub newton_converged: bool,
    pub certified: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectMapTable {
    pub n: usize,
    /// Row-major over `eps_list`, then `theta_list`, in plan order.
    pub cells: Vec<DefectCell>,
    /// Where `defect_min` changes sign along θ for the smallest ε (linear
    /// interpolation between neighbouring θ), if it does.
    pub sign_boundary_smallest_eps: Option<f64>,
    pub defect_threshold: f64,
}

/// `defect_min` on the (θ, ε) grid, each cell solved from the GL profile.
pub fn defect_sign_map(theta_list: &[f64], eps_list: &[f64], n: usize) -> Result<DefectMapTable> {
    if theta_list.is_empty() || eps_list.is_empty() {
        return Err(Error::InvalidPlan(
            "theta_list and eps_list must be nonempty".into(),
        ));
    }
    for &t in theta_list {
        ThetaFamily::new(t)?;
    }
    let pairs: Vec<(f64, f64)> = eps_list
        .iter()
        .flat_map(|&e| theta_list.iter().map(move |&t| (t, e)))
        .collect();
    let cells: Vec<DefectCell> = thread_pool().install(|| {
        pairs
            .par_iter()
            .map(|&(theta, eps)| {
                let defect_constant = ThetaFamily::new(theta)
                    .map(|f| f.defect_constant())
                    .unwrap_or(f64::NAN);
                match run(&SolverConfig::new(theta, eps, n)) {
                    Ok(r) => DefectCell {
                        theta,
                        epsilon: eps,
                        defect_min: r.report.defect_min,
                        defect_constant,
                        energy: r.report.energy_quarter,
                        nontrivial: r.report.nontrivial,
                        newton_converged: r.outcome.newton_converged,
                        certified: r.certified(),
                        error: None,
                    },
                    Err(e) => DefectCell {
                        theta,
                        epsilon: eps,
                        defect_min: f64::NAN,
                        defect_constant,
                        energy: f64::NAN,
                        nontrivial: false,
                        newton_converged: false,
                        certified: false,
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect()
    });

    let smallest = eps_list.iter().copied().fold(f64::INFINITY, f64::min);
    let mut line: Vec<&DefectCell> = cells.iter().filter(|c| c.epsilon == smallest).collect();
    line.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    let sign_boundary_smallest_eps = line.windows(2).find_map(|w| {
        let (a, b) = (w[0], w[1]);
        (a.defect_min > 0.0 && b.defect_min <= 0.0)
            .then(|| a.theta + (b.theta - a.theta) * a.defect_min / (a.defect_min - b.defect_min))
    });
    Ok(DefectMapTable {
        n,
        cells,
        sign_boundary_smallest_eps,
        defect_threshold: defect_threshold(),
    })
}
