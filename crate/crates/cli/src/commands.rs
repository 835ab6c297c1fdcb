use std::f64::consts::PI;
use std::path::Path;

use modica_core::minimize::NewtonFailure;
use modica_core::sweep::{defect_sign_map, eps_convergence_study, theta_threshold_scan};
use modica_core::{
    run, FullPeriodSolution, InitMode, SolverConfig, Study, SweepPlan, Tolerances,
    VerificationReport,
};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::manifest::{write_json, Manifest};
use crate::plan::parse_plan;
use crate::say;
use crate::table::{fmt_f64, SolutionTable};

pub const SOLUTION_FILE: &str = "solution.csv";
pub const REPORT_FILE: &str = "report.json";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Relative tolerance for column consistency checks in `verify`.
pub const CONSISTENCY_TOL: f64 = 1e-12;

/// Exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Certified,
    Uncertified,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Self::Certified => 0,
            Self::Uncertified => 2,
        }
    }
}

#[derive(Debug, Serialize)]
struct SolverSummary {
    energy: f64,
    grad_inf_norm: f64,
    descent_converged: bool,
    descent_iterations: usize,
    newton_converged: bool,
    newton_iterations: usize,
    newton_failure: Option<NewtonFailure>,
    min_pivot_ratio: Option<f64>,
    polished: bool,
    positive: bool,
}

#[derive(Debug, Serialize)]
struct SolveReport<'a> {
    certified: bool,
    solver: SolverSummary,
    verification: &'a VerificationReport,
}

fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn solve(
    theta: f64,
    eps: f64,
    grid: usize,
    seed: Option<u64>,
    init: InitMode,
    out: &Path,
) -> CliResult<Status> {
    let mut cfg = SolverConfig::new(theta, eps, grid).with_init(init);
    if let Some(s) = seed {
        cfg = cfg.with_seed(s);
    }
    cfg.validate()?;
    create_dir(out)?;
    let r = run(&cfg)?;
    let o = &r.outcome;
    let certified = r.certified();

    write_text(
        &out.join(SOLUTION_FILE),
        &SolutionTable::from_solution(&r.solution).to_csv_string(),
    )?;
    let report = SolveReport {
        certified,
        solver: SolverSummary {
            energy: o.energy,
            grad_inf_norm: o.grad_inf_norm,
            descent_converged: o.descent_converged,
            descent_iterations: o.descent_iterations,
            newton_converged: o.newton_converged,
            newton_iterations: o.newton_iterations,
            newton_failure: o.newton_failure,
            min_pivot_ratio: o.min_pivot_ratio,
            polished: o.polished,
            positive: o.positive,
        },
        verification: &r.report,
    };
    write_json(&out.join(REPORT_FILE), &report)?;
    write_json(
        &out.join(MANIFEST_FILE),
        &Manifest::new("solve", &cfg, &[SOLUTION_FILE, REPORT_FILE]),
    )?;

    say(&format!(
        "theta={theta} eps={eps} n={grid}: energy={:.12e} defect_min={:.6e} newton_converged={} certified={certified}",
        o.energy, r.report.defect_min, o.newton_converged
    ));
    if !o.newton_converged {
        eprintln!(
            "warning: Newton refinement did not converge ({:?})",
            o.newton_failure
        );
    } else if !certified {
        eprintln!("warning: solution is not a certified counterexample");
    }
    Ok(if certified {
        Status::Certified
    } else {
        Status::Uncertified
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= CONSISTENCY_TOL * (1.0 + b.abs())
}

/// First row (1-based data line, counting the header as line 1) where the
/// stored column disagrees with the recomputed one.
fn check_column(name: &str, stored: &[f64], expected: &[f64]) -> CliResult<()> {
    match stored
        .iter()
        .zip(expected)
        .position(|(&s, &e)| !close(s, e))
    {
        None => Ok(()),
        Some(j) => Err(CliError::Corrupt(format!(
            "line {}: column `{name}` is {:e}, recomputed {:e}",
            j + 2,
            stored[j],
            expected[j]
        ))),
    }
}

/// θ from the first abscissa, which sits at `−L = −π/(2θ)`.
fn infer_theta(t: &SolutionTable) -> CliResult<f64> {
    let x0 = t.x[0];
    if x0 >= 0.0 {
        return Err(CliError::Corrupt(format!(
            "line 2: first abscissa must be negative, found {x0:e}"
        )));
    }
    let theta = PI / (2.0 * -x0);
    if !(theta > 0.0 && theta < 1.0) {
        return Err(CliError::Corrupt(format!(
            "line 2: first abscissa implies theta = {theta}, outside (0, 1)"
        )));
    }
    Ok(theta)
}

/// Least-squares fit of ε in `W = ¼(1−|u|²)² + ε·(½u₁²u₂²)`. When the
/// coupling term vanishes everywhere ε is unidentifiable and 0 is returned.
fn infer_epsilon(t: &SolutionTable) -> CliResult<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for j in 0..t.len() {
        let (a, b) = (t.u1[j], t.u2[j]);
        let s = 1.0 - a * a - b * b;
        let p = 0.5 * a * a * b * b;
        num += (t.w[j] - 0.25 * s * s) * p;
        den += p * p;
    }
    if den < f64::MIN_POSITIVE {
        return Ok(0.0);
    }
    let eps = num / den;
    if eps < 0.0 {
        if eps > -CONSISTENCY_TOL {
            return Ok(0.0);
        }
        return Err(CliError::Corrupt(format!(
            "column `W` implies a negative coupling eps = {eps:e}"
        )));
    }
    Ok(eps)
}

/// Recomputes the verification report from a solution file alone.
pub fn verify(path: &Path, eps: Option<f64>) -> CliResult<(VerificationReport, Status)> {
    let t = SolutionTable::read(path)?;
    let m = t.len();
    if m < 8 || !m.is_multiple_of(4) {
        return Err(CliError::Input(format!(
            "{}: expected a positive multiple of 4 data rows (>= 8), found {m}",
            path.display()
        )));
    }
    let theta = infer_theta(&t)?;
    let eps = match eps {
        Some(e) => e,
        None => infer_epsilon(&t)?,
    };
    let sol =
        FullPeriodSolution::from_samples(theta, eps, t.x.clone(), t.u1.clone(), t.u2.clone())?;

    let x0 = t.x[0];
    let xs: Vec<f64> = (0..m).map(|j| x0 + j as f64 * sol.h).collect();
    check_column("x", &t.x, &xs)?;
    check_column("du1", &t.du1, &sol.du1)?;
    check_column("du2", &t.du2, &sol.du2)?;
    let expected = SolutionTable::from_solution(&sol);
    check_column("W", &t.w, &expected.w)?;
    check_column("defect", &t.defect, &expected.defect)?;

    let report = VerificationReport::compute(&sol, Tolerances::default())?;
    let status = if report.counterexample_certified {
        Status::Certified
    } else {
        Status::Uncertified
    };
    Ok((report, status))
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn write_table(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let wrap = |e: csv::Error| CliError::Input(format!("{}: {e}", path.display()));
    w.write_record(header).map_err(wrap)?;
    for r in rows {
        w.write_record(r).map_err(wrap)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Runs a plan file and writes `<study>.csv`, `<study>.json` and a manifest
/// into the plan's output directory.
pub fn sweep(plan_path: &Path) -> CliResult<SweepPlan> {
    let text = std::fs::read_to_string(plan_path).map_err(|e| CliError::io(plan_path, e))?;
    let base = plan_path.parent().unwrap_or(Path::new("."));
    let plan = parse_plan(&text, base).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", plan_path.display())),
        other => other,
    })?;
    create_dir(&plan.outputs)?;
    let name = plan.study.name();
    let csv_name = format!("{name}.csv");
    let json_name = format!("{name}.json");
    let csv_path = plan.outputs.join(&csv_name);
    let json_path = plan.outputs.join(&json_name);

    match plan.study {
        Study::EpsConvergence => {
            let t = eps_convergence_study(plan.theta_list[0], &plan.eps_list, plan.n)?;
            let rows = t
                .rows
                .iter()
                .map(|r| {
                    vec![
                        fmt_f64(r.epsilon),
                        fmt_f64(r.c1_distance),
                        fmt_f64(r.defect_min),
                        fmt_f64(r.energy),
                        fmt_f64(r.hamiltonian_spread),
                        r.newton_converged.to_string(),
                        r.certified.to_string(),
                    ]
                })
                .collect();
            write_table(
                &csv_path,
                &[
                    "epsilon",
                    "c1_distance",
                    "defect_min",
                    "energy",
                    "hamiltonian_spread",
                    "newton_converged",
                    "certified",
                ],
                rows,
            )?;
            write_json(&json_path, &t)?;
            say(&format!(
                "{name}: {} rows, monotone_decreasing={:?}",
                t.rows.len(),
                t.monotone_decreasing
            ));
            if let Some(why) = &t.aborted {
                eprintln!("warning: chain aborted: {why}");
            }
        }
        Study::ThetaScan => {
            let t =
                theta_threshold_scan(&plan.theta_list, plan.eps_list[0], plan.n, plan.base_seed)?;
            let rows = t
                .rows
                .iter()
                .map(|r| {
                    vec![
                        fmt_f64(r.theta),
                        fmt_f64(r.best_energy),
                        fmt_f64(r.trivial_energy),
                        r.nontrivial.to_string(),
                        r.converged_runs.to_string(),
                        fmt_f64(r.best_defect_min),
                        r.failures.join("; "),
                    ]
                })
                .collect();
            write_table(
                &csv_path,
                &[
                    "theta",
                    "best_energy",
                    "trivial_energy",
                    "nontrivial",
                    "converged_runs",
                    "best_defect_min",
                    "failures",
                ],
                rows,
            )?;
            write_json(&json_path, &t)?;
            say(&format!(
                "{name}: last nontrivial theta={}, first trivial theta={}, sqrt(2/3)={}",
                opt(t.last_nontrivial_theta),
                opt(t.first_trivial_theta),
                fmt_f64(t.defect_threshold)
            ));
        }
        Study::DefectMap => {
            let t = defect_sign_map(&plan.theta_list, &plan.eps_list, plan.n)?;
            let rows = t
                .cells
                .iter()
                .map(|c| {
                    vec![
                        fmt_f64(c.theta),
                        fmt_f64(c.epsilon),
                        fmt_f64(c.defect_min),
                        fmt_f64(c.defect_constant),
                        fmt_f64(c.energy),
                        c.nontrivial.to_string(),
                        c.newton_converged.to_string(),
                        c.certified.to_string(),
                        c.error.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            write_table(
                &csv_path,
                &[
                    "theta",
                    "epsilon",
                    "defect_min",
                    "defect_constant",
                    "energy",
                    "nontrivial",
                    "newton_converged",
                    "certified",
                    "error",
                ],
                rows,
            )?;
            write_json(&json_path, &t)?;
            say(&format!(
                "{name}: {} cells, sign boundary at smallest eps={}",
                t.cells.len(),
                opt(t.sign_boundary_smallest_eps)
            ));
        }
    }
    write_json(
        &plan.outputs.join(MANIFEST_FILE),
        &Manifest::new("sweep", &plan, &[&csv_name, &json_name]),
    )?;
    Ok(plan)
}
