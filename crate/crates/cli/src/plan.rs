//! Sweep plan files: `key = value` lines, `#` comments, comma-separated lists.
//!
//! ```text
//! study      = eps_convergence
//! theta_list = 0.1
//! eps_list   = 0.2, 0.1, 0.05
//! n          = 1025
//! base_seed  = 0          # optional, defaults to 0
//! outputs    = results    # relative to the plan file's directory
//! ```

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use modica_core::{Study, SweepPlan};

use crate::error::{CliError, CliResult};

const KEYS: [&str; 6] = [
    "study",
    "theta_list",
    "eps_list",
    "n",
    "base_seed",
    "outputs",
];

fn bad(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("line {line}: {msg}"))
}

fn parse_list(line: usize, key: &str, value: &str) -> CliResult<Vec<f64>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| bad(line, format!("{key}: not a number: `{s}`")))
        })
        .collect()
}

/// Parses plan text. Relative `outputs` paths are joined onto `base_dir`.
/// The result is validated before it is returned.
pub fn parse_plan(text: &str, base_dir: &Path) -> CliResult<SweepPlan> {
    let mut seen: HashMap<&str, (usize, &str)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| bad(line, format!("expected `key = value`, found `{content}`")))?;
        let key = key.trim();
        let value = value.trim();
        let Some(&known) = KEYS.iter().find(|&&k| k == key) else {
            return Err(bad(line, format!("unknown key `{key}`")));
        };
        if let Some((first, _)) = seen.insert(known, (line, value)) {
            return Err(bad(
                line,
                format!("duplicate key `{key}` (first on line {first})"),
            ));
        }
    }
    let require = |key: &str| {
        seen.get(key)
            .copied()
            .ok_or_else(|| CliError::Input(format!("missing key `{key}`")))
    };

    let (line, v) = require("study")?;
    let study = Study::from_name(v).ok_or_else(|| {
        bad(
            line,
            format!("unknown study `{v}` (expected eps_convergence, theta_scan or defect_map)"),
        )
    })?;
    let (line, v) = require("theta_list")?;
    let theta_list = parse_list(line, "theta_list", v)?;
    let (line, v) = require("eps_list")?;
    let eps_list = parse_list(line, "eps_list", v)?;
    let (line, v) = require("n")?;
    let n = v
        .parse::<usize>()
        .map_err(|_| bad(line, format!("n: not a non-negative integer: `{v}`")))?;
    let base_seed = match seen.get("base_seed") {
        Some(&(line, v)) => v.parse::<u64>().map_err(|_| {
            bad(
                line,
                format!("base_seed: not a non-negative integer: `{v}`"),
            )
        })?,
        None => 0,
    };
    let (line, v) = require("outputs")?;
    if v.is_empty() {
        return Err(bad(line, "outputs is empty"));
    }
    let outputs = PathBuf::from(v);
    let outputs = if outputs.is_relative() {
        base_dir.join(outputs)
    } else {
        outputs
    };

    let plan = SweepPlan {
        study,
        theta_list,
        eps_list,
        n,
        base_seed,
        outputs,
    };
    plan.validate()?;
    Ok(plan)
}
