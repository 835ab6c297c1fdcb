//! The `solution.csv` format: one row per period node, seven columns.

use std::path::Path;

use modica_core::verify::defect;
use modica_core::FullPeriodSolution;

use crate::error::{CliError, CliResult};

pub const HEADER: [&str; 7] = ["x", "u1", "u2", "du1", "du2", "W", "defect"];

/// Seventeen significant digits: enough to round-trip any `f64` exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTable {
    pub x: Vec<f64>,
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    pub du1: Vec<f64>,
    pub du2: Vec<f64>,
    pub w: Vec<f64>,
    pub defect: Vec<f64>,
}

impl SolutionTable {
    pub fn from_solution(s: &FullPeriodSolution) -> Self {
        let pot = s.potential();
        let w =
            s.u1.iter()
                .zip(&s.u2)
                .map(|(&a, &b)| pot.eval(a, b))
                .collect();
        Self {
            x: s.xs.clone(),
            u1: s.u1.clone(),
            u2: s.u2.clone(),
            du1: s.du1.clone(),
            du2: s.du2.clone(),
            w,
            defect: defect(s, &pot).values,
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    fn row(&self, j: usize) -> [f64; 7] {
        [
            self.x[j],
            self.u1[j],
            self.u2[j],
            self.du1[j],
            self.du2[j],
            self.w[j],
            self.defect[j],
        ]
    }

    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(HEADER).expect("in-memory write");
        for j in 0..self.len() {
            w.write_record(self.row(j).map(fmt_f64))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    /// Parses CSV text; errors name the offending line and column.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let headers = r
            .headers()
            .map_err(|e| CliError::Input(format!("line 1: {e}")))?
            .clone();
        let got: Vec<&str> = headers.iter().map(str::trim).collect();
        if got != HEADER {
            return Err(CliError::Input(format!(
                "line 1: expected header `{}`, found `{}`",
                HEADER.join(","),
                got.join(",")
            )));
        }
        let mut cols: [Vec<f64>; 7] = Default::default();
        for rec in r.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                CliError::Input(format!("line {line}: {e}"))
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            if rec.len() != 7 {
                return Err(CliError::Input(format!(
                    "line {line}: expected 7 fields, found {}",
                    rec.len()
                )));
            }
            for (k, field) in rec.iter().enumerate() {
                let v: f64 = field.trim().parse().map_err(|_| {
                    CliError::Input(format!(
                        "line {line}, column `{}`: not a number: `{field}`",
                        HEADER[k]
                    ))
                })?;
                if !v.is_finite() {
                    return Err(CliError::Input(format!(
                        "line {line}, column `{}`: non-finite value",
                        HEADER[k]
                    )));
                }
                cols[k].push(v);
            }
        }
        if cols[0].is_empty() {
            return Err(CliError::Input("no data rows".into()));
        }
        let [x, u1, u2, du1, du2, w, defect] = cols;
        Ok(Self {
            x,
            u1,
            u2,
            du1,
            du2,
            w,
            defect,
        })
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}
