//! CSV and JSON persistence.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::experiments::{BoxplotStats, Example1Result, Example2Result, SeriesTable};
use crate::theory::VerificationReport;

/// Decimal rendering with 9 significant digits; exponent form outside
/// `[1e-4, 1e15)`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&exp) {
        return format!("{x:.8e}");
    }
    let decimals = (8 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Header plus rows, written as UTF-8 with LF line endings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn write_csv(table: &CsvTable, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    }
    let mut f = fs::File::create(path).map_err(|e| LabError::io(path, e))?;
    f.write_all(table.render().as_bytes())
        .map_err(|e| LabError::io(path, e))
}

fn stats_cells(s: &BoxplotStats) -> Vec<String> {
    let mut v = vec![s.n.to_string()];
    v.extend([s.min, s.q1, s.median, s.q3, s.max, s.mean].map(fmt_num));
    v
}

/// `key,n,min,q1,median,q3,max,mean`.
pub fn boxplot_table<K: Copy>(key: &str, rows: &[(K, BoxplotStats)], fmt_key: impl Fn(K) -> String) -> CsvTable {
    let mut t = CsvTable::new(&[key, "n", "min", "q1", "median", "q3", "max", "mean"]);
    for (k, s) in rows {
        let mut row = vec![fmt_key(*k)];
        row.extend(stats_cells(s));
        t.push(row);
    }
    t
}

/// One row per replication.
pub fn example1_table(r: &Example1Result) -> CsvTable {
    let mut t = CsvTable::new(&["dim", "rep", "seed", "p", "inv_p"]);
    for x in &r.reps {
        t.push(vec![
            x.dim.to_string(),
            x.rep.to_string(),
            x.seed.to_string(),
            fmt_num(x.p),
            fmt_num(x.inv_p),
        ]);
    }
    t
}

pub fn example2_table(r: &Example2Result) -> CsvTable {
    let mut t = CsvTable::new(&["d", "mu", "rep", "seed", "attempts", "r1", "p", "inv_p"]);
    for x in &r.reps {
        t.push(vec![
            x.d.to_string(),
            fmt_num(x.mu),
            x.rep.to_string(),
            x.seed.to_string(),
            x.attempts.to_string(),
            fmt_num(x.r1),
            fmt_num(x.p),
            fmt_num(x.inv_p),
        ]);
    }
    t
}

pub fn series_table(s: &SeriesTable) -> CsvTable {
    let mut t = CsvTable::new(&[
        "t",
        "policy",
        "thinness_mean",
        "inst_regret_mean",
        "cum_regret_mean",
        "inst_regret_se",
        "psi_exceed_frac",
    ]);
    for r in &s.rows {
        t.push(vec![
            r.t.to_string(),
            r.policy.name().to_string(),
            fmt_num(r.thinness_mean),
            fmt_num(r.inst_regret_mean),
            fmt_num(r.cum_regret_mean),
            fmt_num(r.inst_regret_se),
            fmt_num(r.psi_exceed_frac),
        ]);
    }
    t
}

pub fn verify_table(reports: &[VerificationReport]) -> CsvTable {
    let mut t = CsvTable::new(&["name", "pass", "samples", "estimate", "target", "std_error"]);
    for r in reports {
        t.push(vec![
            r.name.clone(),
            r.pass.to_string(),
            r.samples.to_string(),
            fmt_num(r.estimate),
            fmt_num(r.target),
            fmt_num(r.std_error),
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEntry {
    pub name: String,
    pub pass: bool,
    pub estimate: f64,
    pub target: f64,
}

impl From<&VerificationReport> for ResultEntry {
    fn from(r: &VerificationReport) -> Self {
        Self {
            name: r.name.clone(),
            pass: r.pass,
            estimate: r.estimate,
            target: r.target,
        }
    }
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub command: String,
    /// Every resolved setting of the run.
    pub flags: serde_json::Value,
    pub seed: u64,
    pub started_at: String,
    pub duration_s: f64,
    pub results: Vec<ResultEntry>,
    pub seed_split: String,
    pub threads: usize,
    pub files: Vec<String>,
    pub notes: Vec<String>,
}

pub fn write_summary(summary: &RunSummary, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(summary)?;
    fs::write(path, text + "\n").map_err(|e| LabError::io(path, e))
}
