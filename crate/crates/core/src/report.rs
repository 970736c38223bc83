//! Per-task score reports, written by `evaluate` and read by `significance`.
//! Task rows are `task<TAB>score`:
//!
//! ```text
//! # method: hsr-rr
//! # key: value
//! RG65        0.7569
//! WordSim-353 0.7059
//! # aggregate: 0.7315
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub method: String,
    pub per_task: Vec<(String, f64)>,
    /// Free-form `key: value` lines (config echo, timings).
    pub metadata: Vec<(String, String)>,
}

impl RunReport {
    pub fn new(method: impl Into<String>) -> Self {
        Self {
            method: method.into(),
            per_task: Vec::new(),
            metadata: Vec::new(),
        }
    }

    /// Arithmetic mean of the task scores.
    pub fn aggregate(&self) -> Option<f64> {
        if self.per_task.is_empty() {
            return None;
        }
        Some(self.per_task.iter().map(|(_, s)| s).sum::<f64>() / self.per_task.len() as f64)
    }

    pub fn score(&self, task: &str) -> Option<f64> {
        self.per_task
            .iter()
            .find(|(t, _)| t == task)
            .map(|&(_, s)| s)
    }

    /// Scores are written with Rust's shortest round-trip formatting, so
    /// parsing the output recovers them exactly.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# method: {}", self.method).unwrap();
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        for (task, score) in &self.per_task {
            writeln!(out, "{task}\t{score}").unwrap();
        }
        if let Some(agg) = self.aggregate() {
            writeln!(out, "# aggregate: {agg}").unwrap();
        }
        out
    }

    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut report = RunReport::new("");
        let mut seen = HashSet::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((k, v)) = comment.trim().split_once(':') {
                    let (k, v) = (k.trim(), v.trim());
                    match k {
                        "method" => report.method = v.to_string(),
                        "aggregate" => {}
                        _ => report.metadata.push((k.to_string(), v.to_string())),
                    }
                }
                continue;
            }
            let Some((task, score)) = line.split_once('\t') else {
                return Err(Error::Report(format!(
                    "line {lineno}: expected `task\\tscore`"
                )));
            };
            let score: f64 = score
                .trim()
                .parse()
                .ok()
                .filter(|s: &f64| s.is_finite())
                .ok_or_else(|| Error::Report(format!("line {lineno}: bad score {score:?}")))?;
            let task = task.trim().to_string();
            if !seen.insert(task.clone()) {
                return Err(Error::Report(format!(
                    "line {lineno}: duplicate task {task:?}"
                )));
            }
            report.per_task.push((task, score));
        }
        if report.per_task.is_empty() {
            return Err(Error::Report("report has no task rows".into()));
        }
        Ok(report)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(BufReader::new(File::open(path)?))
            .map_err(|e| Error::Report(format!("{}: {e}", path.display())))
    }
}

/// Paired scores for tasks present in both reports, in `baseline` order.
pub fn align(
    baseline: &RunReport,
    treatment: &RunReport,
) -> Result<(Vec<String>, Vec<f64>, Vec<f64>)> {
    let treat: HashMap<&str, f64> = treatment
        .per_task
        .iter()
        .map(|(t, s)| (t.as_str(), *s))
        .collect();
    let base: HashSet<&str> = baseline.per_task.iter().map(|(t, _)| t.as_str()).collect();
    let mut missing: Vec<&str> = base
        .symmetric_difference(&treat.keys().copied().collect())
        .copied()
        .collect();
    if !missing.is_empty() {
        missing.sort_unstable();
        return Err(Error::TaskMismatch(format!(
            "tasks in only one report: {}",
            missing.join(", ")
        )));
    }
    let mut names = Vec::new();
    let mut b = Vec::new();
    let mut t = Vec::new();
    for (task, score) in &baseline.per_task {
        names.push(task.clone());
        b.push(*score);
        t.push(treat[task.as_str()]);
    }
    Ok((names, b, t))
}

/// Scientific notation with three significant digits and a two-digit signed
/// exponent, e.g. `2.51e-02`.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.2e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}
