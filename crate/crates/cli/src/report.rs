//! Scenario reports and their CSV/JSON serialization.
//!
//! Reports hold no timing information, so identical configurations give
//! byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use fracslice_core::clifford::UnitImaginary;
use serde::Serialize;

use crate::config::Format;

/// One sampled residual. `u` and `v` are the sample point for slice
/// scenarios; scenarios without a slice put their own parameters there
/// (see `fracslice list`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub sample_index: usize,
    #[serde(rename = "I_coords")]
    pub dir: Vec<f64>,
    pub u: f64,
    pub v: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Record {
    /// A record that passes when `residual <= tolerance`; NaN fails.
    pub fn within(dir: Option<&UnitImaginary>, u: f64, v: f64, residual: f64, tolerance: f64) -> Self {
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        Self { sample_index: 0, dir: coords(dir), u, v, residual, tolerance, pass: residual <= tolerance }
    }

    /// A record for a strict decrease: passes when `residual < previous`.
    pub fn below(dir: Option<&UnitImaginary>, u: f64, v: f64, residual: f64, previous: f64) -> Self {
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        Self { sample_index: 0, dir: coords(dir), u, v, residual, tolerance: previous, pass: residual < previous }
    }
}

fn coords(dir: Option<&UnitImaginary>) -> Vec<f64> {
    dir.map(|d| d.dir().to_vec()).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub config: BTreeMap<String, String>,
    pub max_residual: f64,
    pub pass: bool,
    pub records: Vec<Record>,
}

impl ScenarioReport {
    /// Numbers the records in order and derives the verdict.
    pub fn new(scenario: &str, config: BTreeMap<String, String>, mut records: Vec<Record>) -> Self {
        for (k, r) in records.iter_mut().enumerate() {
            r.sample_index = k;
        }
        let max_residual = records.iter().fold(0.0f64, |m, r| m.max(r.residual));
        let pass = !records.is_empty() && records.iter().all(|r| r.pass);
        Self { scenario: scenario.to_string(), config, max_residual, pass, records }
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.pass).count()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("scenario,sample_index,I_coords,u,v,residual,tolerance,pass\n");
        for r in &self.records {
            let dir: Vec<String> = r.dir.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:e},{:e},{}",
                self.scenario,
                r.sample_index,
                dir.join(" "),
                r.u,
                r.v,
                r.residual,
                r.tolerance,
                r.pass
            );
        }
        out
    }

    /// One line for summaries: name, verdict, worst residual, failures.
    pub fn summary_line(&self) -> String {
        format!(
            "{:<24} {}  max residual {:.3e}  ({} of {} samples failed)",
            self.scenario,
            if self.pass { "PASS" } else { "FAIL" },
            self.max_residual,
            self.failures(),
            self.records.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let recs = vec![Record::within(None, 0.5, 0.25, 1e-9, 1e-8), Record::below(None, 2.0, 0.0, 3.0, 2.0)];
        let rep = ScenarioReport::new("demo", BTreeMap::new(), recs);
        assert!(!rep.pass);
        assert_eq!(rep.failures(), 1);
        let csv = rep.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "scenario,sample_index,I_coords,u,v,residual,tolerance,pass");
        assert_eq!(lines[1], "demo,0,,0.5,0.25,1e-9,1e-8,true");
        assert_eq!(lines[2], "demo,1,,2,0,3e0,2e0,false");
    }

    #[test]
    fn nan_residuals_fail() {
        let r = Record::within(None, 0.0, 0.0, f64::NAN, 1.0);
        assert!(!r.pass && r.residual.is_infinite());
        assert!(!ScenarioReport::new("empty", BTreeMap::new(), vec![]).pass);
    }
}
