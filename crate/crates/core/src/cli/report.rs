use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::format::{write, Repair};
use super::CliError;
use crate::levelset::LevelReport;
use crate::pattern::NormBounds;
use crate::spherelemma::LemmaReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The checked statement has no content here (its hypothesis is empty).
    Vacuous,
    /// Reported for information; not a pass/fail criterion for this input.
    Info,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            verdict: if passed { Verdict::Pass } else { Verdict::Fail },
            detail: detail.into(),
        }
    }

    pub fn with_verdict(name: &str, verdict: Verdict, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            verdict,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub role: String,
    pub name: String,
    pub vertices: usize,
    pub repair: Option<Repair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrunkEntry {
    pub label: String,
    pub trunk: usize,
    /// Level counts between consecutive critical values, bottom to top.
    pub profile: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputSummary>,
    pub trunks: Vec<TrunkEntry>,
    pub winding_number: Option<i64>,
    pub norm_bounds: Option<NormBounds>,
    pub levels: Option<LevelReport>,
    pub lemma: Option<LemmaReport>,
    pub outputs: Vec<String>,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            command,
            ..Default::default()
        }
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            path: "<report>".into(),
            line: e.line(),
            message: e.to_string(),
        })
    }

    pub fn write_json(&self, path: &Path) -> Result<(), CliError> {
        write(path, &self.to_json())
    }

    /// Human-readable summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "$ trunkweave {}", self.command.join(" "));
        for input in &self.inputs {
            let _ = write!(
                out,
                "{} {}: {} vertices",
                input.role, input.name, input.vertices
            );
            if let Some(r) = &input.repair {
                let _ = write!(
                    out,
                    " (perturbed by {:e}: {} equal heights, {} horizontal edges)",
                    r.epsilon, r.duplicate_heights, r.horizontal_edges
                );
            }
            out.push('\n');
        }
        for t in &self.trunks {
            let _ = writeln!(out, "trunk {}: {}", t.label, t.trunk);
        }
        if let Some(w) = self.winding_number {
            let _ = writeln!(out, "winding number: {w}");
        }
        if let Some(b) = &self.norm_bounds {
            let _ = writeln!(
                out,
                "norm bounds: {} <= N <= {} (best meridian disk at theta = {:.6})",
                b.lower, b.upper, b.witness_theta
            );
            if b.lower_is_heuristic() {
                let _ = writeln!(
                    out,
                    "  lower bound |w| - 1 assumes a connected minimising surface; not certified"
                );
            }
        }
        if let Some(levels) = &self.levels {
            let _ = writeln!(
                out,
                "levels: {} regular, {} with principal components, {} skipped, max count {}",
                levels.rows.len(),
                levels.non_vacuous(),
                levels.skipped.len(),
                levels.rows.iter().map(|r| r.count_k).max().unwrap_or(0)
            );
        }
        if let Some(lemma) = &self.lemma {
            let _ = writeln!(
                out,
                "lemma check up to {} circles: {} forests, {} configurations, {} satisfy the hypothesis, {} counterexamples",
                lemma.max_circles,
                lemma.forests_checked,
                lemma.configurations_checked,
                lemma.hypothesis_passing,
                lemma.counterexamples.len()
            );
            for c in lemma.counterexamples.iter().take(20) {
                let _ = writeln!(
                    out,
                    "  counterexample: forest {} coloring {} essential mask {:#b}",
                    c.code, c.coloring, c.mask
                );
            }
        }
        for path in &self.outputs {
            let _ = writeln!(out, "wrote {path}");
        }
        for c in &self.checks {
            let tag = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Vacuous => "VACUOUS",
                Verdict::Info => "INFO",
            };
            let _ = writeln!(out, "[{tag}] {}: {}", c.name, c.detail);
        }
        out
    }
}

// Twelve significant digits, fixed exponent notation.
fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// CSV of the per-level table: `z, count_k, z_i, n_lower * z_i`.
pub fn plot_data(report: &RunReport) -> Result<String, CliError> {
    let levels = report
        .levels
        .as_ref()
        .ok_or_else(|| CliError::Precondition {
            precondition: "level table present".into(),
            detail: "this report has no per-level rows".into(),
        })?;
    let mut out = String::from("z,count_k,z_i,n_lower_z_i\n");
    for row in &levels.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            sig12(row.z),
            row.count_k,
            row.z_i,
            levels.n_lower * row.z_i as u64
        );
    }
    Ok(out)
}

pub fn emit_plot_data(report: &RunReport, path: &Path) -> Result<(), CliError> {
    write(path, &plot_data(report)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.5), "5.00000000000e-1");
        assert_eq!(sig12(-0.0123456789012345), "-1.23456789012e-2");
    }

    #[test]
    fn exit_codes_follow_verdicts() {
        let mut report = RunReport::new(vec!["trunk".into()]);
        assert_eq!(report.exit_code(), 0);
        report
            .checks
            .push(Check::with_verdict("x", Verdict::Vacuous, ""));
        assert_eq!(report.exit_code(), 0);
        report.checks.push(Check::new("y", false, ""));
        assert_eq!(report.exit_code(), 1);
    }

    #[test]
    fn plot_needs_levels() {
        assert!(plot_data(&RunReport::default()).is_err());
    }
}
