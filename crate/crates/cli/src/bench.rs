//! Benchmark and differential harness over a directory of problem files.
//!
//! Every instance is run through both LP drivers (or the feasibility solver
//! when no objective is present) and, where the instance fits under the
//! brute-force caps, through the oracle. The report records per-instance
//! agreement, ray counts, the evolutive ray savings, and wall times; rows
//! keep the input order (sorted by file name). Per-instance failures are
//! recorded in their row — only a harness failure (unreadable suite
//! directory) aborts the run.

use std::path::Path;

use serde::{Deserialize, Serialize};

use conelp::{
    oracle_feasible, oracle_solve, solve_enumerative, solve_evolutive, solve_feasibility,
    FeasibilityProblem, LpProblem, LpStatus, OracleVerdict, MAX_ORACLE_COLS, MAX_ORACLE_ROWS,
};

use crate::files::{FileError, ProblemFile};

/// Relative agreement tolerance between solver and oracle optima.
const AGREE_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub name: String,
    /// `optimal`, `feasible`, `infeasible`, `unsupported`, or `error: …`.
    pub status_enumerative: String,
    pub status_evolutive: String,
    /// Oracle status, absent when the instance exceeds the brute-force caps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status_oracle: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_enumerative: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_evolutive: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_oracle: Option<f64>,
    /// Drivers agree with each other and with the oracle where checked.
    pub agree: bool,
    pub rays_enumerative: usize,
    pub rays_evolutive: usize,
    /// `1 - rays_evolutive / rays_enumerative`, when the denominator is
    /// positive: the fraction of the sweep the climb skipped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray_savings: Option<f64>,
    pub wall_ms_enumerative: f64,
    pub wall_ms_evolutive: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub instances: usize,
    pub agreements: usize,
    pub oracle_checked: usize,
    /// True when no instance had the climb enumerate more rays than the
    /// sweep.
    pub evolutive_never_enumerates_more: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_ray_savings: Option<f64>,
    pub total_wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub summary: BenchSummary,
}

impl BenchReport {
    pub fn write(&self, path: &Path) -> Result<(), FileError> {
        crate::files::write_json(path, self)
    }

    pub fn read(path: &Path) -> Result<BenchReport, FileError> {
        crate::files::read_json(path)
    }
}

fn lp_status_label(status: &LpStatus) -> String {
    match status {
        LpStatus::Optimal { .. } => "optimal".into(),
        LpStatus::Infeasible => "infeasible".into(),
        LpStatus::Unsupported { .. } => "unsupported".into(),
    }
}

fn lp_value(status: &LpStatus) -> Option<f64> {
    match status {
        LpStatus::Optimal { h_o, .. } => Some(*h_o),
        _ => None,
    }
}

fn values_agree(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => (a - b).abs() <= AGREE_REL_TOL * (1.0 + a.abs().max(b.abs())),
        (None, None) => true,
        _ => false,
    }
}

fn within_oracle_caps(problem: &ProblemFile) -> bool {
    problem.rows() <= MAX_ORACLE_ROWS && problem.cols() <= MAX_ORACLE_COLS
}

fn run_lp_instance(problem: &ProblemFile, row: &mut BenchRow, flag_tol: Option<f64>) {
    let tol = match problem.tolerance_config(flag_tol) {
        Ok(tol) => tol,
        Err(e) => {
            row.status_enumerative = format!("error: {e}");
            row.status_evolutive = row.status_enumerative.clone();
            return;
        }
    };
    let lp = match LpProblem::new(
        problem.matrix(),
        problem.bound(),
        problem.objective().expect("caller checked f"),
    ) {
        Ok(lp) => lp,
        Err(e) => {
            row.status_enumerative = format!("error: {e}");
            row.status_evolutive = row.status_enumerative.clone();
            return;
        }
    };

    let start = std::time::Instant::now();
    let by_enum = solve_enumerative(&lp, &tol);
    row.wall_ms_enumerative = start.elapsed().as_secs_f64() * 1e3;
    let start = std::time::Instant::now();
    let by_evo = solve_evolutive(&lp, &tol);
    row.wall_ms_evolutive = start.elapsed().as_secs_f64() * 1e3;

    let mut drivers_agree = false;
    match (&by_enum, &by_evo) {
        (Ok(a), Ok(b)) => {
            row.status_enumerative = lp_status_label(&a.status);
            row.status_evolutive = lp_status_label(&b.status);
            row.h_enumerative = lp_value(&a.status);
            row.h_evolutive = lp_value(&b.status);
            row.rays_enumerative = a.rays_enumerated;
            row.rays_evolutive = b.rays_enumerated;
            if a.rays_enumerated > 0 {
                row.ray_savings =
                    Some(1.0 - b.rays_enumerated as f64 / a.rays_enumerated as f64);
            }
            drivers_agree = row.status_enumerative == row.status_evolutive
                && values_agree(row.h_enumerative, row.h_evolutive);
        }
        _ => {
            if let Err(e) = &by_enum {
                row.status_enumerative = format!("error: {e}");
            }
            if let Err(e) = &by_evo {
                row.status_evolutive = format!("error: {e}");
            }
        }
    }

    row.agree = drivers_agree;
    if drivers_agree && within_oracle_caps(problem) {
        match oracle_solve(lp.g(), lp.v(), lp.f(), &tol) {
            Ok(verdict) => {
                let (label, value) = match verdict {
                    OracleVerdict::Optimal { value, .. } => ("optimal".to_string(), Some(value)),
                    OracleVerdict::Infeasible => ("infeasible".to_string(), None),
                    OracleVerdict::Unbounded => ("unbounded".to_string(), None),
                };
                row.agree = row.status_enumerative == label
                    && values_agree(row.h_enumerative, value);
                row.status_oracle = Some(label);
                row.h_oracle = value;
            }
            Err(e) => {
                row.status_oracle = Some(format!("error: {e}"));
                row.agree = false;
            }
        }
    }
}

fn run_feasibility_instance(problem: &ProblemFile, row: &mut BenchRow, flag_tol: Option<f64>) {
    let tol = match problem.tolerance_config(flag_tol) {
        Ok(tol) => tol,
        Err(e) => {
            row.status_enumerative = format!("error: {e}");
            row.status_evolutive = row.status_enumerative.clone();
            return;
        }
    };
    let feas = match FeasibilityProblem::new(problem.matrix(), problem.bound()) {
        Ok(p) => p,
        Err(e) => {
            row.status_enumerative = format!("error: {e}");
            row.status_evolutive = row.status_enumerative.clone();
            return;
        }
    };
    let start = std::time::Instant::now();
    let outcome = solve_feasibility(&feas, &tol, false);
    row.wall_ms_enumerative = start.elapsed().as_secs_f64() * 1e3;
    // Feasibility has a single driver; both columns carry its verdict so the
    // table stays rectangular.
    let label = match &outcome {
        Ok(res) if res.is_feasible() => "feasible".to_string(),
        Ok(_) => "infeasible".to_string(),
        Err(e) => format!("error: {e}"),
    };
    row.status_enumerative = label.clone();
    row.status_evolutive = label.clone();
    if let Ok(res) = &outcome {
        row.rays_enumerative = res.rays_enumerated;
        row.rays_evolutive = res.rays_enumerated;
    }
    row.agree = !label.starts_with("error");
    if row.agree && within_oracle_caps(problem) {
        match oracle_feasible(feas.g(), feas.v(), &tol) {
            Ok(reference) => {
                let expected = if reference { "feasible" } else { "infeasible" };
                row.agree = label == expected;
                row.status_oracle = Some(expected.to_string());
            }
            Err(e) => {
                row.status_oracle = Some(format!("error: {e}"));
                row.agree = false;
            }
        }
    }
}

fn blank_row(name: String) -> BenchRow {
    BenchRow {
        name,
        status_enumerative: String::new(),
        status_evolutive: String::new(),
        status_oracle: None,
        h_enumerative: None,
        h_evolutive: None,
        h_oracle: None,
        agree: false,
        rays_enumerative: 0,
        rays_evolutive: 0,
        ray_savings: None,
        wall_ms_enumerative: 0.0,
        wall_ms_evolutive: 0.0,
    }
}

/// Runs the whole suite. Only filesystem-level failures on the directory
/// itself are errors; per-instance problems land in their row.
pub fn run_suite(dir: &Path, flag_tol: Option<f64>) -> Result<BenchReport, FileError> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|source| FileError::Read { path: dir.display().to_string(), source })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();

    let mut rows = Vec::with_capacity(paths.len());
    for path in &paths {
        let name = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        let mut row = blank_row(name);
        match ProblemFile::read(path) {
            Ok(problem) => {
                row.name = problem.name.clone();
                if problem.f.is_some() {
                    run_lp_instance(&problem, &mut row, flag_tol);
                } else {
                    run_feasibility_instance(&problem, &mut row, flag_tol);
                }
            }
            Err(e) => {
                row.status_enumerative = format!("error: {e}");
                row.status_evolutive = row.status_enumerative.clone();
            }
        }
        rows.push(row);
    }

    let agreements = rows.iter().filter(|r| r.agree).count();
    let oracle_checked = rows.iter().filter(|r| r.status_oracle.is_some()).count();
    let savings: Vec<f64> = rows.iter().filter_map(|r| r.ray_savings).collect();
    let summary = BenchSummary {
        instances: rows.len(),
        agreements,
        oracle_checked,
        evolutive_never_enumerates_more: rows
            .iter()
            .all(|r| r.rays_evolutive <= r.rays_enumerative),
        mean_ray_savings: if savings.is_empty() {
            None
        } else {
            Some(savings.iter().sum::<f64>() / savings.len() as f64)
        },
        total_wall_ms: rows.iter().map(|r| r.wall_ms_enumerative + r.wall_ms_evolutive).sum(),
    };
    Ok(BenchReport { rows, summary })
}

/// Fixed-width table for terminals; the JSON report stays the canonical
/// machine-readable form.
pub fn human_table(report: &BenchReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<28} {:>11} {:>11} {:>11} {:>6} {:>9} {:>9} {:>8}\n",
        "instance", "enum", "evo", "oracle", "agree", "rays(en)", "rays(ev)", "save"
    ));
    for row in &report.rows {
        out.push_str(&format!(
            "{:<28} {:>11} {:>11} {:>11} {:>6} {:>9} {:>9} {:>8}\n",
            truncated(&row.name, 28),
            truncated(&row.status_enumerative, 11),
            truncated(&row.status_evolutive, 11),
            truncated(row.status_oracle.as_deref().unwrap_or("-"), 11),
            if row.agree { "yes" } else { "NO" },
            row.rays_enumerative,
            row.rays_evolutive,
            row.ray_savings.map_or_else(|| "-".into(), |s| format!("{:.0}%", 100.0 * s)),
        ));
    }
    let s = &report.summary;
    out.push_str(&format!(
        "{} instances, {} agree ({} oracle-checked), total {:.1} ms",
        s.instances, s.agreements, s.oracle_checked, s.total_wall_ms
    ));
    if let Some(mean) = s.mean_ray_savings {
        out.push_str(&format!(", mean ray savings {:.0}%", 100.0 * mean));
    }
    out.push('\n');
    out
}

fn truncated(s: &str, width: usize) -> String {
    if s.len() <= width {
        s.to_string()
    } else {
        format!("{}…", &s[..width.saturating_sub(1)])
    }
}
