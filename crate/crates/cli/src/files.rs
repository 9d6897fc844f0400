//! On-disk formats: problems in, results out.
//!
//! Both documents are single JSON objects with fixed field sets so fixtures
//! diff cleanly and shell harnesses can classify a run from `status` and the
//! process exit code alone. Unknown fields are rejected, shape errors name
//! the offending field, and writing then reading a document reproduces it
//! exactly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use conelp::{Matrix, ToleranceConfig, Vector};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

impl FileError {
    fn invalid(field: &str, message: impl Into<String>) -> FileError {
        FileError::Invalid { field: field.into(), message: message.into() }
    }
}

/// Optional per-problem overrides of the numerical thresholds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_tol: Option<f64>,
}

/// A system `G x <= v`, optionally with an objective `f` to maximize.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: String,
    #[serde(rename = "G")]
    pub g: Vec<Vec<f64>>,
    pub v: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
}

impl ProblemFile {
    /// Shape and finiteness checks, with diagnostics naming the bad field.
    pub fn validate(&self) -> Result<(), FileError> {
        let rows = self.g.len();
        if rows == 0 {
            return Err(FileError::invalid("G", "matrix must have at least one row"));
        }
        let cols = self.g[0].len();
        if cols == 0 {
            return Err(FileError::invalid("G", "matrix must have at least one column"));
        }
        for (i, row) in self.g.iter().enumerate() {
            if row.len() != cols {
                return Err(FileError::invalid(
                    "G",
                    format!("row {i} has {} entries, expected {cols}", row.len()),
                ));
            }
            if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                return Err(FileError::invalid("G", format!("entry ({i}, {j}) is not finite")));
            }
        }
        if self.v.len() != rows {
            return Err(FileError::invalid(
                "v",
                format!("length {} does not match the {rows} rows of G", self.v.len()),
            ));
        }
        if let Some(i) = self.v.iter().position(|x| !x.is_finite()) {
            return Err(FileError::invalid("v", format!("entry {i} is not finite")));
        }
        if let Some(f) = &self.f {
            if f.len() != cols {
                return Err(FileError::invalid(
                    "f",
                    format!("length {} does not match the {cols} columns of G", f.len()),
                ));
            }
            if let Some(i) = f.iter().position(|x| !x.is_finite()) {
                return Err(FileError::invalid("f", format!("entry {i} is not finite")));
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.g.len()
    }

    pub fn cols(&self) -> usize {
        self.g.first().map_or(0, Vec::len)
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_fn(self.rows(), self.cols(), |i, j| self.g[i][j])
    }

    pub fn bound(&self) -> Vector {
        Vector::from_vec(self.v.clone())
    }

    pub fn objective(&self) -> Option<Vector> {
        self.f.as_ref().map(|f| Vector::from_vec(f.clone()))
    }

    /// Effective thresholds: defaults, overridden per field by the file's
    /// `tolerances` block, overridden in turn by the `--tol` flag (which
    /// sets the zero tolerance).
    pub fn tolerance_config(&self, flag_tol: Option<f64>) -> Result<ToleranceConfig, FileError> {
        let defaults = ToleranceConfig::default();
        let o = self.tolerances.unwrap_or_default();
        let zero = flag_tol.or(o.zero_tol).unwrap_or(defaults.zero_tol);
        let rank = o.rank_tol.unwrap_or(defaults.rank_tol);
        let ratio = o.ratio_tol.unwrap_or(defaults.ratio_tol);
        ToleranceConfig::new(zero, rank, ratio)
            .map_err(|e| FileError::invalid("tolerances", e.to_string()))
    }

    pub fn read(path: &Path) -> Result<ProblemFile, FileError> {
        let doc: ProblemFile = read_json(path)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn write(&self, path: &Path) -> Result<(), FileError> {
        write_json(path, self)
    }

    /// The canonical on-disk rendering (pretty JSON, trailing newline).
    pub fn render(&self) -> String {
        render_json(self)
    }
}

/// Outcome classification mirrored into the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Feasible,
    Infeasible,
    Unsupported,
    Error,
}

impl Status {
    /// The exit-code contract: 0 solved, 1 infeasible, 2 unsupported
    /// (strict tangency fails), 3 numerical failure. Malformed input (64)
    /// never reaches a result document.
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Optimal | Status::Feasible => 0,
            Status::Infeasible => 1,
            Status::Unsupported => 2,
            Status::Error => 3,
        }
    }
}

/// One step of an evolutive climb as reported to the user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceEntry {
    /// Height at which the generator was found.
    pub h: f64,
    /// Its test component — the amount the height climbs.
    pub last_component: f64,
}

/// Run bookkeeping attached to every result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunStats {
    /// Extreme rays produced by completed cone enumerations.
    pub rays_enumerated: usize,
    /// Evolutive climb steps (zero for other runs).
    pub steps: usize,
    /// Wall-clock time of the solve, in milliseconds.
    pub wall_ms: f64,
}

/// Result document written by `feas`, `solve`, and `oracle`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub status: Status,
    /// Optimal objective value (`solve`, `oracle` with objective).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_o: Option<f64>,
    /// A feasible or optimal point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    /// Slack vector at `x` (for `solve`: of the augmented system).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
    /// Extreme points: of the contact polytope in slack space
    /// (`feas --all`), of the optimal face in x space
    /// (`solve --all-solutions`), or the argmax vertices (`oracle`).
    /// For unsupported outcomes, the single witness ray.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<f64>>>,
    /// Relative-interior point of the contact polytope (`feas --all`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_interior: Option<Vec<f64>>,
    /// Evolutive climb trace (`solve --trace`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceEntry>>,
    /// Human-readable note for infeasible/unsupported/error outcomes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub stats: RunStats,
}

impl ResultFile {
    pub fn read(path: &Path) -> Result<ResultFile, FileError> {
        read_json(path)
    }

    pub fn write(&self, path: &Path) -> Result<(), FileError> {
        write_json(path, self)
    }

    pub fn render(&self) -> String {
        render_json(self)
    }
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, FileError> {
    let text = fs::read_to_string(path)
        .map_err(|source| FileError::Read { path: path.display().to_string(), source })?;
    serde_json::from_str(&text)
        .map_err(|source| FileError::Parse { path: path.display().to_string(), source })
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FileError> {
    fs::write(path, render_json(value))
        .map_err(|source| FileError::Write { path: path.display().to_string(), source })
}

pub(crate) fn render_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize infallibly");
    text.push('\n');
    text
}
