//! Floating-point tolerance policy shared by every numerical decision in the
//! crate.
//!
//! All zero tests are relative: a quantity `q` computed from data of
//! magnitude `s` counts as zero when `|q| <= zero_tol * (1 + s)`. Rank
//! decisions drop singular values below `rank_tol * sigma_max * max(rows,
//! cols)`. Keeping the three knobs in one struct means callers can tighten or
//! loosen the whole pipeline coherently instead of sprinkling ad-hoc
//! epsilons.

use thiserror::Error;

/// Error returned when a tolerance configuration is not strictly positive.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("tolerance `{name}` must be strictly positive, got {value}")]
pub struct InvalidTolerance {
    pub name: &'static str,
    pub value: f64,
}

/// The three tolerances used across the solver.
///
/// * `zero_tol` — relative threshold for treating a scalar or a vector entry
///   as zero.
/// * `rank_tol` — relative singular-value cutoff for rank decisions.
/// * `ratio_tol` — allowed spread between the componentwise ratios checked
///   during generator calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub zero_tol: f64,
    pub rank_tol: f64,
    pub ratio_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            zero_tol: 1e-9,
            rank_tol: 1e-10,
            ratio_tol: 1e-7,
        }
    }
}

impl ToleranceConfig {
    /// Builds a configuration, rejecting non-positive (or non-finite) values.
    pub fn new(zero_tol: f64, rank_tol: f64, ratio_tol: f64) -> Result<Self, InvalidTolerance> {
        for (name, value) in [
            ("zero_tol", zero_tol),
            ("rank_tol", rank_tol),
            ("ratio_tol", ratio_tol),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(InvalidTolerance { name, value });
            }
        }
        Ok(ToleranceConfig {
            zero_tol,
            rank_tol,
            ratio_tol,
        })
    }

    /// Absolute threshold below which a quantity derived from data of
    /// magnitude `scale` is treated as zero.
    #[inline]
    pub fn zero_threshold(&self, scale: f64) -> f64 {
        self.zero_tol * (1.0 + scale)
    }

    /// Singular-value cutoff for a matrix with extreme singular value
    /// `sigma_max` and the given shape.
    #[inline]
    pub fn rank_cutoff(&self, sigma_max: f64, rows: usize, cols: usize) -> f64 {
        self.rank_tol * sigma_max * rows.max(cols) as f64
    }
}
