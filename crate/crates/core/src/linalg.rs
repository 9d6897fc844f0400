//! Dense real linear algebra with an explicit tolerance policy.
//!
//! Every rank decision, orthogonal projection and consistent solve in the
//! crate goes through this module. Rank and range bases come from a singular
//! value decomposition with the cutoff defined by
//! [`ToleranceConfig::rank_cutoff`]; consistent systems are solved in the
//! minimum-norm sense through the pseudo-inverse.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::tolerance::ToleranceConfig;

/// Dense, heap-allocated real matrix used throughout the crate.
pub type Matrix = DMatrix<f64>;
/// Dense real column vector.
pub type Vector = DVector<f64>;

/// Errors from the linear-algebra kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    /// `solve_consistent` was handed a right-hand side outside the range of
    /// the matrix.
    #[error("system is inconsistent: residual {residual:.3e} exceeds threshold {threshold:.3e}")]
    InconsistentSystem { residual: f64, threshold: f64 },
}

/// Max-norm of a vector; zero for the empty vector.
#[inline]
pub fn inf_norm(v: &Vector) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Largest absolute entry of a matrix; zero for an empty matrix.
#[inline]
pub fn inf_norm_mat(m: &Matrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Outcome of a rank decision, with a flag for decisions that were close to
/// the singular-value cutoff (within a factor of ten on either side). Near
/// threshold ranks are numerically fragile and worth surfacing in
/// diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankInfo {
    pub rank: usize,
    pub near_threshold: bool,
}

/// Compact singular value decomposition `A = U diag(sigma) V^T`.
///
/// `u` is `nrows x k` and `v` is `ncols x k` with `k = min(nrows, ncols)`;
/// columns beyond the rank are zero in the non-square factor and padded
/// orthonormally in the square one. `sigma` is sorted descending.
#[derive(Debug, Clone)]
pub(crate) struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    /// Least-squares minimum-norm solve through the pseudo-inverse,
    /// treating singular values at or below `cutoff` as zero.
    pub fn solve(&self, b: &Vector, cutoff: f64) -> Vector {
        let mut x = Vector::zeros(self.v.nrows());
        for j in 0..self.sigma.len() {
            if self.sigma[j] > cutoff {
                let coef = self.u.column(j).dot(b) / self.sigma[j];
                x.axpy(coef, &self.v.column(j).into_owned(), 1.0);
            }
        }
        x
    }
}

/// One-sided Jacobi singular value decomposition.
///
/// The iteration repeatedly rotates column pairs until all columns are
/// mutually orthogonal; their norms are then the singular values. It is
/// slower than bidiagonalization-based SVD but unconditionally accurate on
/// the small dense matrices used in this crate — including matrices with
/// degenerate spectra (differences of projectors), on which faster
/// implementations have been observed to mis-converge.
pub(crate) fn jacobi_svd(a: &Matrix) -> Svd {
    if a.nrows() >= a.ncols() {
        jacobi_svd_tall(a.clone())
    } else {
        let s = jacobi_svd_tall(a.transpose());
        Svd { u: s.v, sigma: s.sigma, v: s.u }
    }
}

fn jacobi_svd_tall(mut w: Matrix) -> Svd {
    let (n, m) = w.shape();
    debug_assert!(n >= m);
    let mut v = Matrix::identity(m, m);
    const MAX_SWEEPS: usize = 64;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..m {
            for j in i + 1..m {
                let a_ii = w.column(i).dot(&w.column(i));
                let a_jj = w.column(j).dot(&w.column(j));
                let a_ij = w.column(i).dot(&w.column(j));
                if a_ii == 0.0 || a_jj == 0.0 {
                    continue;
                }
                if a_ij.abs() <= f64::EPSILON * (a_ii * a_jj).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (a_jj - a_ii) / (2.0 * a_ij);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for r in 0..n {
                    let wi = w[(r, i)];
                    let wj = w[(r, j)];
                    w[(r, i)] = cs * wi - sn * wj;
                    w[(r, j)] = sn * wi + cs * wj;
                }
                for r in 0..m {
                    let vi = v[(r, i)];
                    let vj = v[(r, j)];
                    v[(r, i)] = cs * vi - sn * vj;
                    v[(r, j)] = sn * vi + cs * vj;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..m).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&p, &q| norms[q].partial_cmp(&norms[p]).expect("finite norms"));
    let mut u = Matrix::zeros(n, m);
    let mut v_sorted = Matrix::zeros(m, m);
    let mut sigma = Vec::with_capacity(m);
    for (out, &j) in order.iter().enumerate() {
        sigma.push(norms[j]);
        if norms[j] > 0.0 {
            u.set_column(out, &(w.column(j) / norms[j]));
        }
        v_sorted.set_column(out, &v.column(j));
    }
    Svd { u, sigma, v: v_sorted }
}

fn singular_values(m: &Matrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    jacobi_svd(m).sigma
}

/// Numerical rank of `m` under the configured singular-value cutoff.
pub fn rank_info(m: &Matrix, tol: &ToleranceConfig) -> RankInfo {
    let sv = singular_values(m);
    let sigma_max = sv.iter().fold(0.0_f64, |a, &s| a.max(s));
    if sigma_max == 0.0 {
        return RankInfo { rank: 0, near_threshold: false };
    }
    let cutoff = tol.rank_cutoff(sigma_max, m.nrows(), m.ncols());
    let rank = sv.iter().filter(|&&s| s > cutoff).count();
    let near_threshold = sv
        .iter()
        .any(|&s| s > cutoff / 10.0 && s < cutoff * 10.0);
    RankInfo { rank, near_threshold }
}

/// Orthonormal basis of the range (column space) of `m`, returned as the
/// columns of an `nrows x rank` matrix. The zero matrix yields a basis with
/// zero columns.
pub fn orthonormal_range_basis(m: &Matrix, tol: &ToleranceConfig) -> Matrix {
    let n = m.nrows();
    if n == 0 || m.ncols() == 0 {
        return Matrix::zeros(n, 0);
    }
    let svd = jacobi_svd(m);
    let sigma_max = svd.sigma.iter().fold(0.0_f64, |a, &s| a.max(s));
    if sigma_max == 0.0 {
        return Matrix::zeros(n, 0);
    }
    let cutoff = tol.rank_cutoff(sigma_max, m.nrows(), m.ncols());
    let kept: Vec<usize> = (0..svd.sigma.len()).filter(|&i| svd.sigma[i] > cutoff).collect();
    let mut basis = Matrix::zeros(n, kept.len());
    for (j, &i) in kept.iter().enumerate() {
        basis.set_column(j, &svd.u.column(i));
    }
    basis
}

/// Orthogonal projector onto the range of `m` (an `nrows x nrows` symmetric
/// idempotent matrix).
pub fn projector_onto_range(m: &Matrix, tol: &ToleranceConfig) -> Matrix {
    let basis = orthonormal_range_basis(m, tol);
    projector_from_orthonormal_basis(&basis, m.nrows())
}

/// Orthonormal basis of the range of an (approximately) orthogonal
/// projector.
///
/// A projector's singular values are exactly 0 or 1, so the split is made
/// at 1/2 instead of at a data-relative cutoff. The relative cutoff would
/// misread a projector that is all floating-point noise (a difference of
/// projectors that cancel) as full rank, because the noise then *is* the
/// largest singular value.
pub(crate) fn projector_range_basis(q: &Matrix) -> Matrix {
    let n = q.nrows();
    if n == 0 {
        return Matrix::zeros(n, 0);
    }
    let svd = jacobi_svd(q);
    let kept: Vec<usize> = (0..svd.sigma.len()).filter(|&i| svd.sigma[i] > 0.5).collect();
    let mut basis = Matrix::zeros(n, kept.len());
    for (j, &i) in kept.iter().enumerate() {
        basis.set_column(j, &svd.u.column(i));
    }
    basis
}

/// Rank with the singular-value cutoff anchored at unit scale.
///
/// For matrices whose natural entry scale is 1 — projectors, orthonormal
/// bases and their submatrices — an all-noise matrix must be read as rank
/// zero, which a cutoff relative to the largest (noise) singular value
/// cannot do.
pub(crate) fn unit_scale_rank(m: &Matrix, tol: &ToleranceConfig) -> usize {
    let sv = singular_values(m);
    let sigma_max = sv.iter().fold(0.0_f64, |a, &s| a.max(s));
    let cutoff = tol.rank_cutoff(sigma_max.max(1.0), m.nrows(), m.ncols());
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Projector `B * B^T` from an orthonormal basis laid out as columns of `B`.
pub(crate) fn projector_from_orthonormal_basis(basis: &Matrix, n: usize) -> Matrix {
    if basis.ncols() == 0 {
        return Matrix::zeros(n, n);
    }
    basis * basis.transpose()
}

/// Orthogonal projector onto the line spanned by `u`: `u u^T / |u|^2`.
/// A (numerically) zero `u` yields the zero matrix.
pub fn projector_onto_span(u: &Vector, tol: &ToleranceConfig) -> Matrix {
    let n = u.len();
    let scale = inf_norm(u);
    if scale <= tol.zero_threshold(0.0) {
        return Matrix::zeros(n, n);
    }
    let norm_sq = u.dot(u);
    (u * u.transpose()) / norm_sq
}

/// Minimum-norm solution of the consistent system `G x = b`.
///
/// The solve goes through the pseudo-inverse with the configured
/// singular-value cutoff; afterwards the residual is checked against
/// `zero_tol * (1 + |b|_inf)` and [`LinalgError::InconsistentSystem`] is
/// returned when `b` is not (numerically) in the range of `G`.
pub fn solve_consistent(g: &Matrix, b: &Vector, tol: &ToleranceConfig) -> Result<Vector, LinalgError> {
    assert_eq!(g.nrows(), b.len(), "right-hand side length must match rows");
    let threshold = tol.zero_threshold(inf_norm(b));
    if g.ncols() == 0 {
        // Only x = () exists; the system is consistent iff b ~ 0.
        let residual = inf_norm(b);
        if residual > threshold {
            return Err(LinalgError::InconsistentSystem { residual, threshold });
        }
        return Ok(Vector::zeros(0));
    }
    let svd = jacobi_svd(g);
    let sigma_max = svd.sigma.iter().fold(0.0_f64, |a, &s| a.max(s));
    let cutoff = tol.rank_cutoff(sigma_max, g.nrows(), g.ncols());
    let x = svd.solve(b, cutoff);
    let residual = inf_norm(&(g * &x - b));
    if residual > threshold {
        return Err(LinalgError::InconsistentSystem { residual, threshold });
    }
    Ok(x)
}

/// The projector family attached to one bound decomposition: `p_f` projects
/// onto the range subspace F, `p_v` onto the line spanned by the orthogonal
/// remainder, `p_f_perp = I - p_f`, and `t = I - p_v - p_f` (the projector
/// whose null space is the extended subspace `span(upsilon) + F`).
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorSet {
    pub p_f: Matrix,
    pub p_v: Matrix,
    pub p_f_perp: Matrix,
    pub t: Matrix,
}

impl ProjectorSet {
    /// Builds the set from an orthonormal basis of F (columns) and the
    /// remainder vector `upsilon` (which must be orthogonal to F for `t` to
    /// be a projector).
    pub fn build(range_basis: &Matrix, upsilon: &Vector, tol: &ToleranceConfig) -> Self {
        let n = upsilon.len();
        let p_f = projector_from_orthonormal_basis(range_basis, n);
        let p_v = projector_onto_span(upsilon, tol);
        let p_f_perp = Matrix::identity(n, n) - &p_f;
        let t = &p_f_perp - &p_v;
        ProjectorSet { p_f, p_v, p_f_perp, t }
    }

    /// Rebuilds only the parts that depend on `upsilon`, reusing `p_f`.
    pub fn with_upsilon(&self, upsilon: &Vector, tol: &ToleranceConfig) -> Self {
        let p_v = projector_onto_span(upsilon, tol);
        let t = &self.p_f_perp - &p_v;
        ProjectorSet {
            p_f: self.p_f.clone(),
            p_v,
            p_f_perp: self.p_f_perp.clone(),
            t,
        }
    }
}

/// Max-norm defect `|Q^2 - Q|_max` of an alleged projector; useful in tests
/// and diagnostics.
pub fn projector_defect(q: &Matrix) -> f64 {
    inf_norm_mat(&(q * q - q))
}
