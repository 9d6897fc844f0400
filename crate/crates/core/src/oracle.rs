//! Small brute-force reference solvers, independent of the cone pipeline.
//!
//! Everything here answers questions about `G x <= v` by direct geometry:
//! basic feasible points come from solving square row-subsystems, LP
//! boundedness from nonnegative least squares against the dual condition
//! `G^T lambda = f`, and convex-hull membership from nonnegative least
//! squares over the candidate points. The implementations are exponential
//! in the row count and are capped accordingly — they exist to check the
//! production solvers on small instances, not to replace them.

use thiserror::Error;

use crate::linalg::{inf_norm, orthonormal_range_basis, rank_info, Matrix, Vector};
use crate::par;
use crate::tolerance::ToleranceConfig;

/// Row cap: subset enumeration walks `2^rows` masks.
pub const MAX_ORACLE_ROWS: usize = 16;
/// Column cap: keeps the square subsystems tiny.
pub const MAX_ORACLE_COLS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle limited to {max_rows}x{max_cols}, got {rows}x{cols}")]
    DimensionTooLarge { rows: usize, cols: usize, max_rows: usize, max_cols: usize },
}

/// Reference answer for a linear program.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleVerdict {
    Infeasible,
    /// Feasible but the objective is not dominated by the rows of `G`.
    Unbounded,
    Optimal {
        value: f64,
        /// Every enumerated basic point attaining the optimum.
        argmax_vertices: Vec<Vector>,
    },
}

fn check_caps(g: &Matrix) -> Result<(), OracleError> {
    if g.nrows() > MAX_ORACLE_ROWS || g.ncols() > MAX_ORACLE_COLS {
        return Err(OracleError::DimensionTooLarge {
            rows: g.nrows(),
            cols: g.ncols(),
            max_rows: MAX_ORACLE_ROWS,
            max_cols: MAX_ORACLE_COLS,
        });
    }
    Ok(())
}

/// Enumerates the basic feasible points of `{x : G x <= v}` by solving every
/// full-rank square row-subsystem and keeping the feasible solutions.
///
/// When `G` is rank-deficient the polyhedron contains lines and has no true
/// vertices; the system is then reduced onto the row space first, and the
/// returned points are the minimum-norm representatives of the reduced
/// vertices. In all cases the list is nonempty exactly when the system is
/// feasible.
pub fn vertex_enumerate(
    g: &Matrix,
    v: &Vector,
    tol: &ToleranceConfig,
) -> Result<Vec<Vector>, OracleError> {
    vertex_impl(g, v, tol, par::default_parallel())
}

/// Sequential variant of [`vertex_enumerate`] (for benchmarking).
pub fn vertex_enumerate_seq(
    g: &Matrix,
    v: &Vector,
    tol: &ToleranceConfig,
) -> Result<Vec<Vector>, OracleError> {
    vertex_impl(g, v, tol, false)
}

fn vertex_impl(
    g: &Matrix,
    v: &Vector,
    tol: &ToleranceConfig,
    parallel: bool,
) -> Result<Vec<Vector>, OracleError> {
    check_caps(g)?;
    assert_eq!(v.len(), g.nrows(), "bound length must match the row count");
    let m = g.ncols();
    let feas_thr = tol.zero_threshold(inf_norm(v));

    let rank = rank_info(g, tol).rank;
    if rank == 0 {
        // G is (numerically) zero: every x gives the same slack.
        let feasible = v.iter().all(|&vi| vi >= -feas_thr);
        return Ok(if feasible { vec![Vector::zeros(m)] } else { vec![] });
    }

    // Reduce onto the row space so the search space is pointed.
    let reduction = if rank < m {
        Some(orthonormal_range_basis(&g.transpose(), tol))
    } else {
        None
    };
    let gr = match &reduction {
        Some(basis) => g * basis,
        None => g.clone(),
    };
    let r = gr.ncols();
    let n = gr.nrows();

    let candidates = par::map_indexed(1usize << n, parallel, |mask| {
        if (mask as u32).count_ones() as usize != r {
            return None;
        }
        let rows: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sub = Matrix::from_fn(r, r, |a, b| gr[(rows[a], b)]);
        let rhs = Vector::from_fn(r, |a, _| v[rows[a]]);
        let svd = crate::linalg::jacobi_svd(&sub);
        let sigma_max = svd.sigma.iter().fold(0.0_f64, |a, &s| a.max(s));
        let cutoff = tol.rank_cutoff(sigma_max, r, r);
        if svd.sigma.iter().any(|&s| s <= cutoff) {
            return None;
        }
        let x = svd.solve(&rhs, cutoff);
        let slack = &gr * &x - v;
        slack.iter().all(|&s| s <= feas_thr).then_some(x)
    });

    let mut out: Vec<Vector> = Vec::new();
    for x in candidates.into_iter().flatten() {
        let full = match &reduction {
            Some(basis) => basis * &x,
            None => x,
        };
        let thr = 1e-8 * (1.0 + inf_norm(&full));
        if !out.iter().any(|e| inf_norm(&(e - &full)) <= thr) {
            out.push(full);
        }
    }
    Ok(out)
}

/// Reference feasibility answer: the subsystem enumeration finds a basic
/// feasible point exactly when one exists.
pub fn oracle_feasible(g: &Matrix, v: &Vector, tol: &ToleranceConfig) -> Result<bool, OracleError> {
    Ok(!vertex_enumerate(g, v, tol)?.is_empty())
}

/// Reference LP answer for `max f·x subject to G x <= v`.
pub fn oracle_solve(
    g: &Matrix,
    v: &Vector,
    f: &Vector,
    tol: &ToleranceConfig,
) -> Result<OracleVerdict, OracleError> {
    check_caps(g)?;
    assert_eq!(f.len(), g.ncols(), "objective length must match the column count");
    let vertices = vertex_enumerate(g, v, tol)?;
    if vertices.is_empty() {
        return Ok(OracleVerdict::Infeasible);
    }

    // Weak duality screen: the objective is bounded above on a nonempty
    // polyhedron iff f is a nonnegative combination of the rows of G.
    let gt = g.transpose();
    let (_, residual) = nnls(&gt, f);
    if residual > 1e-8 * (1.0 + inf_norm(f)) {
        return Ok(OracleVerdict::Unbounded);
    }

    let value =
        vertices.iter().map(|x| f.dot(x)).fold(f64::NEG_INFINITY, f64::max);
    let keep = 1e-9 * (1.0 + value.abs());
    let argmax_vertices =
        vertices.into_iter().filter(|x| f.dot(x) >= value - keep).collect();
    Ok(OracleVerdict::Optimal { value, argmax_vertices })
}

/// Whether `point` lies in the convex hull of `points`, within `tol`
/// (relative to the coordinate scale). Decided by nonnegative least squares
/// on the hull equations with an appended sum-to-one row.
pub fn hull_member(point: &Vector, points: &[Vector], tol: f64) -> bool {
    if points.is_empty() {
        return false;
    }
    let d = point.len();
    let k = points.len();
    let scale = points
        .iter()
        .map(inf_norm)
        .fold(inf_norm(point), f64::max);
    // Weight the affine row like the coordinates so the residual test is
    // uniform across rows.
    let rho = 1.0 + scale;
    let a = Matrix::from_fn(d + 1, k, |i, j| if i < d { points[j][i] } else { rho });
    let mut b = Vector::zeros(d + 1);
    b.rows_mut(0, d).copy_from(point);
    b[d] = rho;
    let (_, residual) = nnls(&a, &b);
    residual <= tol * (1.0 + rho)
}

/// Lawson–Hanson nonnegative least squares: minimizes `|A x - b|` over
/// `x >= 0`. Returns the solution and the infinity-norm residual.
fn nnls(a: &Matrix, b: &Vector) -> (Vector, f64) {
    let k = a.ncols();
    let mut x = Vector::zeros(k);
    let mut passive = vec![false; k];
    let grad_scale = inf_norm(&(a.transpose() * b));
    let eps = 1e-11 * (1.0 + grad_scale);
    let cap = 3 * k + 30;

    for _ in 0..cap {
        let w = a.transpose() * (b - a * &x);
        let entering = (0..k)
            .filter(|&j| !passive[j])
            .max_by(|&p, &q| w[p].partial_cmp(&w[q]).expect("finite gradient"));
        let Some(j) = entering else { break };
        if w[j] <= eps {
            break;
        }
        passive[j] = true;

        for _ in 0..cap {
            let z = ls_on_passive(a, b, &passive);
            let negative: Vec<usize> =
                (0..k).filter(|&i| passive[i] && z[i] <= 0.0).collect();
            if negative.is_empty() {
                x = z;
                break;
            }
            let alpha = negative
                .iter()
                .map(|&i| x[i] / (x[i] - z[i]))
                .fold(f64::INFINITY, f64::min);
            x = &x + (z - &x) * alpha;
            for i in 0..k {
                if passive[i] && x[i] <= eps {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
        }
    }
    let residual = inf_norm(&(b - a * &x));
    (x, residual)
}

/// Least squares restricted to the passive columns; inactive entries stay
/// zero.
fn ls_on_passive(a: &Matrix, b: &Vector, passive: &[bool]) -> Vector {
    let cols: Vec<usize> = (0..passive.len()).filter(|&i| passive[i]).collect();
    let sub = Matrix::from_fn(a.nrows(), cols.len(), |i, j| a[(i, cols[j])]);
    let svd = crate::linalg::jacobi_svd(&sub);
    let sigma_max = svd.sigma.iter().fold(0.0_f64, |a, &s| a.max(s));
    let cutoff = 1e-12 * sigma_max.max(1.0);
    let z_sub = svd.solve(b, cutoff);
    let mut z = Vector::zeros(passive.len());
    for (j, &c) in cols.iter().enumerate() {
        z[c] = z_sub[j];
    }
    z
}
