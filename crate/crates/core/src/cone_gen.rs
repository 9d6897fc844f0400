//! Extreme-ray enumeration for cones of the form `N(T) ∩ P`, where `T` is an
//! orthogonal projector and `P` is the nonnegative orthant.
//!
//! The cone is described by the equalities `b · y = 0` for an orthonormal
//! basis `{b}` of the range of `T`, together with `y >= 0`. Enumeration runs
//! a double-description construction: it starts from the orthant's axis rays
//! and intersects one hyperplane at a time, keeping the rays that lie on the
//! hyperplane and combining adjacent rays from opposite sides. Adjacency is
//! decided algebraically: two rays are adjacent when the processed
//! constraints restricted to the union of their supports leave a null space
//! of dimension exactly two.
//!
//! Exact-arithmetic pivoting is out of scope, so the sweep is organized to
//! be robust in floating point instead. Near-degenerate inputs put rays
//! within `1e-8` of a plane on *both* sides, where tight thresholds sever
//! the combinations that carry the true rays; therefore sign classification
//! is deliberately loose (relative [`ON_PLANE_REL_TOL`]) and the adjacency
//! rank is taken with a loose cutoff ([`ADJACENCY_REL_TOL`]) so that
//! near-collapsed pairs still read as adjacent. Both choices may retain
//! candidates that are slightly off the cone, so every survivor is
//! re-derived from its support alone ([`candidate_ray`] recomputes the
//! restricted null direction to machine precision) and discarded unless it
//! passes the same test the brute-force oracle applies. Finally, an empty
//! outcome is re-checked exhaustively when the dimension permits, because
//! emptiness decides infeasibility upstream.
//!
//! Cones carried by a null space of dimension at most two never enter the
//! sweep at all: they are the image of a planar sector and are enumerated in
//! closed form instead ([`planar_rays`]). This is not only cheaper — it
//! sidesteps the sweep's worst regime. When `N(T)` is low-dimensional, `T`
//! is a near-identity matrix whose computed range basis is almost
//! axis-aligned, so nearly every axis ray starts out borderline-on every
//! hyperplane and no classification threshold is safe; the planar kernel
//! has no intermediate cones and therefore no such decisions to make.
//!
//! The order of the result is deterministic: hyperplanes are processed in
//! basis order and, within a step, surviving rays keep their order while
//! newly combined rays are appended sorted lexicographically by support.
//! [`next_ray`] exposes the same list through a resumable cursor so a caller
//! can pull rays one at a time, filtered by a test column.

use std::cmp::Ordering;

use thiserror::Error;

use crate::linalg::{inf_norm, Matrix, Vector};
use crate::par::{default_parallel, map_indexed};
use crate::tolerance::ToleranceConfig;

/// Largest ambient dimension accepted by [`brute_force_rays`].
pub const BRUTE_FORCE_MAX_DIM: usize = 14;

/// Relative margin for classifying a ray as lying on a hyperplane during the
/// double-description sweep. See the module docs for why this is much looser
/// than the zero tolerance.
const ON_PLANE_REL_TOL: f64 = 1e-7;

/// Relative singular-value cutoff for the adjacency rank test. Adjacency is
/// pure pruning — a missed pair loses a true ray for good, while a spurious
/// pair only costs a candidate that the final refinement discards — so the
/// cutoff errs far on the loose side.
const ADJACENCY_REL_TOL: f64 = 1e-5;

/// Relative thresholds tried in turn when reading a support set off a
/// floating-point null direction in the planar kernel. The exact support is
/// unknowable from magnitudes alone (a genuine component may be `1e-8` while
/// noise sits at `1e-15`), so each plausible split is proposed and
/// [`candidate_ray`] — which re-derives the direction from the support and
/// validates it — keeps only the correct one.
const SUPPORT_SPLIT_RELS: [f64; 4] = [1e-5, 1e-7, 1e-9, 1e-11];

/// Errors from ray enumeration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConeError {
    /// Two enumerated rays are opposite, so the cone contains a line. This
    /// signals a violated precondition upstream (the inputs produced here are
    /// subsets of the orthant, which is pointed).
    #[error("cone is not pointed: rays {i} and {j} are opposite")]
    NotPointed { i: usize, j: usize },
    /// The exhaustive support search only scales to small dimensions.
    #[error("ambient dimension {dim} exceeds the brute-force cap of {max}")]
    DimensionTooLarge { dim: usize, max: usize },
}

/// An extreme ray of `N(T) ∩ P`: a nonnegative direction, normalized so its
/// largest component is one, with entries below the zero threshold clamped
/// to exact zeros. `support` lists the indices of the strictly positive
/// components, in increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    pub y: Vector,
    pub support: Vec<usize>,
}

impl Ray {
    fn axis(n: usize, i: usize) -> Ray {
        let mut y = Vector::zeros(n);
        y[i] = 1.0;
        Ray { y, support: vec![i] }
    }

    /// Normalizes, clamps and classifies a raw nonnegative direction.
    /// Returns `None` when the vector is numerically zero.
    pub(crate) fn from_unnormalized(mut y: Vector, tol: &ToleranceConfig) -> Option<Ray> {
        let max = inf_norm(&y);
        if max <= tol.zero_threshold(0.0) {
            return None;
        }
        y /= max;
        let thr = tol.zero_threshold(1.0);
        let mut support = Vec::new();
        for i in 0..y.len() {
            if y[i].abs() <= thr {
                y[i] = 0.0;
            } else {
                debug_assert!(y[i] > 0.0, "ray component {i} is negative: {}", y[i]);
                support.push(i);
            }
        }
        if support.is_empty() {
            return None;
        }
        Some(Ray { y, support })
    }

    /// Residual `|T y|_inf` of the ray against the projector it came from.
    pub fn residual(&self, t: &Matrix) -> f64 {
        inf_norm(&(t * &self.y))
    }
}

/// Progress token for [`next_ray`]. A fresh (default) cursor starts at the
/// beginning of the enumeration order; the token returned with each ray
/// resumes right after it. Cursors are only meaningful for the projector
/// they were produced with — after `T` changes, start from a fresh one.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RayCursor {
    pos: usize,
}

impl RayCursor {
    /// Number of list positions already inspected.
    pub(crate) fn position(&self) -> usize {
        self.pos
    }
}

/// Enumerates every extreme ray of `N(T) ∩ P` for an orthogonal projector
/// `T`, in the crate's deterministic order. Uses the parallel combiner when
/// the `parallel` feature is enabled.
pub fn enumerate_rays(t: &Matrix, tol: &ToleranceConfig) -> Result<Vec<Ray>, ConeError> {
    dd_rays(t, tol, default_parallel())
}

/// Sequential variant of [`enumerate_rays`]; this is the code path used when
/// the `parallel` feature is disabled, kept callable for benchmarks.
pub fn enumerate_rays_seq(t: &Matrix, tol: &ToleranceConfig) -> Result<Vec<Ray>, ConeError> {
    dd_rays(t, tol, false)
}

/// Returns the first ray at or after `cursor` whose `test_column` component
/// is strictly positive, along with the cursor to resume after it, or `None`
/// when no such ray remains.
pub fn next_ray(
    t: &Matrix,
    cursor: RayCursor,
    test_column: usize,
    tol: &ToleranceConfig,
) -> Result<Option<(Ray, RayCursor)>, ConeError> {
    assert!(test_column < t.nrows(), "test column out of range");
    let rays = dd_rays(t, tol, default_parallel())?;
    let thr = tol.zero_threshold(1.0);
    for pos in cursor.pos..rays.len() {
        if rays[pos].y[test_column] > thr {
            return Ok(Some((rays[pos].clone(), RayCursor { pos: pos + 1 })));
        }
    }
    Ok(None)
}

/// Independent oracle for [`enumerate_rays`]: tries every nonempty support
/// set and keeps those whose restricted null space is one-dimensional with a
/// strictly positive generator. Exponential in the dimension, hence capped
/// at [`BRUTE_FORCE_MAX_DIM`].
pub fn brute_force_rays(t: &Matrix, tol: &ToleranceConfig) -> Result<Vec<Ray>, ConeError> {
    brute_rays(t, tol, default_parallel())
}

/// Sequential variant of [`brute_force_rays`].
pub fn brute_force_rays_seq(t: &Matrix, tol: &ToleranceConfig) -> Result<Vec<Ray>, ConeError> {
    brute_rays(t, tol, false)
}

fn brute_rays(t: &Matrix, tol: &ToleranceConfig, parallel: bool) -> Result<Vec<Ray>, ConeError> {
    let n = t.nrows();
    assert_eq!(n, t.ncols(), "projector must be square");
    if n > BRUTE_FORCE_MAX_DIM {
        return Err(ConeError::DimensionTooLarge { dim: n, max: BRUTE_FORCE_MAX_DIM });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let masks = (1usize << n) - 1;
    let found = map_indexed(masks, parallel, |k| {
        let mask = k + 1;
        let support: Vec<usize> = (0..n).filter(|i| mask & (1usize << i) != 0).collect();
        candidate_ray(t, &support, tol)
    });
    let mut rays: Vec<Ray> = found.into_iter().flatten().collect();
    rays.sort_by(ray_order);
    Ok(rays)
}

/// Checks whether the support set carries exactly one null direction of `T`
/// and that the direction is strictly one-signed across the whole support.
fn candidate_ray(t: &Matrix, support: &[usize], tol: &ToleranceConfig) -> Option<Ray> {
    let n = t.nrows();
    let k = support.len();
    let sub = Matrix::from_fn(n, k, |r, c| t[(r, support[c])]);
    let svd = crate::linalg::jacobi_svd(&sub);
    let sigma_max = svd.sigma.iter().fold(0.0_f64, |a, &s| a.max(s));
    // T is a projector, so its entries live at unit scale; anchoring the
    // cutoff there keeps an all-noise submatrix at rank zero.
    let cutoff = tol.rank_cutoff(sigma_max.max(1.0), n, k);
    let rank = svd.sigma.iter().filter(|&&s| s > cutoff).count();
    if k - rank != 1 {
        return None;
    }
    // Singular values are sorted in decreasing order, so the null direction
    // is the last right-singular vector.
    let u = svd.v.column(k - 1).into_owned();
    let thr = tol.zero_threshold(inf_norm(&u));
    let has_pos = u.iter().any(|&x| x > thr);
    let has_neg = u.iter().any(|&x| x < -thr);
    if has_pos == has_neg {
        // Mixed signs (not a direction inside the orthant) or all-zero.
        return None;
    }
    let sign = if has_neg { -1.0 } else { 1.0 };
    // The support must be exact: a vanishing component means this ray
    // belongs to a smaller support set and is found there instead.
    if u.iter().any(|&x| sign * x <= thr) {
        return None;
    }
    let mut y = Vector::zeros(n);
    for (c, &i) in support.iter().enumerate() {
        y[i] = sign * u[c];
    }
    Ray::from_unnormalized(y, tol)
}

/// Validates a floating-point null direction as an extreme ray: proposes the
/// support splits of [`SUPPORT_SPLIT_RELS`] and returns the first one that
/// [`candidate_ray`] re-derives successfully. Directions that leave the
/// orthant at every resolution yield `None`.
fn refine_direction(t: &Matrix, y: &Vector, tol: &ToleranceConfig) -> Option<Ray> {
    let scale = inf_norm(y);
    if scale <= tol.zero_threshold(0.0) {
        return None;
    }
    let mut tried: Vec<Vec<usize>> = Vec::new();
    for rel in SUPPORT_SPLIT_RELS {
        let thr = rel * scale;
        if y.iter().any(|&x| x < -thr) {
            continue;
        }
        let support: Vec<usize> = (0..y.len()).filter(|&i| y[i] > thr).collect();
        if support.is_empty() || tried.iter().any(|s| *s == support) {
            continue;
        }
        if let Some(ray) = candidate_ray(t, &support, tol) {
            return Some(ray);
        }
        tried.push(support);
    }
    None
}

/// Exact enumeration for cones whose carrying null space has dimension at
/// most two. Dimension zero is the trivial cone; dimension one holds a ray
/// exactly when the null direction is one-signed; dimension two maps the
/// problem onto the plane, where the orthant constraints become half-planes
/// through the origin and the cone is a sector whose (at most two) boundary
/// directions each lie on some constraint line. Every candidate is still
/// re-derived from its support, so the reported rays match the sweep's and
/// the brute-force oracle's normalization and exactness.
fn planar_rays(
    t: &Matrix,
    null_basis: &Matrix,
    tol: &ToleranceConfig,
) -> Result<Vec<Ray>, ConeError> {
    let mut out: Vec<Ray> = Vec::new();
    match null_basis.ncols() {
        0 => {}
        1 => {
            let u = null_basis.column(0).into_owned();
            for dir in [&u * 1.0, &u * -1.0] {
                if let Some(ray) = refine_direction(t, &dir, tol) {
                    out.push(ray);
                }
            }
        }
        2 => {
            let u = null_basis.column(0).into_owned();
            let w = null_basis.column(1).into_owned();
            let skip = tol.zero_threshold(0.0);
            for i in 0..t.nrows() {
                let scale = f64::hypot(u[i], w[i]);
                if scale <= skip {
                    // The coordinate vanishes on the whole plane and
                    // constrains nothing.
                    continue;
                }
                // The two unit directions on the boundary line of
                // half-plane i; extreme rays of the sector lie on some
                // constraint line, so these candidates are exhaustive.
                for (c, s) in [(-w[i] / scale, u[i] / scale), (w[i] / scale, -u[i] / scale)] {
                    let y = &u * c + &w * s;
                    if let Some(ray) = refine_direction(t, &y, tol) {
                        out.push(ray);
                    }
                }
            }
        }
        k => unreachable!("planar kernel called with null space of dimension {k}"),
    }
    out.sort_by(ray_order);
    out.dedup_by(|a, b| a.support == b.support);
    Ok(out)
}

/// Double-description construction over the hyperplanes normal to the
/// columns of the range basis of `t`.
fn dd_rays(t: &Matrix, tol: &ToleranceConfig, parallel: bool) -> Result<Vec<Ray>, ConeError> {
    let n = t.nrows();
    assert_eq!(n, t.ncols(), "projector must be square");
    debug_assert!(
        crate::linalg::inf_norm_mat(&(t - t.transpose())) <= tol.zero_threshold(crate::linalg::inf_norm_mat(t)),
        "ray enumeration expects a symmetric (orthogonal) projector"
    );
    if n == 0 {
        return Ok(Vec::new());
    }
    // Low-dimensional null spaces get the closed-form kernel; see the
    // module docs for why the sweep is at its worst exactly there.
    let complement = Matrix::identity(n, n) - t;
    let null_basis = crate::linalg::projector_range_basis(&complement);
    if null_basis.ncols() <= 2 {
        return planar_rays(t, &null_basis, tol);
    }
    let basis = crate::linalg::projector_range_basis(t);
    let mut rays: Vec<Ray> = (0..n).map(|i| Ray::axis(n, i)).collect();
    for j in 0..basis.ncols() {
        if rays.is_empty() {
            break;
        }
        let normal: Vector = basis.column(j).into_owned();
        let sigma: Vec<f64> = rays.iter().map(|r| normal.dot(&r.y)).collect();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut on_plane = Vec::new();
        for (i, &s) in sigma.iter().enumerate() {
            let thr = ON_PLANE_REL_TOL * (1.0 + inf_norm(&rays[i].y));
            if s > thr {
                pos.push(i);
            } else if s < -thr {
                neg.push(i);
            } else {
                on_plane.push(i);
            }
        }
        let pairs: Vec<(usize, usize)> = pos
            .iter()
            .flat_map(|&p| neg.iter().map(move |&q| (p, q)))
            .collect();
        let rays_ref = &rays;
        let sigma_ref = &sigma;
        let basis_ref = &basis;
        let combined = map_indexed(pairs.len(), parallel, |k| {
            let (p, q) = pairs[k];
            let union = union_sorted(&rays_ref[p].support, &rays_ref[q].support);
            if !adjacent_in_partial_cone(basis_ref, j, &union, tol) {
                return None;
            }
            // sigma[p] > 0 > sigma[q], so both coefficients are positive and
            // the combination stays in the orthant while landing on the
            // hyperplane.
            let w = &rays_ref[q].y * sigma_ref[p] - &rays_ref[p].y * sigma_ref[q];
            Ray::from_unnormalized(w, tol)
        });
        let new_rays: Vec<Ray> = combined.into_iter().flatten().collect();
        let mut next: Vec<Ray> = on_plane.into_iter().map(|i| rays[i].clone()).collect();
        next.extend(new_rays);
        next.sort_by(ray_order);
        // Two extreme rays with equal support are the same ray (the support
        // determines a one-dimensional null direction), and the refinement
        // below re-derives each ray from its support regardless — so support
        // equality alone dedups, which also keeps the loose pairing above
        // from accumulating same-support variants step over step.
        next.dedup_by(|a, b| a.support == b.support);
        rays = next;
    }
    // The loose sweep can both drift (constraints enforced only within the
    // classification margin) and overshoot (rays slightly off the cone), so
    // each candidate is re-derived exactly from its support and dropped if
    // the support does not carry a one-signed null direction.
    let refined = map_indexed(rays.len(), parallel, |i| candidate_ray(t, &rays[i].support, tol));
    let mut rays: Vec<Ray> = refined.into_iter().flatten().collect();
    rays.sort_by(ray_order);
    rays.dedup_by(|a, b| a.support == b.support);
    // An empty result decides "the cone is trivial", which in turn decides
    // infeasibility upstream. Where the exhaustive search is affordable, let
    // it confirm or overrule that verdict.
    if rays.is_empty() && n <= BRUTE_FORCE_MAX_DIM {
        rays = brute_rays(t, tol, parallel)?;
    }
    // Pointedness guard. Rays are nonnegative, so opposite pairs cannot
    // actually occur here; the check documents (and enforces) the contract.
    let thr = tol.zero_threshold(1.0);
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            if inf_norm(&(&rays[i].y + &rays[j].y)) <= thr {
                return Err(ConeError::NotPointed { i, j });
            }
        }
    }
    Ok(rays)
}

/// Two extreme rays of the partial cone (after `processed` hyperplanes) are
/// adjacent when the constraints restricted to the union of their supports
/// leave a solution space of dimension exactly two — the plane the rays span.
/// The dimension must be exact: admitting higher-dimensional pairs breeds
/// interior candidates that pair up again on later planes and blow the sweep
/// up quadratically. The rank itself is taken with the loose
/// [`ADJACENCY_REL_TOL`] cutoff, so near-collapsed pairs (the degenerate
/// geometry where tight cutoffs lose true rays) read as dimension two and
/// stay admitted; the final refinement pass in [`dd_rays`] discards whatever
/// that looseness lets through (see the module docs).
fn adjacent_in_partial_cone(
    basis: &Matrix,
    processed: usize,
    support_union: &[usize],
    _tol: &ToleranceConfig,
) -> bool {
    let s = support_union.len();
    if s < 2 {
        return false;
    }
    if processed == 0 {
        return s == 2;
    }
    let sub = Matrix::from_fn(processed, s, |r, c| basis[(support_union[c], r)]);
    let svd = crate::linalg::jacobi_svd(&sub);
    let sigma_max = svd.sigma.iter().fold(0.0_f64, |a, &x| a.max(x));
    // The basis is orthonormal, so its submatrices live at unit scale.
    let cutoff = ADJACENCY_REL_TOL * sigma_max.max(1.0);
    let rank = svd.sigma.iter().filter(|&&x| x > cutoff).count();
    s - rank == 2
}

fn union_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn ray_order(a: &Ray, b: &Ray) -> Ordering {
    a.support.cmp(&b.support).then_with(|| {
        for i in 0..a.y.len() {
            match a.y[i].partial_cmp(&b.y[i]).expect("finite ray entries") {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    })
}
