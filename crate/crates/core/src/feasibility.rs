//! Feasibility of linear inequality systems `G x <= v`.
//!
//! The method decomposes the bound `v` orthogonally against the range
//! subspace `F = R(G)`: `v = v_F + upsilon` with `v_F` the projection onto
//! `F` and `upsilon` perpendicular to it. Writing slacks as `y = v - G x`,
//! the system is feasible exactly when the cone `{beta * upsilon + F, beta
//! >= 0}` meets the nonnegative orthant `P` outside the origin. That cone
//! test is run on the extended subspace `F_e = span(upsilon) + F`, whose
//! intersection with `P` is a pointed cone enumerable by
//! [`crate::cone_gen`]; each extreme ray `y` is then *calibrated* by the
//! ratio `beta` between its component orthogonal to `F` and `upsilon`.
//! One sign of `beta` is shared by every ray: `beta > 0` certifies
//! feasibility (and `w = y / beta` is a reachable slack), `beta < 0`
//! certifies infeasibility, and an empty cone certifies infeasibility
//! outright.
//!
//! The whole approach requires `F` to touch `P` only at the origin
//! ("strict tangency"); inputs violating that are rejected up front with a
//! witness ray rather than answered incorrectly.
//!
//! Calibrated rays are exactly the extreme points of the *contact polytope*
//! `(v + F) ∩ P` — the set of slack vectors reachable at feasible points —
//! from which every solution of the original system can be recovered.

use thiserror::Error;

use crate::cone_gen::{enumerate_rays, ConeError, Ray};
use crate::linalg::{
    inf_norm, orthonormal_range_basis, solve_consistent, LinalgError, Matrix, ProjectorSet, Vector,
};
use crate::tolerance::ToleranceConfig;

/// A problem instance failed structural validation (shape mismatch,
/// non-finite entries, empty dimensions).
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid problem: {0}")]
pub struct InvalidProblem(pub String);

/// Errors from the feasibility pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FeasibilityError {
    /// The range of `G` meets the orthant away from the origin, so the
    /// method's core hypothesis fails; the witness is a nonnegative, nonzero
    /// direction in `R(G)`.
    #[error("range of G is not strictly tangent to the orthant (witness support {:?})", witness.support)]
    NotStrictlyTangent { witness: Ray },
    /// A ray calibrated to `beta ~ 0`, which strict tangency rules out;
    /// indicates numerical trouble.
    #[error("calibration produced beta ~ 0 ({beta:.3e})")]
    ZeroBeta { beta: f64 },
    /// The componentwise calibration ratios disagree beyond `ratio_tol`.
    #[error("calibration ratios spread {spread:.3e} exceeds limit {limit:.3e}")]
    InconsistentRatios { spread: f64, limit: f64 },
    /// Calibrated rays changed sign, which contradicts the sign-constancy
    /// guarantee; indicates numerical trouble.
    #[error("calibration signs are inconsistent across rays ({first:.3e} then {second:.3e})")]
    BetaSignChange { first: f64, second: f64 },
    /// The contact polytope is only defined for `upsilon != 0`.
    #[error("bound decomposition has upsilon ~ 0; the contact polytope degenerates")]
    DegenerateUpsilon,
    /// A contact polytope was requested for an infeasible system.
    #[error("system is infeasible; the contact polytope is empty")]
    InfeasibleProblem,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// The system `G x <= v` (componentwise), validated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityProblem {
    g: Matrix,
    v: Vector,
}

impl FeasibilityProblem {
    pub fn new(g: Matrix, v: Vector) -> Result<Self, InvalidProblem> {
        if g.nrows() == 0 || g.ncols() == 0 {
            return Err(InvalidProblem(format!(
                "matrix G must be nonempty, got {}x{}",
                g.nrows(),
                g.ncols()
            )));
        }
        if v.len() != g.nrows() {
            return Err(InvalidProblem(format!(
                "bound v has length {}, expected {} (rows of G)",
                v.len(),
                g.nrows()
            )));
        }
        if g.iter().any(|x| !x.is_finite()) {
            return Err(InvalidProblem("matrix G contains a non-finite entry".into()));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(InvalidProblem("bound v contains a non-finite entry".into()));
        }
        Ok(FeasibilityProblem { g, v })
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    pub fn v(&self) -> &Vector {
        &self.v
    }

    /// Number of inequalities (ambient slack dimension).
    pub fn rows(&self) -> usize {
        self.g.nrows()
    }

    /// Number of unknowns.
    pub fn cols(&self) -> usize {
        self.g.ncols()
    }
}

/// Orthogonal splitting of the bound: `v = v_f + upsilon` with `v_f` in
/// `R(G)`, `upsilon` perpendicular to it, and `z` a minimum-norm preimage
/// (`G z = v_f`).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundDecomposition {
    pub v_f: Vector,
    pub upsilon: Vector,
    pub z: Vector,
}

/// Verdict of the strict-tangency screen on `R(G)`.
#[derive(Debug, Clone, PartialEq)]
pub enum TangencyStatus {
    StrictlyTangent,
    /// `R(G)` contains this nonnegative, nonzero direction.
    Violated { witness: Ray },
}

/// A cone ray together with its calibration: `beta` is the common ratio
/// between the ray's `F`-orthogonal part and `upsilon`, and `w = y / beta`
/// is the corresponding extreme point of the contact polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedGenerator {
    pub ray: Ray,
    pub beta: f64,
    pub w: Vector,
}

/// Outcome of calibrating one ray.
#[derive(Debug, Clone, PartialEq)]
pub enum Calibration {
    /// `beta > 0`: the ray scales onto the contact polytope.
    Positive(CalibratedGenerator),
    /// `beta < 0`: evidence of infeasibility (no rescaling reaches `P`).
    Negative { ray: Ray, beta: f64 },
}

/// Which shortcut classified a trivially feasible instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialReason {
    /// `v >= 0`, so `x = 0` already satisfies the system.
    VInOrthant,
    /// `upsilon = 0`: `v` lies in `R(G)` and `x = z` has zero slack.
    UpsilonZero,
    /// `upsilon >= 0`: `x = z` leaves the nonnegative slack `upsilon`.
    UpsilonInOrthant,
}

/// Why the system is infeasible.
#[derive(Debug, Clone, PartialEq)]
pub enum InfeasibilityReason {
    /// The extended subspace meets the orthant only at the origin.
    StrictlyTangentFe,
    /// Rays exist but calibrate negatively.
    NegativeBeta { ray: Ray, beta: f64 },
}

/// Classification of a feasibility run.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibilityStatus {
    TrivialFeasible { x: Vector, which: TrivialReason },
    Feasible { x_witness: Vector, generators: Vec<CalibratedGenerator> },
    Infeasible { reason: InfeasibilityReason },
}

/// Result of [`solve_feasibility`] plus the number of extreme rays the run
/// enumerated (for reporting and for comparing solver variants).
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityOutcome {
    pub status: FeasibilityStatus,
    pub rays_enumerated: usize,
}

impl FeasibilityOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self.status, FeasibilityStatus::Infeasible { .. })
    }

    /// A feasible point, when one exists.
    pub fn witness(&self) -> Option<&Vector> {
        match &self.status {
            FeasibilityStatus::TrivialFeasible { x, .. } => Some(x),
            FeasibilityStatus::Feasible { x_witness, .. } => Some(x_witness),
            FeasibilityStatus::Infeasible { .. } => None,
        }
    }
}

/// The contact polytope `(v + R(G)) ∩ P`: all slack vectors reachable at
/// feasible points, described by its extreme points.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactPolytope {
    pub extreme_points: Vec<Vector>,
}

/// Screens `R(G) ∩ P = {0}` by enumerating the extreme rays of the range
/// inside the orthant; any ray found is returned as a witness.
pub fn check_strict_tangency(
    g: &Matrix,
    tol: &ToleranceConfig,
) -> Result<TangencyStatus, ConeError> {
    let n = g.nrows();
    let p_f = crate::linalg::projector_onto_range(g, tol);
    // N(I - P_F) = R(G).
    let t = Matrix::identity(n, n) - p_f;
    let rays = enumerate_rays(&t, tol)?;
    Ok(match rays.into_iter().next() {
        None => TangencyStatus::StrictlyTangent,
        Some(witness) => TangencyStatus::Violated { witness },
    })
}

/// Splits `v` orthogonally against `R(G)` and computes the minimum-norm
/// preimage of the projected part.
pub fn decompose_bound(
    p: &FeasibilityProblem,
    tol: &ToleranceConfig,
) -> Result<BoundDecomposition, FeasibilityError> {
    let p_f = crate::linalg::projector_onto_range(p.g(), tol);
    let v_f = &p_f * p.v();
    let upsilon = p.v() - &v_f;
    let z = solve_consistent(p.g(), &v_f, tol)?;
    Ok(BoundDecomposition { v_f, upsilon, z })
}

/// Calibrates one cone ray against the orthogonal remainder of the bound:
/// computes the common ratio `beta` with `(I - P_F) y = beta * upsilon` and
/// verifies that all componentwise ratios agree within `ratio_tol`.
pub fn calibrate(
    ray: &Ray,
    upsilon: &Vector,
    projs: &ProjectorSet,
    tol: &ToleranceConfig,
) -> Result<Calibration, FeasibilityError> {
    let u_scale = inf_norm(upsilon);
    if u_scale <= tol.zero_threshold(0.0) {
        return Err(FeasibilityError::DegenerateUpsilon);
    }
    let r = &projs.p_f_perp * &ray.y;
    // Least-squares value of the ratio; exact when the ray lies in the
    // extended subspace.
    let beta = upsilon.dot(&r) / upsilon.dot(upsilon);
    let u_thr = tol.zero_threshold(u_scale);
    let mut spread = 0.0_f64;
    for i in 0..upsilon.len() {
        if upsilon[i].abs() > u_thr {
            spread = spread.max((r[i] / upsilon[i] - beta).abs());
        }
    }
    let limit = tol.ratio_tol * (1.0 + beta.abs());
    if spread > limit {
        return Err(FeasibilityError::InconsistentRatios { spread, limit });
    }
    // beta ~ 0 would put the ray inside F itself, which strict tangency
    // forbids; treat it as a numerical failure rather than picking a side.
    if beta.abs() * u_scale <= tol.zero_threshold(inf_norm(&ray.y)) {
        return Err(FeasibilityError::ZeroBeta { beta });
    }
    if beta > 0.0 {
        Ok(Calibration::Positive(CalibratedGenerator {
            ray: ray.clone(),
            beta,
            w: &ray.y / beta,
        }))
    } else {
        Ok(Calibration::Negative { ray: ray.clone(), beta })
    }
}

/// Decides feasibility of `G x <= v`.
///
/// With `want_all` set, a feasible outcome carries every calibrated
/// generator (the full set of contact-polytope extreme points); otherwise
/// only the first generator is calibrated.
pub fn solve_feasibility(
    p: &FeasibilityProblem,
    tol: &ToleranceConfig,
    want_all: bool,
) -> Result<FeasibilityOutcome, FeasibilityError> {
    solve_feasibility_inner(p, tol, want_all, true)
}

pub(crate) fn solve_feasibility_inner(
    p: &FeasibilityProblem,
    tol: &ToleranceConfig,
    want_all: bool,
    check_tangency: bool,
) -> Result<FeasibilityOutcome, FeasibilityError> {
    if check_tangency {
        if let TangencyStatus::Violated { witness } = check_strict_tangency(p.g(), tol)? {
            return Err(FeasibilityError::NotStrictlyTangent { witness });
        }
    }

    // Trivial shortcut: the zero point works when v is already nonnegative.
    let v_thr = tol.zero_threshold(inf_norm(p.v()));
    if p.v().iter().all(|&vi| vi >= -v_thr) {
        return Ok(FeasibilityOutcome {
            status: FeasibilityStatus::TrivialFeasible {
                x: Vector::zeros(p.cols()),
                which: TrivialReason::VInOrthant,
            },
            rays_enumerated: 0,
        });
    }

    let dec = decompose_bound(p, tol)?;
    let u_scale = inf_norm(&dec.upsilon);
    if u_scale <= v_thr {
        // v lies in R(G): x = z reaches it with zero slack.
        return Ok(FeasibilityOutcome {
            status: FeasibilityStatus::TrivialFeasible {
                x: dec.z,
                which: TrivialReason::UpsilonZero,
            },
            rays_enumerated: 0,
        });
    }
    let u_thr = tol.zero_threshold(u_scale);
    if dec.upsilon.iter().all(|&ui| ui >= -u_thr) {
        return Ok(FeasibilityOutcome {
            status: FeasibilityStatus::TrivialFeasible {
                x: dec.z,
                which: TrivialReason::UpsilonInOrthant,
            },
            rays_enumerated: 0,
        });
    }

    let basis = orthonormal_range_basis(p.g(), tol);
    let projs = ProjectorSet::build(&basis, &dec.upsilon, tol);
    let rays = enumerate_rays(&projs.t, tol)?;
    let rays_enumerated = rays.len();
    if rays.is_empty() {
        return Ok(FeasibilityOutcome {
            status: FeasibilityStatus::Infeasible { reason: InfeasibilityReason::StrictlyTangentFe },
            rays_enumerated,
        });
    }

    let first = calibrate(&rays[0], &dec.upsilon, &projs, tol)?;
    let generators = match first {
        Calibration::Negative { ray, beta } => {
            return Ok(FeasibilityOutcome {
                status: FeasibilityStatus::Infeasible {
                    reason: InfeasibilityReason::NegativeBeta { ray, beta },
                },
                rays_enumerated,
            });
        }
        Calibration::Positive(g0) => {
            if want_all {
                let mut gens = vec![g0];
                for ray in &rays[1..] {
                    match calibrate(ray, &dec.upsilon, &projs, tol)? {
                        Calibration::Positive(g) => gens.push(g),
                        Calibration::Negative { beta, .. } => {
                            return Err(FeasibilityError::BetaSignChange {
                                first: gens[0].beta,
                                second: beta,
                            });
                        }
                    }
                }
                gens
            } else {
                vec![g0]
            }
        }
    };

    let w = &generators[0].w;
    let x_witness = solve_consistent(p.g(), &(p.v() - w), tol)?;
    debug_assert!(
        (p.g() * &x_witness - p.v())
            .iter()
            .all(|&s| s <= tol.zero_threshold(inf_norm(p.v()))),
        "feasible witness violates a constraint"
    );
    Ok(FeasibilityOutcome {
        status: FeasibilityStatus::Feasible { x_witness, generators },
        rays_enumerated,
    })
}

/// Enumerates and calibrates every generator for an already-built
/// remainder/projector pair. Shared by the public polytope constructor and
/// the LP solvers.
pub(crate) fn contact_polytope_parts(
    upsilon: &Vector,
    projs: &ProjectorSet,
    tol: &ToleranceConfig,
) -> Result<(Vec<CalibratedGenerator>, usize), FeasibilityError> {
    let rays = enumerate_rays(&projs.t, tol)?;
    let count = rays.len();
    if rays.is_empty() {
        return Err(FeasibilityError::InfeasibleProblem);
    }
    let mut gens = Vec::with_capacity(count);
    for ray in &rays {
        match calibrate(ray, upsilon, projs, tol)? {
            Calibration::Positive(g) => gens.push(g),
            Calibration::Negative { beta, .. } => {
                if gens.is_empty() {
                    return Err(FeasibilityError::InfeasibleProblem);
                }
                return Err(FeasibilityError::BetaSignChange { first: gens[0].beta, second: beta });
            }
        }
    }
    Ok((gens, count))
}

/// Builds the contact polytope `(v + R(G)) ∩ P` of a feasible, strictly
/// tangent system with `upsilon != 0`.
pub fn contact_polytope(
    p: &FeasibilityProblem,
    tol: &ToleranceConfig,
) -> Result<ContactPolytope, FeasibilityError> {
    if let TangencyStatus::Violated { witness } = check_strict_tangency(p.g(), tol)? {
        return Err(FeasibilityError::NotStrictlyTangent { witness });
    }
    let dec = decompose_bound(p, tol)?;
    if inf_norm(&dec.upsilon) <= tol.zero_threshold(inf_norm(p.v())) {
        return Err(FeasibilityError::DegenerateUpsilon);
    }
    let basis = orthonormal_range_basis(p.g(), tol);
    let projs = ProjectorSet::build(&basis, &dec.upsilon, tol);
    let (gens, _) = contact_polytope_parts(&dec.upsilon, &projs, tol)?;
    Ok(ContactPolytope { extreme_points: gens.into_iter().map(|g| g.w).collect() })
}

/// A point in the relative interior of the polytope: the mean of its
/// extreme points.
pub fn relative_interior_point(cp: &ContactPolytope) -> Vector {
    assert!(!cp.extreme_points.is_empty(), "polytope has no extreme points");
    let n = cp.extreme_points[0].len();
    let mut sum = Vector::zeros(n);
    for p in &cp.extreme_points {
        sum += p;
    }
    sum / cp.extreme_points.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn column(entries: &[f64]) -> Matrix {
        Matrix::from_column_slice(entries.len(), 1, entries)
    }

    fn problem(g: Matrix, v: &[f64]) -> FeasibilityProblem {
        FeasibilityProblem::new(g, Vector::from_vec(v.to_vec())).unwrap()
    }

    #[test]
    fn construction_rejects_malformed_input() {
        let g = column(&[1.0, -1.0]);
        assert!(FeasibilityProblem::new(g.clone(), Vector::zeros(3)).is_err());
        assert!(FeasibilityProblem::new(Matrix::zeros(0, 1), Vector::zeros(0)).is_err());
        assert!(
            FeasibilityProblem::new(g, Vector::from_vec(vec![f64::NAN, 0.0])).is_err()
        );
    }

    #[test]
    fn decompose_interval_instance() {
        // x <= 2 and -x <= -1, i.e. 1 <= x <= 2.
        let p = problem(column(&[1.0, -1.0]), &[2.0, -1.0]);
        let dec = decompose_bound(&p, &tol()).unwrap();
        assert_abs_diff_eq!(dec.v_f[0], 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(dec.v_f[1], -1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(dec.upsilon[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(dec.upsilon[1], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(dec.z[0], 1.5, epsilon = 1e-12);
    }

    #[test]
    fn decompose_bound_splits_orthogonally() {
        let p = problem(column(&[1.0, -1.0]), &[1.0, 1.0]);
        let dec = decompose_bound(&p, &tol()).unwrap();
        // v is orthogonal to the range here, so v_f = 0.
        assert!(inf_norm(&dec.v_f) <= 1e-12);
        assert_abs_diff_eq!(dec.upsilon[0], 1.0, epsilon = 1e-12);
        // And when v sits inside the range, upsilon vanishes.
        let p = problem(column(&[1.0, -1.0]), &[3.0, -3.0]);
        let dec = decompose_bound(&p, &tol()).unwrap();
        assert!(inf_norm(&dec.upsilon) <= 1e-12);
        assert_abs_diff_eq!(dec.z[0], 3.0, epsilon = 1e-10);
    }

    #[test]
    fn tangency_screen_accepts_and_rejects() {
        assert_eq!(
            check_strict_tangency(&column(&[1.0, -1.0]), &tol()).unwrap(),
            TangencyStatus::StrictlyTangent
        );
        match check_strict_tangency(&column(&[1.0, 1.0]), &tol()).unwrap() {
            TangencyStatus::Violated { witness } => {
                assert_eq!(witness.support, vec![0, 1]);
                assert!(inf_norm(&(&witness.y - Vector::from_vec(vec![1.0, 1.0]))) <= 1e-9);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn calibrate_positive_ray() {
        let p = problem(column(&[1.0, -1.0]), &[2.0, -1.0]);
        let dec = decompose_bound(&p, &tol()).unwrap();
        let basis = orthonormal_range_basis(p.g(), &tol());
        let projs = ProjectorSet::build(&basis, &dec.upsilon, &tol());
        let ray = Ray::from_unnormalized(Vector::from_vec(vec![1.0, 0.0]), &tol()).unwrap();
        match calibrate(&ray, &dec.upsilon, &projs, &tol()).unwrap() {
            Calibration::Positive(g) => {
                assert_abs_diff_eq!(g.beta, 1.0, epsilon = 1e-12);
                assert!(inf_norm(&(&g.w - Vector::from_vec(vec![1.0, 0.0]))) <= 1e-12);
            }
            other => panic!("expected positive calibration, got {other:?}"),
        }
    }

    #[test]
    fn calibrate_negative_ray() {
        // 0 <= x <= ... with v = (0, -1): x <= 0 and x >= 1 cannot both hold.
        let p = problem(column(&[1.0, -1.0]), &[0.0, -1.0]);
        let dec = decompose_bound(&p, &tol()).unwrap();
        assert!(dec.upsilon[0] < 0.0 && dec.upsilon[1] < 0.0);
        let basis = orthonormal_range_basis(p.g(), &tol());
        let projs = ProjectorSet::build(&basis, &dec.upsilon, &tol());
        let ray = Ray::from_unnormalized(Vector::from_vec(vec![1.0, 0.0]), &tol()).unwrap();
        match calibrate(&ray, &dec.upsilon, &projs, &tol()).unwrap() {
            Calibration::Negative { beta, .. } => assert_abs_diff_eq!(beta, -1.0, epsilon = 1e-12),
            other => panic!("expected negative calibration, got {other:?}"),
        }
    }

    #[test]
    fn calibrate_rejects_inconsistent_ratios() {
        // F = {0} (zero matrix), so the orthogonal part of any ray is the ray
        // itself; a ray not parallel to upsilon has no common ratio.
        let p = problem(Matrix::zeros(2, 1), &[-1.0, -1.0]);
        let dec = BoundDecomposition {
            v_f: Vector::zeros(2),
            upsilon: Vector::from_vec(vec![1.0, 1.0]),
            z: Vector::zeros(1),
        };
        let basis = orthonormal_range_basis(p.g(), &tol());
        let projs = ProjectorSet::build(&basis, &dec.upsilon, &tol());
        let ray = Ray::from_unnormalized(Vector::from_vec(vec![1.0, 0.5]), &tol()).unwrap();
        let err = calibrate(&ray, &dec.upsilon, &projs, &tol()).unwrap_err();
        assert!(matches!(err, FeasibilityError::InconsistentRatios { .. }));
    }

    #[test]
    fn trivial_when_bound_is_nonnegative() {
        let p = problem(column(&[1.0, -1.0]), &[1.0, 1.0]);
        let out = solve_feasibility(&p, &tol(), false).unwrap();
        match out.status {
            FeasibilityStatus::TrivialFeasible { x, which } => {
                assert_eq!(which, TrivialReason::VInOrthant);
                assert_eq!(x, Vector::zeros(1));
            }
            other => panic!("expected trivial feasibility, got {other:?}"),
        }
    }

    #[test]
    fn trivial_when_upsilon_is_zero() {
        let p = problem(column(&[1.0, -1.0]), &[3.0, -3.0]);
        let out = solve_feasibility(&p, &tol(), false).unwrap();
        match out.status {
            FeasibilityStatus::TrivialFeasible { x, which } => {
                assert_eq!(which, TrivialReason::UpsilonZero);
                assert_abs_diff_eq!(x[0], 3.0, epsilon = 1e-10);
            }
            other => panic!("expected trivial feasibility, got {other:?}"),
        }
    }

    #[test]
    fn trivial_when_upsilon_is_nonnegative() {
        let p = problem(column(&[1.0, -1.0]), &[2.0, -1.0]);
        let out = solve_feasibility(&p, &tol(), false).unwrap();
        match out.status {
            FeasibilityStatus::TrivialFeasible { x, which } => {
                assert_eq!(which, TrivialReason::UpsilonInOrthant);
                assert_abs_diff_eq!(x[0], 1.5, epsilon = 1e-12);
            }
            other => panic!("expected trivial feasibility, got {other:?}"),
        }
    }

    #[test]
    fn feasible_through_cone_enumeration() {
        // x <= 2, x >= 1, x <= 1.2: feasible with both v and upsilon leaving
        // the orthant, so the cone machinery must run.
        let p = problem(column(&[1.0, -1.0, 1.0]), &[2.0, -1.0, 1.2]);
        let dec = decompose_bound(&p, &tol()).unwrap();
        assert!(dec.upsilon.iter().any(|&u| u < -1e-12));
        let out = solve_feasibility(&p, &tol(), true).unwrap();
        match &out.status {
            FeasibilityStatus::Feasible { x_witness, generators } => {
                assert!(x_witness[0] >= 1.0 - 1e-8 && x_witness[0] <= 1.2 + 1e-8);
                assert!(!generators.is_empty());
                for g in generators {
                    assert!(g.beta > 0.0);
                    // Each calibrated point is a reachable slack vector.
                    assert!(g.w.iter().all(|&wi| wi >= -1e-9));
                }
            }
            other => panic!("expected nontrivial feasibility, got {other:?}"),
        }
        assert!(out.rays_enumerated >= 1);
    }

    #[test]
    fn infeasible_interval_reports_negative_beta() {
        // x <= 0 and x >= 1.
        let p = problem(column(&[1.0, -1.0]), &[0.0, -1.0]);
        let out = solve_feasibility(&p, &tol(), false).unwrap();
        match out.status {
            FeasibilityStatus::Infeasible { reason: InfeasibilityReason::NegativeBeta { beta, .. } } => {
                assert!(beta < 0.0);
            }
            other => panic!("expected negative-beta infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_when_extended_subspace_misses_orthant() {
        // Constructed so that span(upsilon) + R(G) meets the orthant only at
        // the origin: u spans the range, upsilon is picked in its orthogonal
        // complement so the resulting plane avoids P entirely.
        let u = Vector::from_vec(vec![1.0, -1.0, 1.0]);
        let a = Vector::from_vec(vec![1.0, 1.0, 0.0]) / 2.0_f64.sqrt();
        let b = Vector::from_vec(vec![-1.0, 1.0, 2.0]) / 6.0_f64.sqrt();
        let upsilon = &a - &b;
        let v = &u + &upsilon;
        let p = FeasibilityProblem::new(column(&[1.0, -1.0, 1.0]), v.clone()).unwrap();

        // Independent 1-D check: the rows with positive coefficient bound x
        // above, the rest below; the interval is empty.
        let ub = (v[0] / 1.0).min(v[2] / 1.0);
        let lb = v[1] / -1.0;
        assert!(lb > ub + 1e-9, "instance must be infeasible");

        let out = solve_feasibility(&p, &tol(), false).unwrap();
        assert_eq!(
            out.status,
            FeasibilityStatus::Infeasible { reason: InfeasibilityReason::StrictlyTangentFe }
        );
        assert_eq!(out.rays_enumerated, 0);
    }

    #[test]
    fn tangency_violation_is_rejected_with_witness() {
        let p = problem(column(&[1.0, 1.0]), &[-1.0, -2.0]);
        let err = solve_feasibility(&p, &tol(), false).unwrap_err();
        assert!(matches!(err, FeasibilityError::NotStrictlyTangent { .. }));
    }

    /// Independent endpoints for a segment polytope: clip the line
    /// `upsilon + t * d` (d spanning the 1-D range) to the quadrant.
    fn clipped_segment(upsilon: &Vector, d: &Vector) -> Vec<Vector> {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..upsilon.len() {
            if d[i] > 0.0 {
                lo = lo.max(-upsilon[i] / d[i]);
            } else if d[i] < 0.0 {
                hi = hi.min(-upsilon[i] / d[i]);
            }
        }
        assert!(lo < hi);
        vec![upsilon + d * lo, upsilon + d * hi]
    }

    #[test]
    fn contact_polytope_of_interval_is_a_segment() {
        let p = problem(column(&[1.0, -1.0]), &[2.0, -1.0]);
        let dec = decompose_bound(&p, &tol()).unwrap();
        let d = Vector::from_vec(vec![1.0, -1.0]);
        let expected = clipped_segment(&dec.upsilon, &d);

        let cp = contact_polytope(&p, &tol()).unwrap();
        assert_eq!(cp.extreme_points.len(), 2);
        for e in &expected {
            assert!(
                cp.extreme_points.iter().any(|w| inf_norm(&(w - e)) <= 1e-9),
                "missing endpoint {e:?}, got {:?}",
                cp.extreme_points
            );
        }
        // Interior point of the segment is its midpoint.
        let mid = relative_interior_point(&cp);
        assert!(inf_norm(&(&mid - (&expected[0] + &expected[1]) / 2.0)) <= 1e-9);
    }

    #[test]
    fn contact_polytope_single_point_when_range_is_trivial() {
        // G = 0: the polytope is just {v} when v is interior to the orthant.
        let p = problem(Matrix::zeros(2, 1), &[0.5, 1.0]);
        let cp = contact_polytope(&p, &tol()).unwrap();
        assert_eq!(cp.extreme_points.len(), 1);
        assert!(inf_norm(&(&cp.extreme_points[0] - p.v())) <= 1e-9);
        let ri = relative_interior_point(&cp);
        assert!(inf_norm(&(&ri - p.v())) <= 1e-9);
    }

    #[test]
    fn contact_polytope_requires_nonzero_upsilon() {
        let p = problem(column(&[1.0, -1.0]), &[3.0, -3.0]);
        let err = contact_polytope(&p, &tol()).unwrap_err();
        assert_eq!(err, FeasibilityError::DegenerateUpsilon);
    }

    #[test]
    fn contact_polytope_of_infeasible_system_is_an_error() {
        let p = problem(column(&[1.0, -1.0]), &[0.0, -1.0]);
        let err = contact_polytope(&p, &tol()).unwrap_err();
        assert!(matches!(
            err,
            FeasibilityError::InfeasibleProblem | FeasibilityError::BetaSignChange { .. }
        ));
    }
}
