//! Linear programs `max f·x subject to G x <= v`, solved by reducing
//! optimality to a family of feasibility questions.
//!
//! The objective is folded into one extra inequality `f·x >= h`, giving the
//! augmented system `[G; -f^T] x <= (v, -h)`. For heights `h` below the
//! optimum the augmented system is feasible; the optimum `h_o` is the
//! largest feasible height. Both solvers start from a height just below the
//! objective value of a feasibility witness and read the remaining gap off
//! the augmented contact polytope: its extreme points carry a last (test)
//! coordinate equal to `f·x - h`, so the largest last coordinate among them
//! is exactly `h_o - h`.
//!
//! Two drivers share that skeleton:
//!
//! * [`solve_enumerative`] enumerates the full augmented polytope once at
//!   the starting height and jumps straight to the optimum.
//! * [`solve_evolutive`] asks the cone enumerator for a *single* ray with a
//!   positive test coordinate, climbs by that generator's last component,
//!   and repeats until no such ray remains — at which point the current
//!   height is the optimum. It usually visits far fewer rays and records a
//!   step-by-step trace.
//!
//! Each solved instance reports `rays_enumerated`, the number of extreme
//! rays produced by completed cone enumerations over the run, so the two
//! drivers can be compared on equal terms.

use thiserror::Error;

use crate::cone_gen::{next_ray, ConeError, Ray, RayCursor};
use crate::feasibility::{
    calibrate, check_strict_tangency, contact_polytope_parts, solve_feasibility_inner, Calibration,
    CalibratedGenerator, FeasibilityError, FeasibilityProblem, InvalidProblem, TangencyStatus,
};
use crate::linalg::{
    inf_norm, orthonormal_range_basis, solve_consistent, LinalgError, Matrix, ProjectorSet,
    Vector,
};
use crate::tolerance::ToleranceConfig;

/// Relative margin used to place the starting height below the witness
/// objective value (and to lower it again on a degenerate restart).
const INITIAL_H_MARGIN: f64 = 1e-3;

/// Relative tolerance for the final consistency check `f·x_o = h_o`.
const OPTIMUM_REL_TOL: f64 = 1e-7;

/// Hard cap on cursor positions the evolutive search may inspect in total.
const EXAMINED_CAP: usize = 1_000_000;

/// Errors from the LP drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    /// The remainder of the augmented bound vanished twice at distinct
    /// heights; the instance is numerically degenerate for this method.
    #[error("augmented bound lies in the range at two distinct heights")]
    DegenerateHeight,
    /// Safety cap on the evolutive search loop.
    #[error("evolutive search exceeded the iteration cap ({examined} rays examined)")]
    IterationCap { examined: usize },
    /// An internal consistency check failed.
    #[error("numerical breakdown: {context}")]
    Breakdown { context: String },
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// Which system failed the strict-tangency screen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangencyLayer {
    /// `R(G)` itself meets the orthant: the whole method is inapplicable.
    Original,
    /// `R([G; -f^T])` meets the orthant; in particular this happens whenever
    /// `f` is not a combination of the rows of `G` (an unbounded direction
    /// may exist), so the objective is rejected rather than misreported.
    Augmented,
}

/// Classification of an LP run.
#[derive(Debug, Clone, PartialEq)]
pub enum LpStatus {
    Optimal {
        /// Optimal objective value.
        h_o: f64,
        /// An optimal point.
        x_o: Vector,
        /// Slack of the augmented system at `x_o` (last entry zero).
        y_o: Vector,
        /// Extreme points of the optimal face, when requested.
        optimal_extremes: Option<Vec<Vector>>,
    },
    Infeasible,
    Unsupported { which: TangencyLayer, witness: Ray },
}

/// One step of the evolutive climb.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutiveStep {
    /// Height at which the generator was found.
    pub h: f64,
    /// Its last (test) component — the amount the height climbs.
    pub generator_last_component: f64,
    /// Cursor positions inspected before the generator appeared.
    pub rays_examined: usize,
    /// Whether deleting the test column left the cone matrix rank unchanged.
    pub rank_preserved: bool,
}

/// Trace of an evolutive run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvolutiveTrace {
    pub steps: Vec<EvolutiveStep>,
    /// How many times the starting height had to be lowered because the
    /// augmented bound fell inside the range.
    pub degenerate_restarts: usize,
}

/// Result of an LP run plus bookkeeping shared by both drivers.
#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Present for evolutive runs.
    pub trace: Option<EvolutiveTrace>,
    /// Extreme rays produced by completed cone enumerations during the run.
    pub rays_enumerated: usize,
}

/// The program `max f·x subject to G x <= v`, validated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    feas: FeasibilityProblem,
    f: Vector,
}

impl LpProblem {
    pub fn new(g: Matrix, v: Vector, f: Vector) -> Result<Self, InvalidProblem> {
        let feas = FeasibilityProblem::new(g, v)?;
        if f.len() != feas.cols() {
            return Err(InvalidProblem(format!(
                "objective f has length {}, expected {} (columns of G)",
                f.len(),
                feas.cols()
            )));
        }
        if f.iter().any(|x| !x.is_finite()) {
            return Err(InvalidProblem("objective f contains a non-finite entry".into()));
        }
        if inf_norm(&f) == 0.0 {
            return Err(InvalidProblem("objective f must be nonzero".into()));
        }
        Ok(LpProblem { feas, f })
    }

    pub fn g(&self) -> &Matrix {
        self.feas.g()
    }

    pub fn v(&self) -> &Vector {
        self.feas.v()
    }

    pub fn f(&self) -> &Vector {
        &self.f
    }

    /// The constraint system with the objective dropped.
    pub fn feasibility_problem(&self) -> &FeasibilityProblem {
        &self.feas
    }
}

/// The augmented feasibility system `[G; -f^T] x <= (v, -h)`, which is
/// feasible exactly when the program attains an objective value of at least
/// `h`.
pub fn augment(p: &LpProblem, h: f64) -> FeasibilityProblem {
    let g_hat = augmented_matrix(p.g(), p.f());
    let mut v_hat = Vector::zeros(p.g().nrows() + 1);
    v_hat.rows_mut(0, p.g().nrows()).copy_from(p.v());
    v_hat[p.g().nrows()] = -h;
    FeasibilityProblem::new(g_hat, v_hat).expect("augmented system is structurally valid")
}

fn augmented_matrix(g: &Matrix, f: &Vector) -> Matrix {
    let (n, m) = (g.nrows(), g.ncols());
    Matrix::from_fn(n + 1, m, |i, j| if i < n { g[(i, j)] } else { -f[j] })
}

/// True when deleting the last (test) column of the cone matrix leaves its
/// rank unchanged, i.e. that column is linearly dependent on the others.
/// The evolutive driver records this at every step; a rank drop flags a
/// step whose cone has lost contact with the test coordinate.
pub fn rank_drop_check(t: &Matrix, tol: &ToleranceConfig) -> bool {
    // The cone matrix is a projector (unit entry scale), so both rank
    // decisions are anchored there.
    let full = crate::linalg::unit_scale_rank(t, tol);
    let trimmed = t.clone().remove_column(t.ncols() - 1);
    let without = crate::linalg::unit_scale_rank(&trimmed, tol);
    full == without
}

/// Shared per-run state for the augmented system.
struct AugCtx {
    g_hat: Matrix,
    v: Vector,
    proj_template: ProjectorSet,
    delta: f64,
    /// Index of the test coordinate (the appended row).
    test_column: usize,
}

/// The cone data at one height: the orthogonal remainder of the augmented
/// bound and the projector family built on it.
struct ConeAtHeight {
    upsilon: Vector,
    projs: ProjectorSet,
}

impl AugCtx {
    fn new(p: &LpProblem, objective_at_witness: f64, tol: &ToleranceConfig) -> Self {
        let g_hat = augmented_matrix(p.g(), p.f());
        let basis = orthonormal_range_basis(&g_hat, tol);
        let n1 = g_hat.nrows();
        let proj_template = ProjectorSet::build(&basis, &Vector::zeros(n1), tol);
        let delta = objective_at_witness.abs().max(1.0) * INITIAL_H_MARGIN;
        AugCtx { g_hat, v: p.v().clone(), proj_template, delta, test_column: n1 - 1 }
    }

    fn v_hat(&self, h: f64) -> Vector {
        let n = self.v.len();
        let mut out = Vector::zeros(n + 1);
        out.rows_mut(0, n).copy_from(&self.v);
        out[n] = -h;
        out
    }

    /// Builds the cone at height `h`, or `None` when the augmented bound
    /// falls inside the range (degenerate height).
    fn cone_at(&self, h: f64, tol: &ToleranceConfig) -> ConeAtHeight {
        let v_hat = self.v_hat(h);
        let v_f = &self.proj_template.p_f * &v_hat;
        let upsilon = v_hat - v_f;
        ConeAtHeight { projs: self.proj_template.with_upsilon(&upsilon, tol), upsilon }
    }

    fn height_is_degenerate(&self, cone: &ConeAtHeight, h: f64, tol: &ToleranceConfig) -> bool {
        inf_norm(&cone.upsilon) <= tol.zero_threshold(inf_norm(&self.v_hat(h)))
    }

    /// Recovers the optimal point from the optimal slack and validates it.
    fn recover_optimum(
        &self,
        h_o: f64,
        y_o: &Vector,
        tol: &ToleranceConfig,
    ) -> Result<Vector, LpError> {
        let rhs = self.v_hat(h_o) - y_o;
        let x_o = solve_consistent(&self.g_hat, &rhs, tol)?;
        let achieved = -(self.g_hat.row(self.test_column) * &x_o)[0];
        if (achieved - h_o).abs() > OPTIMUM_REL_TOL * (1.0 + h_o.abs()) {
            return Err(LpError::Breakdown {
                context: format!(
                    "recovered point reaches {achieved:.12e}, expected optimum {h_o:.12e}"
                ),
            });
        }
        let slack_thr = OPTIMUM_REL_TOL * (1.0 + inf_norm(&self.v));
        let n = self.v.len();
        for i in 0..n {
            let lhs = (self.g_hat.row(i) * &x_o)[0];
            if lhs > self.v[i] + slack_thr {
                return Err(LpError::Breakdown {
                    context: format!(
                        "recovered point violates constraint {i}: {lhs:.12e} > {:.12e}",
                        self.v[i]
                    ),
                });
            }
        }
        Ok(x_o)
    }

    /// Extreme points of the optimal face at height `h_o`.
    fn face_at(&self, h_o: f64, tol: &ToleranceConfig) -> Result<Vec<Vector>, LpError> {
        let cone = self.cone_at(h_o, tol);
        if self.height_is_degenerate(&cone, h_o, tol) {
            // The augmented bound is reachable exactly: the slack is zero and
            // the face collapses to the minimum-norm preimage.
            let x = solve_consistent(&self.g_hat, &self.v_hat(h_o), tol)?;
            return Ok(vec![x]);
        }
        let (gens, _) = contact_polytope_parts(&cone.upsilon, &cone.projs, tol)?;
        let mut extremes: Vec<Vector> = Vec::with_capacity(gens.len());
        for gen in &gens {
            let mut y = gen.w.clone();
            y[self.test_column] = 0.0;
            let x = self.recover_optimum(h_o, &y, tol)?;
            let thr = 1e-8 * (1.0 + inf_norm(&x));
            if !extremes.iter().any(|e| inf_norm(&(e - &x)) <= thr) {
                extremes.push(x);
            }
        }
        Ok(extremes)
    }
}

/// Zeroes the test component of a generator's calibrated point, yielding
/// the slack of the same primal point at the climbed height.
fn slack_at_top(gen: &CalibratedGenerator, test_column: usize) -> Vector {
    let mut y = gen.w.clone();
    y[test_column] = 0.0;
    y
}

enum Prep {
    Done(LpOutcome),
    Ready { ctx: AugCtx, h0: f64, rays_bootstrap: usize },
}

/// Screens both tangency layers, bootstraps feasibility, and positions the
/// starting height just below the witness objective value.
fn prepare(p: &LpProblem, tol: &ToleranceConfig) -> Result<Prep, LpError> {
    if let TangencyStatus::Violated { witness } = check_strict_tangency(p.g(), tol)? {
        return Ok(Prep::Done(LpOutcome {
            status: LpStatus::Unsupported { which: TangencyLayer::Original, witness },
            trace: None,
            rays_enumerated: 0,
        }));
    }

    let feas = solve_feasibility_inner(p.feasibility_problem(), tol, false, false)?;
    let rays_bootstrap = feas.rays_enumerated;
    let x_feas = match feas.witness() {
        Some(x) => x.clone(),
        None => {
            return Ok(Prep::Done(LpOutcome {
                status: LpStatus::Infeasible,
                trace: None,
                rays_enumerated: rays_bootstrap,
            }));
        }
    };

    let g_hat = augmented_matrix(p.g(), p.f());
    if let TangencyStatus::Violated { witness } = check_strict_tangency(&g_hat, tol)? {
        return Ok(Prep::Done(LpOutcome {
            status: LpStatus::Unsupported { which: TangencyLayer::Augmented, witness },
            trace: None,
            rays_enumerated: rays_bootstrap,
        }));
    }

    let objective_at_witness = p.f().dot(&x_feas);
    let ctx = AugCtx::new(p, objective_at_witness, tol);
    let h0 = objective_at_witness - ctx.delta;
    Ok(Prep::Ready { ctx, h0, rays_bootstrap })
}

/// Solves the program by one full enumeration of the augmented contact
/// polytope at the starting height.
pub fn solve_enumerative(p: &LpProblem, tol: &ToleranceConfig) -> Result<LpOutcome, LpError> {
    solve_enumerative_opts(p, tol, false)
}

/// As [`solve_enumerative`], optionally collecting the optimal face.
pub fn solve_enumerative_opts(
    p: &LpProblem,
    tol: &ToleranceConfig,
    want_face: bool,
) -> Result<LpOutcome, LpError> {
    let (ctx, mut h, mut rays_enumerated) = match prepare(p, tol)? {
        Prep::Done(out) => return Ok(out),
        Prep::Ready { ctx, h0, rays_bootstrap } => (ctx, h0, rays_bootstrap),
    };

    let mut restarted = false;
    let (gens, count) = loop {
        let cone = ctx.cone_at(h, tol);
        if ctx.height_is_degenerate(&cone, h, tol) {
            if restarted {
                return Err(LpError::DegenerateHeight);
            }
            restarted = true;
            h -= ctx.delta;
            continue;
        }
        break contact_polytope_parts(&cone.upsilon, &cone.projs, tol).map_err(|e| match e {
            FeasibilityError::InfeasibleProblem => LpError::Breakdown {
                context: "augmented system reported infeasible below a feasible height".into(),
            },
            other => LpError::from(other),
        })?;
    };
    rays_enumerated += count;

    let best = gens
        .iter()
        .max_by(|a, b| {
            a.w[ctx.test_column]
                .partial_cmp(&b.w[ctx.test_column])
                .expect("calibrated points are finite")
        })
        .expect("contact polytope has at least one extreme point");
    let h_m = best.w[ctx.test_column];
    let h_o = h + h_m;
    let y_o = slack_at_top(best, ctx.test_column);
    let x_o = ctx.recover_optimum(h_o, &y_o, tol)?;
    let optimal_extremes = if want_face { Some(ctx.face_at(h_o, tol)?) } else { None };

    Ok(LpOutcome {
        status: LpStatus::Optimal { h_o, x_o, y_o, optimal_extremes },
        trace: None,
        rays_enumerated,
    })
}

/// Solves the program by climbing one generator at a time.
pub fn solve_evolutive(p: &LpProblem, tol: &ToleranceConfig) -> Result<LpOutcome, LpError> {
    solve_evolutive_opts(p, tol, false)
}

/// As [`solve_evolutive`], optionally collecting the optimal face.
pub fn solve_evolutive_opts(
    p: &LpProblem,
    tol: &ToleranceConfig,
    want_face: bool,
) -> Result<LpOutcome, LpError> {
    let (ctx, h0, rays_bootstrap) = match prepare(p, tol)? {
        Prep::Done(out) => return Ok(out),
        Prep::Ready { ctx, h0, rays_bootstrap } => (ctx, h0, rays_bootstrap),
    };
    solve_evolutive_from(ctx, h0, rays_bootstrap, tol, want_face)
}

fn solve_evolutive_from(
    ctx: AugCtx,
    h0: f64,
    rays_bootstrap: usize,
    tol: &ToleranceConfig,
    want_face: bool,
) -> Result<LpOutcome, LpError> {
    let mut h = h0;
    let mut rays_enumerated = rays_bootstrap;
    let mut trace = EvolutiveTrace::default();
    let mut last_gen: Option<CalibratedGenerator> = None;
    let mut examined_total = 0usize;

    loop {
        let cone = ctx.cone_at(h, tol);
        if ctx.height_is_degenerate(&cone, h, tol) {
            // upsilon ~ 0 means the bound lies in the augmented range: some x
            // binds every constraint at this exact height. For a bounded
            // program that point is the optimum, so a height *climbed to* is
            // terminal. Only a degenerate *starting* height is retreated
            // from, once; the bound is then recomputed on the way back up.
            if !trace.steps.is_empty() {
                last_gen = None;
                break;
            }
            if trace.degenerate_restarts >= 1 {
                return Err(LpError::DegenerateHeight);
            }
            trace.degenerate_restarts += 1;
            h -= ctx.delta;
            last_gen = None;
            continue;
        }
        let rank_preserved = rank_drop_check(&cone.projs.t, tol);
        let cursor = RayCursor::default();
        match next_ray(&cone.projs.t, cursor, ctx.test_column, tol)? {
            Some((ray, after)) => {
                let gen = match calibrate(&ray, &cone.upsilon, &cone.projs, tol)? {
                    Calibration::Positive(g) => g,
                    Calibration::Negative { beta, .. } => {
                        return Err(LpError::Breakdown {
                            context: format!(
                                "positive-test ray calibrated negative (beta = {beta:.3e})"
                            ),
                        });
                    }
                };
                let dh = gen.w[ctx.test_column];
                if !(dh > 0.0) {
                    return Err(LpError::Breakdown {
                        context: format!("climb step is not positive ({dh:.3e})"),
                    });
                }
                rays_enumerated += 1;
                examined_total += after.position();
                trace.steps.push(EvolutiveStep {
                    h,
                    generator_last_component: dh,
                    rays_examined: after.position(),
                    rank_preserved,
                });
                if examined_total > EXAMINED_CAP {
                    return Err(LpError::IterationCap { examined: examined_total });
                }
                h += dh;
                last_gen = Some(gen);
            }
            // No ray tests positive: the current height is the optimum.
            None => break,
        }
    }

    let h_o = h;
    let y_o = match &last_gen {
        Some(gen) => slack_at_top(gen, ctx.test_column),
        None => {
            // The climb never moved (the starting height already was the
            // optimum); fall back to one full enumeration to read a slack.
            let cone = ctx.cone_at(h_o, tol);
            if ctx.height_is_degenerate(&cone, h_o, tol) {
                Vector::zeros(ctx.v.len() + 1)
            } else {
                let (gens, count) = contact_polytope_parts(&cone.upsilon, &cone.projs, tol)?;
                rays_enumerated += count;
                let best = gens
                    .iter()
                    .max_by(|a, b| {
                        a.w[ctx.test_column]
                            .partial_cmp(&b.w[ctx.test_column])
                            .expect("calibrated points are finite")
                    })
                    .expect("contact polytope has at least one extreme point");
                slack_at_top(best, ctx.test_column)
            }
        }
    };
    let x_o = ctx.recover_optimum(h_o, &y_o, tol)?;
    let optimal_extremes = if want_face { Some(ctx.face_at(h_o, tol)?) } else { None };

    Ok(LpOutcome {
        status: LpStatus::Optimal { h_o, x_o, y_o, optimal_extremes },
        trace: Some(trace),
        rays_enumerated,
    })
}

/// Extreme points of the optimal face `{x : G x <= v, f·x = h_o}` for a
/// program whose optimum `h_o` is already known.
pub fn optimal_face(
    p: &LpProblem,
    h_o: f64,
    tol: &ToleranceConfig,
) -> Result<Vec<Vector>, LpError> {
    let ctx = AugCtx::new(p, h_o, tol);
    ctx.face_at(h_o, tol)
}
