//! Feasibility and linear programming through extreme-ray enumeration.
//!
//! The solvers in this crate decide systems `G x <= v` — and maximize
//! linear objectives over them — by working with slack vectors `y = v - G x`
//! instead of points. Feasibility becomes the question of whether an affine
//! slice of the nonnegative orthant is nonempty, which reduces to
//! enumerating the extreme rays of a pointed cone cut out by projectors
//! ([`cone_gen`]), calibrating each ray against the bound ([`feasibility`]),
//! and, for programs, climbing a height parameter until the objective row
//! leaves no room ([`lp_solver`]).
//!
//! Layout:
//!
//! * [`tolerance`] — the shared numerical thresholds.
//! * [`linalg`] — projectors, rank decisions, consistent solves.
//! * [`cone_gen`] — extreme rays of `N(T) ∩ P` by double description.
//! * [`feasibility`] — bound decomposition, calibration, contact polytopes.
//! * [`lp_solver`] — enumerative and evolutive LP drivers.
//! * [`oracle`] — small brute-force reference solvers for cross-checking.
//!
//! The hot loops (ray combination, subset enumeration) are data-parallel
//! via rayon when the default `parallel` feature is enabled; sequential
//! variants (`*_seq`) are always compiled for comparison.

pub mod cone_gen;
pub mod feasibility;
pub mod linalg;
pub mod lp_solver;
pub mod oracle;
mod par;
pub mod tolerance;

pub use cone_gen::{brute_force_rays, enumerate_rays, next_ray, ConeError, Ray, RayCursor};
pub use feasibility::{
    calibrate, check_strict_tangency, contact_polytope, decompose_bound, relative_interior_point,
    solve_feasibility, BoundDecomposition, CalibratedGenerator, Calibration, ContactPolytope,
    FeasibilityError, FeasibilityOutcome, FeasibilityProblem, FeasibilityStatus,
    InfeasibilityReason, InvalidProblem, TangencyStatus, TrivialReason,
};
pub use linalg::{
    inf_norm, orthonormal_range_basis, projector_onto_range, projector_onto_span,
    solve_consistent, LinalgError, Matrix, ProjectorSet, Vector,
};
pub use lp_solver::{
    augment, optimal_face, solve_enumerative, solve_enumerative_opts, solve_evolutive,
    solve_evolutive_opts, EvolutiveStep, EvolutiveTrace, LpError, LpOutcome, LpProblem, LpStatus,
    TangencyLayer,
};
pub use oracle::{
    hull_member, oracle_feasible, oracle_solve, vertex_enumerate, OracleError, OracleVerdict,
    MAX_ORACLE_COLS, MAX_ORACLE_ROWS,
};
pub use tolerance::{InvalidTolerance, ToleranceConfig};
