//! Subcommand bodies: each takes a validated problem and produces a result
//! document plus the exit code implied by its status.
//!
//! The functions here are pure with respect to the filesystem — reading
//! input and writing output stay in `main` — so integration tests can drive
//! them in-process and the binary remains a thin argument parser.

use std::time::Instant;

use conelp::{
    contact_polytope, optimal_face, oracle_solve, relative_interior_point, solve_consistent,
    solve_enumerative, solve_evolutive_opts, solve_feasibility, vertex_enumerate,
    FeasibilityError, FeasibilityProblem, FeasibilityStatus, InfeasibilityReason, LpError,
    LpProblem, LpStatus, OracleVerdict, TangencyLayer, ToleranceConfig, Vector,
};

use crate::files::{FileError, ProblemFile, ResultFile, RunStats, Status, TraceEntry};

/// Solver selection for `solve`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    /// One full enumeration of the augmented contact polytope.
    Enum,
    /// Generator-at-a-time climb (the default).
    Evo,
}

fn blank_result(status: Status) -> ResultFile {
    ResultFile {
        status,
        h_o: None,
        x: None,
        y: None,
        generators: None,
        relative_interior: None,
        trace: None,
        message: None,
        stats: RunStats { rays_enumerated: 0, steps: 0, wall_ms: 0.0 },
    }
}

fn vec_of(v: &Vector) -> Vec<f64> {
    v.iter().copied().collect()
}

fn vecs_of(vs: &[Vector]) -> Vec<Vec<f64>> {
    vs.iter().map(vec_of).collect()
}

/// Decides `G x <= v` and reports a witness; with `all`, additionally the
/// full set of contact-polytope extreme points and a relative-interior
/// point (both in slack space), with `x` moved to the interior pullback.
pub fn cmd_feas(problem: &ProblemFile, all: bool, flag_tol: Option<f64>) -> Result<ResultFile, FileError> {
    let tol = problem.tolerance_config(flag_tol)?;
    let feas = FeasibilityProblem::new(problem.matrix(), problem.bound())
        .map_err(|e| FileError::Invalid { field: "G".into(), message: e.to_string() })?;

    let start = Instant::now();
    let outcome = solve_feasibility(&feas, &tol, all);
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut out = match outcome {
        Ok(res) => {
            let mut out = match &res.status {
                FeasibilityStatus::Infeasible { reason } => {
                    let mut out = blank_result(Status::Infeasible);
                    out.message = Some(match reason {
                        InfeasibilityReason::StrictlyTangentFe => {
                            "the extended cone meets the orthant only at the origin".into()
                        }
                        InfeasibilityReason::NegativeBeta { beta, .. } => {
                            format!("a generator calibrates negatively (beta = {beta:.6e})")
                        }
                    });
                    out
                }
                _ => {
                    let mut out = blank_result(Status::Feasible);
                    out.x = res.witness().map(vec_of);
                    if let FeasibilityStatus::Feasible { generators, .. } = &res.status {
                        if all {
                            out.generators =
                                Some(generators.iter().map(|g| vec_of(&g.w)).collect());
                        }
                    }
                    out
                }
            };
            out.stats.rays_enumerated = res.rays_enumerated;
            out
        }
        Err(FeasibilityError::NotStrictlyTangent { witness }) => {
            let mut out = blank_result(Status::Unsupported);
            out.message =
                Some("R(G) meets the nonnegative orthant beyond the origin".into());
            out.generators = Some(vec![vec_of(&witness.y)]);
            out
        }
        Err(e) => {
            let mut out = blank_result(Status::Error);
            out.message = Some(e.to_string());
            out
        }
    };
    out.stats.wall_ms = wall_ms;

    // The interior point comes from a second, full enumeration; trivially
    // feasible instances with a degenerate remainder have no cone to
    // enumerate, which is not an error for the verdict already computed.
    if all && out.status == Status::Feasible {
        match contact_polytope(&feas, &tol) {
            Ok(cp) => {
                let interior = relative_interior_point(&cp);
                let x = solve_consistent(feas.g(), &(feas.v() - &interior), &tol)
                    .map_err(|e| FileError::Invalid { field: "G".into(), message: e.to_string() })?;
                out.generators = Some(vecs_of(&cp.extreme_points));
                out.relative_interior = Some(vec_of(&interior));
                out.x = Some(vec_of(&x));
            }
            Err(FeasibilityError::DegenerateUpsilon) => {
                out.message = Some(
                    "bound lies in R(G): the contact polytope degenerates to the witness slack"
                        .into(),
                );
            }
            Err(e) => {
                return Ok(ResultFile {
                    message: Some(e.to_string()),
                    stats: out.stats,
                    ..blank_result(Status::Error)
                });
            }
        }
    }
    Ok(out)
}

/// Maximizes `f·x` over `G x <= v` with the selected driver.
pub fn cmd_solve(
    problem: &ProblemFile,
    mode: SolveMode,
    all_solutions: bool,
    want_trace: bool,
    flag_tol: Option<f64>,
) -> Result<ResultFile, FileError> {
    let tol = problem.tolerance_config(flag_tol)?;
    let f = problem
        .objective()
        .ok_or_else(|| FileError::Invalid { field: "f".into(), message: "missing objective (required by solve)".into() })?;
    let lp = LpProblem::new(problem.matrix(), problem.bound(), f)
        .map_err(|e| FileError::Invalid { field: "f".into(), message: e.to_string() })?;

    let start = Instant::now();
    let outcome = match mode {
        SolveMode::Enum => solve_enumerative(&lp, &tol),
        SolveMode::Evo => solve_evolutive_opts(&lp, &tol, all_solutions),
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut out = match outcome {
        Ok(res) => {
            let mut out = match res.status {
                LpStatus::Optimal { h_o, x_o, y_o, optimal_extremes } => {
                    let mut out = blank_result(Status::Optimal);
                    out.h_o = Some(h_o);
                    out.x = Some(vec_of(&x_o));
                    out.y = Some(vec_of(&y_o));
                    if all_solutions {
                        let face = match optimal_extremes {
                            Some(face) => face,
                            // The enumerative driver does not collect the
                            // face inline; compute it at the optimum.
                            None => optimal_face(&lp, h_o, &tol).map_err(|e| {
                                FileError::Invalid { field: "f".into(), message: e.to_string() }
                            })?,
                        };
                        out.generators = Some(vecs_of(&face));
                    }
                    out
                }
                LpStatus::Infeasible => blank_result(Status::Infeasible),
                LpStatus::Unsupported { which, witness } => {
                    let mut out = blank_result(Status::Unsupported);
                    out.message = Some(match which {
                        TangencyLayer::Original => {
                            "R(G) meets the nonnegative orthant beyond the origin".into()
                        }
                        TangencyLayer::Augmented => {
                            "augmented range meets the orthant: objective is not dominated by the rows of G"
                                .into()
                        }
                    });
                    out.generators = Some(vec![vec_of(&witness.y)]);
                    out
                }
            };
            if let Some(trace) = res.trace {
                out.stats.steps = trace.steps.len();
                if want_trace {
                    out.trace = Some(
                        trace
                            .steps
                            .iter()
                            .map(|s| TraceEntry {
                                h: s.h,
                                last_component: s.generator_last_component,
                            })
                            .collect(),
                    );
                }
            }
            out.stats.rays_enumerated = res.rays_enumerated;
            out
        }
        Err(LpError::Feasibility(FeasibilityError::NotStrictlyTangent { witness })) => {
            let mut out = blank_result(Status::Unsupported);
            out.message =
                Some("R(G) meets the nonnegative orthant beyond the origin".into());
            out.generators = Some(vec![vec_of(&witness.y)]);
            out
        }
        Err(e) => {
            let mut out = blank_result(Status::Error);
            out.message = Some(e.to_string());
            out
        }
    };
    out.stats.wall_ms = wall_ms;
    Ok(out)
}

/// Reference answers from the brute-force vertex oracle, in the same
/// document shape as the production solvers.
pub fn cmd_oracle(problem: &ProblemFile, flag_tol: Option<f64>) -> Result<ResultFile, FileError> {
    let tol = problem.tolerance_config(flag_tol)?;
    let g = problem.matrix();
    let v = problem.bound();

    let start = Instant::now();
    let outcome = match problem.objective() {
        Some(f) => oracle_solve(&g, &v, &f, &tol).map(Some),
        None => Ok(None),
    };
    let mut out = match outcome {
        Ok(Some(OracleVerdict::Infeasible)) => blank_result(Status::Infeasible),
        Ok(Some(OracleVerdict::Unbounded)) => {
            let mut out = blank_result(Status::Unsupported);
            out.message =
                Some("objective is unbounded over the feasible set".into());
            out
        }
        Ok(Some(OracleVerdict::Optimal { value, argmax_vertices })) => {
            let mut out = blank_result(Status::Optimal);
            out.h_o = Some(value);
            out.x = argmax_vertices.first().map(vec_of);
            out.generators = Some(vecs_of(&argmax_vertices));
            out
        }
        Ok(None) => match vertex_enumerate(&g, &v, &tol) {
            Ok(vertices) if vertices.is_empty() => blank_result(Status::Infeasible),
            Ok(vertices) => {
                let mut out = blank_result(Status::Feasible);
                out.x = vertices.first().map(vec_of);
                out.generators = Some(vecs_of(&vertices));
                out
            }
            Err(e) => {
                let mut out = blank_result(Status::Error);
                out.message = Some(e.to_string());
                out
            }
        },
        Err(e) => {
            let mut out = blank_result(Status::Error);
            out.message = Some(e.to_string());
            out
        }
    };
    out.stats.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(out)
}

/// Effective tolerances for standalone use (bench has no problem file in
/// hand when it starts).
pub fn flag_tolerances(flag_tol: Option<f64>) -> Result<ToleranceConfig, FileError> {
    let defaults = ToleranceConfig::default();
    match flag_tol {
        None => Ok(defaults),
        Some(zero) => ToleranceConfig::new(zero, defaults.rank_tol, defaults.ratio_tol)
            .map_err(|e| FileError::Invalid { field: "tol".into(), message: e.to_string() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, GenKind};

    fn interval(f: Option<Vec<f64>>) -> ProblemFile {
        ProblemFile {
            name: "interval".into(),
            g: vec![vec![1.0], vec![-1.0]],
            v: vec![2.0, -1.0],
            f,
            tolerances: None,
        }
    }

    #[test]
    fn feas_reports_the_interval_witness() {
        let out = cmd_feas(&interval(None), false, None).unwrap();
        assert_eq!(out.status, Status::Feasible);
        assert_eq!(out.status.exit_code(), 0);
        let x = out.x.expect("feasible runs carry a witness");
        assert!((x[0] - 1.5).abs() <= 1e-9, "witness {x:?}");
        assert!(out.generators.is_none());
    }

    #[test]
    fn feas_all_adds_generators_and_interior() {
        let out = cmd_feas(&interval(None), true, None).unwrap();
        assert_eq!(out.status, Status::Feasible);
        let gens = out.generators.expect("--all collects generators");
        assert_eq!(gens.len(), 2);
        let interior = out.relative_interior.expect("--all collects the interior point");
        assert!((interior[0] - 0.5).abs() <= 1e-9 && (interior[1] - 0.5).abs() <= 1e-9);
        let x = out.x.expect("witness present");
        assert!((x[0] - 1.5).abs() <= 1e-9);
    }

    #[test]
    fn feas_flags_infeasible_bounds() {
        let mut problem = interval(None);
        problem.v = vec![0.0, -1.0];
        let out = cmd_feas(&problem, false, None).unwrap();
        assert_eq!(out.status, Status::Infeasible);
        assert_eq!(out.status.exit_code(), 1);
    }

    #[test]
    fn feas_flags_tangency_violations_as_unsupported() {
        let mut problem = interval(None);
        problem.g = vec![vec![1.0], vec![1.0]];
        problem.v = vec![1.0, 1.0];
        let out = cmd_feas(&problem, false, None).unwrap();
        assert_eq!(out.status, Status::Unsupported);
        assert_eq!(out.status.exit_code(), 2);
        assert_eq!(out.generators.expect("witness ray").len(), 1);
    }

    #[test]
    fn solve_agrees_across_modes_on_the_interval() {
        for mode in [SolveMode::Enum, SolveMode::Evo] {
            let out = cmd_solve(&interval(Some(vec![1.0])), mode, false, false, None).unwrap();
            assert_eq!(out.status, Status::Optimal, "mode {mode:?}");
            assert!((out.h_o.unwrap() - 2.0).abs() <= 1e-9);
            assert!((out.x.unwrap()[0] - 2.0).abs() <= 1e-8);
            let y = out.y.unwrap();
            assert!(y.last().unwrap().abs() <= 1e-9, "objective row must close");
        }
    }

    #[test]
    fn solve_without_objective_is_malformed() {
        let err = cmd_solve(&interval(None), SolveMode::Evo, false, false, None).unwrap_err();
        assert!(err.to_string().contains("`f`"), "diagnostic must name f: {err}");
    }

    #[test]
    fn solve_trace_heights_increase_strictly() {
        let problem = generate(11, 6, 3, GenKind::Lp).unwrap();
        let out = cmd_solve(&problem, SolveMode::Evo, false, true, None).unwrap();
        assert_eq!(out.status, Status::Optimal);
        let trace = out.trace.expect("--trace embeds the climb");
        assert_eq!(out.stats.steps, trace.len());
        for pair in trace.windows(2) {
            assert!(pair[1].h > pair[0].h, "heights must increase: {trace:?}");
        }
        for entry in &trace {
            assert!(entry.last_component > 0.0);
        }
    }

    #[test]
    fn solve_all_solutions_collects_the_face() {
        // max x1 over the unit square: the whole right edge is optimal.
        let problem = ProblemFile {
            name: "square".into(),
            g: vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
            v: vec![1.0, 1.0, 0.0, 0.0],
            f: Some(vec![1.0, 0.0]),
            tolerances: None,
        };
        for mode in [SolveMode::Enum, SolveMode::Evo] {
            let out = cmd_solve(&problem, mode, true, false, None).unwrap();
            let face = out.generators.expect("--all-solutions collects the face");
            assert_eq!(face.len(), 2, "mode {mode:?}: {face:?}");
        }
    }

    #[test]
    fn oracle_matches_the_solvers_on_the_interval() {
        let out = cmd_oracle(&interval(Some(vec![1.0])), None).unwrap();
        assert_eq!(out.status, Status::Optimal);
        assert!((out.h_o.unwrap() - 2.0).abs() <= 1e-12);

        let out = cmd_oracle(&interval(None), None).unwrap();
        assert_eq!(out.status, Status::Feasible);
        assert_eq!(out.generators.expect("vertices").len(), 2);

        let mut infeasible = interval(None);
        infeasible.v = vec![0.0, -1.0];
        let out = cmd_oracle(&infeasible, None).unwrap();
        assert_eq!(out.status, Status::Infeasible);
    }

    #[test]
    fn oracle_reports_unbounded_objectives_as_unsupported() {
        let problem = ProblemFile {
            name: "halfline".into(),
            g: vec![vec![-1.0], vec![-2.0]],
            v: vec![0.0, 1.0],
            f: Some(vec![1.0]),
            tolerances: None,
        };
        let out = cmd_oracle(&problem, None).unwrap();
        assert_eq!(out.status, Status::Unsupported);
        assert_eq!(out.status.exit_code(), 2);
    }
}
