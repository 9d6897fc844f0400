//! The two LP drivers against each other and against the vertex oracle.
//!
//! Enumerative and evolutive runs must land on the same optimum, that
//! optimum must match the value the oracle reads off the basic feasible
//! points, and the structural claims — monotone climb, rank preservation,
//! no wasted enumeration — must hold on every instance, degenerate faces
//! included.

mod common;

use conelp::{
    hull_member, inf_norm, optimal_face, oracle_solve, solve_enumerative, solve_evolutive,
    solve_evolutive_opts, LpOutcome, LpStatus, OracleVerdict, ToleranceConfig, Vector,
};
use rand::Rng;

const VALUE_TOL: f64 = 1e-6;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn optimum(out: &LpOutcome, label: &str) -> (f64, Vector, Vector) {
    match &out.status {
        LpStatus::Optimal { h_o, x_o, y_o, .. } => (*h_o, x_o.clone(), y_o.clone()),
        other => panic!("{label}: expected an optimum, got {other:?}"),
    }
}

#[test]
fn drivers_and_oracle_agree_on_random_bounded_programs() {
    let mut solved = 0usize;
    let mut seed = 0u64;
    while solved < 160 {
        seed += 1;
        let n = 3 + (seed as usize) % 10; // rows 3..=12
        let m = 1 + (seed as usize / 7) % n.min(7).saturating_sub(1).max(1);
        let Some(p) = common::bounded_lp(seed, n, m) else { continue };
        let label = format!("seed={seed} n={n} m={m}");

        let by_enum = solve_enumerative(&p, &tol())
            .unwrap_or_else(|e| panic!("{label}: enumerative failed: {e}"));
        let by_evo = solve_evolutive(&p, &tol())
            .unwrap_or_else(|e| panic!("{label}: evolutive failed: {e}"));
        let (h_enum, x_enum, y_enum) = optimum(&by_enum, &label);
        let (h_evo, x_evo, _) = optimum(&by_evo, &label);

        // Drivers agree on the value and on the point.
        assert!(
            (h_enum - h_evo).abs() <= VALUE_TOL * (1.0 + h_enum.abs()),
            "{label}: enum h_o={h_enum} vs evo h_o={h_evo}"
        );
        assert!(
            inf_norm(&(&x_enum - &x_evo)) <= 1e-5 * (1.0 + inf_norm(&x_enum)),
            "{label}: optimal points drift apart"
        );

        // The oracle agrees on the value.
        match oracle_solve(p.g(), p.v(), p.f(), &tol()).expect("within oracle caps") {
            OracleVerdict::Optimal { value, .. } => assert!(
                (value - h_enum).abs() <= VALUE_TOL * (1.0 + value.abs()),
                "{label}: oracle value {value} vs solver {h_enum}"
            ),
            other => panic!("{label}: oracle disagrees on solvability: {other:?}"),
        }

        // The optimum satisfies its own program: f·x = h_o and G x <= v.
        assert!(
            (p.f().dot(&x_enum) - h_enum).abs() <= 1e-6 * (1.0 + h_enum.abs()),
            "{label}: reported point misses the reported value"
        );
        let slack = p.v() - p.g() * &x_enum;
        let floor = -1e-7 * (1.0 + inf_norm(p.v()));
        assert!(slack.iter().all(|&s| s >= floor), "{label}: optimum infeasible");
        // The augmented slack carried alongside must agree and close the
        // objective row.
        assert!(y_enum[y_enum.len() - 1].abs() <= 1e-7, "{label}: open objective row");

        // The climb can never enumerate more rays than one full sweep.
        assert!(
            by_evo.rays_enumerated <= by_enum.rays_enumerated,
            "{label}: climb enumerated more rays ({}) than the sweep ({})",
            by_evo.rays_enumerated,
            by_enum.rays_enumerated
        );

        // Trace sanity: strictly increasing heights, positive climb at every
        // step, rank preserved while below the optimum.
        let trace = by_evo.trace.as_ref().expect("evolutive runs carry a trace");
        let mut height = f64::NEG_INFINITY;
        for step in &trace.steps {
            assert!(step.h > height, "{label}: non-monotone climb");
            height = step.h;
            assert!(step.generator_last_component > 0.0, "{label}: non-climbing step");
            assert!(step.rank_preserved, "{label}: rank dropped mid-climb at h={}", step.h);
        }

        solved += 1;
    }
}

#[test]
fn infeasible_programs_agree_with_the_oracle() {
    let mut rng = common::rng(0xdeaf_beef);
    let mut infeasible = 0usize;
    for round in 0..250 {
        let n = rng.random_range(3..=9);
        let m = rng.random_range(1..n.min(6));
        let g = common::tangent_matrix(&mut rng, n, m);
        let lambda = Vector::from_fn(n, |_, _| rng.random_range(0.5..1.5));
        let f = g.transpose() * lambda;
        if inf_norm(&f) < 1e-6 {
            continue;
        }
        let v = common::arbitrary_bound(&mut rng, n);
        let Ok(p) = conelp::LpProblem::new(g, v, f) else { continue };
        let label = format!("round={round} n={n} m={m}");

        let reference = oracle_solve(p.g(), p.v(), p.f(), &tol()).expect("within oracle caps");
        if !matches!(reference, OracleVerdict::Infeasible) {
            continue;
        }
        infeasible += 1;
        for out in [
            solve_enumerative(&p, &tol()).unwrap_or_else(|e| panic!("{label}: enum: {e}")),
            solve_evolutive(&p, &tol()).unwrap_or_else(|e| panic!("{label}: evo: {e}")),
        ] {
            assert_eq!(out.status, LpStatus::Infeasible, "{label}: missed infeasibility");
        }
    }
    assert!(infeasible >= 40, "only {infeasible} infeasible draws");
}

#[test]
fn optimal_face_contains_every_oracle_argmax() {
    // Tie the objective to one row of G so the whole binding facet is
    // optimal; every argmax vertex the oracle finds must then lie in the
    // convex hull of the face the solver reports.
    let mut rng = common::rng(0xface_f00d);
    let mut multi = 0usize;
    for round in 0..120 {
        if multi >= 25 {
            break;
        }
        let n = rng.random_range(3..=8);
        let m = rng.random_range(2..=n.min(5) - 1);
        let g = common::tangent_matrix(&mut rng, n, m);
        // Positive combination concentrated on one row keeps the program
        // bounded while making that row's facet the optimal face.
        let mut lambda = Vector::zeros(n);
        let pick = rng.random_range(0..n);
        lambda[pick] = 1.0;
        let f = g.transpose() * &lambda;
        if inf_norm(&f) < 1e-6 {
            continue;
        }
        let x0 = Vector::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
        let mut slack = common::degenerate_slack(&mut rng, n, 0.0);
        slack[pick] = 0.0; // the objective row binds at x0
        let v = &g * &x0 + slack;
        let Ok(p) = conelp::LpProblem::new(g, v, f) else { continue };
        let label = format!("round={round} n={n} m={m} pick={pick}");

        let out = solve_evolutive_opts(&p, &tol(), true)
            .unwrap_or_else(|e| panic!("{label}: solver failed: {e}"));
        let (h_o, _, _) = optimum(&out, &label);
        let face = match &out.status {
            LpStatus::Optimal { optimal_extremes: Some(face), .. } => face.clone(),
            other => panic!("{label}: face missing: {other:?}"),
        };
        assert!(!face.is_empty(), "{label}: empty optimal face");

        // Cross-check against the standalone entry point.
        let standalone = optimal_face(&p, h_o, &tol())
            .unwrap_or_else(|e| panic!("{label}: standalone face failed: {e}"));
        assert_eq!(face.len(), standalone.len(), "{label}: face entry points disagree");

        let argmax = match oracle_solve(p.g(), p.v(), p.f(), &tol()).expect("within caps") {
            OracleVerdict::Optimal { value, argmax_vertices } => {
                assert!(
                    (value - h_o).abs() <= VALUE_TOL * (1.0 + value.abs()),
                    "{label}: oracle value {value} vs solver {h_o}"
                );
                argmax_vertices
            }
            other => panic!("{label}: oracle disagrees: {other:?}"),
        };
        if argmax.len() >= 2 {
            multi += 1;
        }
        for vertex in &argmax {
            assert!(
                hull_member(vertex, &face, 1e-6),
                "{label}: oracle argmax {vertex:?} outside the reported face {face:?}"
            );
        }
    }
    assert!(multi >= 10, "only {multi} rounds had a non-unique optimum");
}
