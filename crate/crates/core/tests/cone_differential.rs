//! Differential check of the two ray enumerators.
//!
//! The incremental double-description search and the exhaustive
//! support-subset search answer the same question — the extreme rays of
//! `N(T) ∩ P` — by unrelated algorithms, so their outputs are compared as
//! normalized sets across a spread of cone matrices: generic projector
//! complements, the exact shapes the feasibility pipeline produces, and
//! rank-deficient variants with repeated columns.

mod common;

use conelp::{
    brute_force_rays, decompose_bound, enumerate_rays, inf_norm, projector_onto_range,
    projector_onto_span, FeasibilityProblem, Matrix, Ray, ToleranceConfig, Vector,
};
use rand::Rng;

const MATCH_TOL: f64 = 1e-7;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn assert_same_ray_set(incremental: &[Ray], exhaustive: &[Ray], label: &str) {
    assert_eq!(
        incremental.len(),
        exhaustive.len(),
        "{label}: incremental found {} rays, exhaustive found {}",
        incremental.len(),
        exhaustive.len()
    );
    for ray in incremental {
        let matched = exhaustive
            .iter()
            .any(|other| inf_norm(&(&ray.y - &other.y)) <= MATCH_TOL);
        assert!(matched, "{label}: ray {:?} has no exhaustive partner", ray.y);
    }
}

fn check_matrix(t: &Matrix, label: &str) {
    let incremental = enumerate_rays(t, &tol()).expect("incremental enumeration");
    let exhaustive = brute_force_rays(t, &tol()).expect("exhaustive enumeration");
    assert_same_ray_set(&incremental, &exhaustive, label);
    // Every reported ray must actually lie in the cone.
    for ray in &incremental {
        assert!(inf_norm(&(t * &ray.y)) <= 1e-7, "{label}: ray escapes N(T)");
        assert!(ray.y.iter().all(|&c| c >= 0.0), "{label}: ray escapes the orthant");
    }
}

/// Complement of a projector onto a span that contains a strictly positive
/// direction, so the cone is nonempty with high probability.
fn projector_complement(rng: &mut rand::rngs::StdRng, n: usize, dim: usize) -> Matrix {
    let mut span = Matrix::zeros(n, dim);
    let positive = Vector::from_fn(n, |_, _| rng.random_range(0.2..1.0));
    span.set_column(0, &positive);
    for j in 1..dim {
        let col = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        span.set_column(j, &col);
    }
    Matrix::identity(n, n) - projector_onto_range(&span, &tol())
}

#[test]
fn enumerators_agree_on_projector_complements() {
    let mut rng = common::rng(0x5eed_c0de);
    for n in 3..=10 {
        for dim in 1..n.min(6) {
            for round in 0..6 {
                let t = projector_complement(&mut rng, n, dim);
                check_matrix(&t, &format!("n={n} dim={dim} round={round}"));
            }
        }
    }
}

#[test]
fn enumerators_agree_on_pipeline_shaped_cones() {
    // The feasibility pipeline hands the enumerator T = (I - P_F) - P_υ for
    // a strictly tangent G and the orthogonal remainder υ of the bound;
    // reproduce exactly that shape, zero slacks and all.
    let mut rng = common::rng(0xfeed_face);
    let mut nontrivial = 0usize;
    for round in 0..120 {
        let n = rng.random_range(3..=9);
        let m = rng.random_range(1..n);
        let g = common::tangent_matrix(&mut rng, n, m);
        let v = if round % 2 == 0 {
            common::feasible_bound(&mut rng, &g)
        } else {
            common::arbitrary_bound(&mut rng, n)
        };
        let problem = FeasibilityProblem::new(g, v).expect("valid instance");
        let parts = decompose_bound(&problem, &tol()).expect("decomposition");
        if inf_norm(&parts.upsilon) <= 1e-9 {
            continue;
        }
        let p_f = projector_onto_range(problem.g(), &tol());
        let p_v = projector_onto_span(&parts.upsilon, &tol());
        let n_rows = problem.rows();
        let t = (Matrix::identity(n_rows, n_rows) - p_f) - p_v;
        let rays = enumerate_rays(&t, &tol()).expect("incremental enumeration");
        if !rays.is_empty() {
            nontrivial += 1;
        }
        check_matrix(&t, &format!("pipeline round={round} n={n} m={m}"));
    }
    assert!(nontrivial >= 30, "only {nontrivial} pipeline cones had rays");
}

#[test]
fn enumerators_agree_on_rank_deficient_spans() {
    // Repeated and rescaled columns force the rank decisions to do real work.
    let mut rng = common::rng(0xdead_10cc);
    for round in 0..40 {
        let n = rng.random_range(4..=8);
        let dim = rng.random_range(2..n.min(5));
        let mut span = Matrix::zeros(n, dim + 2);
        let positive = Vector::from_fn(n, |_, _| rng.random_range(0.2..1.0));
        span.set_column(0, &positive);
        for j in 1..dim {
            let col = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            span.set_column(j, &col);
        }
        // Two duplicates of earlier columns, one rescaled.
        span.set_column(dim, &(span.column(0) * 2.5));
        span.set_column(dim + 1, &(span.column(dim - 1) * -1.0));
        let t = Matrix::identity(n, n) - projector_onto_range(&span, &tol());
        check_matrix(&t, &format!("rank-deficient round={round} n={n} dim={dim}"));
    }
}

#[test]
fn axis_aligned_cones_recover_the_axes() {
    // N(T) = span of the first k axes: the extreme rays are exactly those
    // axes, a case where the answer is known in closed form.
    for n in 2..=8 {
        for k in 1..=n {
            let t = Matrix::from_fn(n, n, |i, j| if i == j && i >= k { 1.0 } else { 0.0 });
            let rays = enumerate_rays(&t, &tol()).expect("axis cone");
            assert_eq!(rays.len(), k, "n={n} k={k}");
            for ray in &rays {
                let support_ok = ray.support.len() == 1 && ray.support[0] < k;
                assert!(support_ok, "n={n} k={k}: unexpected ray {:?}", ray.y);
                assert!((ray.y[ray.support[0]] - 1.0).abs() <= 1e-12);
            }
            let exhaustive = brute_force_rays(&t, &tol()).expect("axis cone brute");
            assert_same_ray_set(&rays, &exhaustive, &format!("axes n={n} k={k}"));
        }
    }
}
