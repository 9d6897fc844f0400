//! Shared random-instance constructions for the integration suites.
//!
//! Everything here stays inside the solvable class: constraint matrices are
//! squeezed through a projector whose kernel direction is strictly positive,
//! which pins `R(G)` against the nonnegative orthant at the origin only, and
//! objectives are positive combinations of the rows, which keeps programs
//! bounded. Slacks carry a controlled fraction of exact zeros so degenerate
//! faces (points, edges through several binding rows) show up routinely.
#![allow(dead_code)]

use conelp::{inf_norm, LpProblem, Matrix, Vector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Matrix whose range is strictly tangent to the orthant: random columns
/// projected against a strictly positive direction.
pub fn tangent_matrix(rng: &mut StdRng, n: usize, m: usize) -> Matrix {
    let nu = Vector::from_fn(n, |_, _| rng.random_range(0.5..1.5));
    let proj = Matrix::identity(n, n) - &nu * nu.transpose() / nu.dot(&nu);
    let raw = Matrix::from_fn(n, m, |_, _| rng.random_range(-1.0..1.0));
    proj * raw
}

/// Nonnegative slack where each entry is exactly zero with probability
/// `zero_prob` — the source of degenerate test geometry.
pub fn degenerate_slack(rng: &mut StdRng, n: usize, zero_prob: f64) -> Vector {
    Vector::from_fn(n, |_, _| {
        if rng.random_range(0.0..1.0) < zero_prob {
            0.0
        } else {
            rng.random_range(0.0..1.0)
        }
    })
}

/// Feasible-by-construction bound `v = G x* + s` with `s >= 0`.
pub fn feasible_bound(rng: &mut StdRng, g: &Matrix) -> Vector {
    let x0 = Vector::from_fn(g.ncols(), |_, _| rng.random_range(-1.0..1.0));
    let slack = degenerate_slack(rng, g.nrows(), 0.25);
    g * x0 + slack
}

/// Unconstrained random bound: feasible or infeasible with roughly even odds.
pub fn arbitrary_bound(rng: &mut StdRng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
}

/// Random bounded program: strictly tangent constraints, objective drawn as
/// a positive combination of the rows (so the augmented system is strictly
/// tangent too), bound feasible by construction. `None` when the draw
/// degenerates to a numerically zero objective.
pub fn bounded_lp(seed: u64, n: usize, m: usize) -> Option<LpProblem> {
    let mut rng = rng(seed);
    let g = tangent_matrix(&mut rng, n, m);
    let lambda = Vector::from_fn(n, |_, _| rng.random_range(0.5..1.5));
    let f = g.transpose() * lambda;
    if inf_norm(&f) < 1e-6 {
        return None;
    }
    let v = feasible_bound(&mut rng, &g);
    LpProblem::new(g, v, f).ok()
}
