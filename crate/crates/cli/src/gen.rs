//! Seeded instance generation inside the solvable class.
//!
//! Strict tangency is manufactured rather than tested for: a strictly
//! positive normal vector is drawn and the columns of `G` are projected onto
//! its orthogonal complement, so any nonnegative combination of slack
//! directions keeps a positive inner product with the normal and `R(G)` can
//! meet the orthant only at the origin. For LP instances a second strictly
//! positive normal in one more dimension plays the same role for the
//! augmented matrix, which also keeps the objective bounded. Instances are
//! deterministic per seed (the stream cipher behind the RNG is stable across
//! platforms and releases).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use conelp::{inf_norm, Matrix, Vector};

use crate::files::ProblemFile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("field `n`: must be at least 2, got {0}")]
    RowsTooSmall(usize),
    #[error("field `m`: must satisfy 1 <= m < n, got m = {m} with n = {n}")]
    ColsOutOfRange { n: usize, m: usize },
}

/// Which instance family to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    /// Feasible by construction: `v = G x0 + s` with `s >= 0`.
    Feasible,
    /// Arbitrary bound; feasible or infeasible with roughly even odds.
    Unrestricted,
    /// Feasible with a bounded objective (augmented system strictly tangent).
    Lp,
}

impl GenKind {
    pub fn label(self) -> &'static str {
        match self {
            GenKind::Feasible => "feasible",
            GenKind::Unrestricted => "unrestricted",
            GenKind::Lp => "lp",
        }
    }
}

/// Draws one instance with `n` inequalities over `m` unknowns.
pub fn generate(seed: u64, n: usize, m: usize, kind: GenKind) -> Result<ProblemFile, GenError> {
    if n < 2 {
        return Err(GenError::RowsTooSmall(n));
    }
    if m == 0 || m >= n {
        return Err(GenError::ColsOutOfRange { n, m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (g, f) = loop {
        let g = tangent_matrix(&mut rng, n, m);
        // A degenerate draw (all columns collapsing under the projection)
        // would make a trivial instance; redraw instead.
        if (0..m).any(|j| g.column(j).amax() < 1e-6) {
            continue;
        }
        match kind {
            GenKind::Feasible | GenKind::Unrestricted => break (g, None),
            GenKind::Lp => {
                let nu_hat = positive_vector(&mut rng, n + 1);
                let f = g.transpose() * nu_hat.rows(0, n) / nu_hat[n];
                if inf_norm(&f) < 1e-6 {
                    continue;
                }
                break (g, Some(f));
            }
        }
    };
    let v = match kind {
        GenKind::Unrestricted => Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)),
        GenKind::Feasible | GenKind::Lp => {
            let x0 = Vector::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
            let slack = Vector::from_fn(n, |_, _| {
                // Exact zeros land the bound on faces of the feasible set,
                // which is where solvers earn their keep.
                if rng.random_range(0.0..1.0) < 0.25 {
                    0.0
                } else {
                    rng.random_range(0.0..1.0)
                }
            });
            &g * x0 + slack
        }
    };
    Ok(ProblemFile {
        name: format!("gen-{}-seed{}-n{}-m{}", kind.label(), seed, n, m),
        g: (0..n).map(|i| (0..m).map(|j| g[(i, j)]).collect()).collect(),
        v: v.iter().copied().collect(),
        f: f.map(|f| f.iter().copied().collect()),
        tolerances: None,
    })
}

fn positive_vector(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| rng.random_range(0.5..1.5))
}

fn tangent_matrix(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Matrix {
    let nu = positive_vector(rng, n);
    let proj = Matrix::identity(n, n) - &nu * nu.transpose() / nu.dot(&nu);
    let raw = Matrix::from_fn(n, m, |_, _| rng.random_range(-1.0..1.0));
    proj * raw
}
