//! Helpers shared by the integration tests.
//!
//! The eigenvalue oracle here deliberately avoids the library's Jacobi
//! solver: it counts negative pivots of `A − σI` (Sylvester inertia) and
//! bisects on σ.

#![allow(dead_code)]

use graphreal_core::denselin::{Matrix, SymMatrix};
use graphreal_core::eopt::{solve, OptResult, Sense, SolverOptions};
use graphreal_core::extract::{realize, Realization, DEFAULT_GROUP_TOL};
use graphreal_core::graph::{generate, Family, Graph, LengthSpec, WeightVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Number of eigenvalues of `a` strictly below `sigma`.
pub fn count_below(a: &[Vec<f64>], sigma: f64) -> usize {
    let n = a.len();
    let mut m: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| a[i][j] - if i == j { sigma } else { 0.0 }).collect()).collect();
    let mut negatives = 0;
    // symmetric Gaussian elimination without pivoting; a zero pivot is
    // nudged, which only matters when σ hits an eigenvalue exactly
    for k in 0..n {
        let mut p = m[k][k];
        if p == 0.0 {
            p = 1e-300;
        }
        if p < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let f = m[i][k] / p;
            for j in k + 1..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    negatives
}

/// All eigenvalues by bisection on the inertia count, ascending.
pub fn oracle_eigenvalues(a: &SymMatrix) -> Vec<f64> {
    let n = a.order();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
    let bound = 1.0 + rows.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    (0..n)
        .map(|k| {
            // k-th eigenvalue: smallest σ with count_below(σ) > k
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(&rows, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-15 * (1.0 + hi.abs()) {
                    break;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Laplacian assembled directly from the edge list.
pub fn oracle_laplacian(g: &Graph, w: &[f64]) -> SymMatrix {
    let mut l = SymMatrix::zeros(g.n());
    for (&(a, b), &wk) in g.edges().iter().zip(w) {
        l.add_to(a, a, wk);
        l.add_to(b, b, wk);
        l.add_to(b, a, -wk);
    }
    l
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

pub struct Solved {
    pub graph: Graph,
    pub phi: LengthSpec,
    pub result: OptResult,
    pub realization: Realization,
}

pub fn solve_with(graph: Graph, phi: LengthSpec, sense: Sense) -> Solved {
    let result = solve(&graph, &phi, sense, &SolverOptions::default())
        .unwrap_or_else(|e| panic!("solve failed: {e}"));
    let realization =
        realize(&graph, &phi, &result, DEFAULT_GROUP_TOL).unwrap_or_else(|e| panic!("realize failed: {e}"));
    Solved { graph, phi, result, realization }
}

pub fn solve_family(family: Family, sense: Sense) -> Solved {
    let g = generate(family).unwrap();
    let phi = g.phi().clone();
    solve_with(g, phi, sense)
}

/// Catalog used by the randomized property checks.
pub fn catalog() -> Vec<(String, Graph)> {
    let families = [
        Family::Path(4),
        Family::Cycle(5),
        Family::Complete(5),
        Family::CompleteBipartite(2, 3),
        Family::Grid(3, 3),
        Family::CircularLadder(5),
        Family::Petersen,
        Family::House,
        Family::HouseX,
        Family::Tetrahedral,
        Family::Cube,
        Family::Octahedral,
        Family::Dodecahedral,
        Family::Icosahedral,
    ];
    families.into_iter().map(|f| (format!("{f:?}"), generate(f).unwrap())).collect()
}

/// Uniform-ish random point of `{w ≥ 0, wᵗφ = 1}`.
pub fn random_weights(rng: &mut ChaCha8Rng, phi: &LengthSpec) -> WeightVector {
    let raw: Vec<f64> = phi.values().iter().map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let total: f64 = raw.iter().zip(phi.values()).map(|(w, p)| w * p).sum();
    WeightVector(raw.into_iter().map(|w| w / total).collect())
}

/// Random centered `n×d` matrix shrunk until every edge satisfies `≤ φ`.
pub fn random_feasible_coords(rng: &mut ChaCha8Rng, g: &Graph, phi: &LengthSpec, d: usize) -> Matrix {
    let n = g.n();
    let mut x = Matrix::from_fn(n, d, |_, _| rng.gen_range(-2.0..2.0));
    let sums = x.column_sums();
    for i in 0..n {
        for c in 0..d {
            x[(i, c)] -= sums[c] / n as f64;
        }
    }
    loop {
        let ok = g.squared_edge_lengths(&x).iter().zip(phi.values()).all(|(l, p)| *l <= *p);
        if ok {
            return x;
        }
        x = x.scale(0.9);
    }
}

/// Random matrix with Frobenius norm `size`.
pub fn random_direction(rng: &mut ChaCha8Rng, rows: usize, cols: usize, size: f64) -> Matrix {
    let e = Matrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0));
    let norm = e.frobenius_norm();
    e.scale(size / norm)
}
