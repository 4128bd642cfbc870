//! Realizations from an optimal weight vector.
//!
//! The columns of a maximal (minimal) realization lie in the eigenspace of
//! `Δ_{w*}` for `λ*`. Writing `X = U S^{1/2}` with `U` an orthonormal basis
//! of that eigenspace reduces the search to a `d×d` Gram matrix `S ⪰ 0`
//! with `q_kᵗ S q_k = φ_k` on edges carrying positive weight and the
//! inequality on the rest, where `q_k = Uᵗ b_k`.
//!
//! On that equality set the trace is constant (`λ* tr S = Σ w_k φ_k = 1`),
//! so any feasible `S` is optimal. The subproblem picks the one that
//! maximizes the smallest of `λ_min(S)` and the inequality slacks.

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::denselin::{eigh, norm, psd_sqrt, svd, Matrix, SymMatrix};
use crate::eopt::{center, svec, DenseLmiProblem, OptResult, Sense};
use crate::error::{Error, Result};
use crate::graph::{laplacian, Graph, LengthSpec, WeightVector};

pub const DEFAULT_GROUP_TOL: f64 = 1e-6;

/// Squared-length residual below which an edge counts as active.
pub const ACTIVE_TOL: f64 = 1e-7;

/// Orthonormal basis of the eigenspace for one (possibly repeated) eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenspace {
    pub lambda: f64,
    /// `n×d`, orthonormal columns orthogonal to `1`.
    pub basis: Matrix,
    pub d: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub sense: Sense,
    /// `n×d` coordinates, one row per vertex.
    pub x: Matrix,
    /// `XᵗX`, which equals the refined `S` when `X = U S^{1/2}`.
    pub gram: SymMatrix,
    /// Edges whose length constraint holds with equality.
    pub active_edges: Vec<usize>,
    /// `X = 0`.
    pub degenerate: bool,
    /// Every weight is positive, so every edge constraint is an equality and
    /// `X` also solves the equality-constrained realization problem.
    pub all_edges_tight: bool,
}

impl Realization {
    /// Wraps externally supplied coordinates; active edges are measured against `phi`.
    pub fn from_coords(g: &Graph, phi: &LengthSpec, x: Matrix, sense: Sense) -> Result<Self> {
        if x.rows() != g.n() {
            return Err(Error::DimensionMismatch(format!(
                "coordinates have {} rows, graph has {} vertices",
                x.rows(),
                g.n()
            )));
        }
        phi.check_len(g.m())?;
        let gram = SymMatrix::from_matrix(&x.transpose().matmul(&x))?;
        let mut r = Realization {
            sense,
            degenerate: x.max_abs() == 0.0,
            x,
            gram,
            active_edges: Vec::new(),
            all_edges_tight: false,
        };
        r.mark_active(g, phi);
        Ok(r)
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn d(&self) -> usize {
        self.x.cols()
    }

    /// `‖X‖²_F`.
    pub fn total_variance(&self) -> f64 {
        self.x.frobenius_norm_sq()
    }

    pub fn squared_edge_lengths(&self, g: &Graph) -> Vec<f64> {
        g.squared_edge_lengths(&self.x)
    }

    fn mark_active(&mut self, g: &Graph, phi: &LengthSpec) {
        let lens = g.squared_edge_lengths(&self.x);
        self.active_edges = lens
            .iter()
            .zip(phi.values())
            .enumerate()
            .filter(|(_, (l, p))| (*l - *p).abs() <= ACTIVE_TOL)
            .map(|(k, _)| k)
            .collect();
        self.all_edges_tight = self.active_edges.len() == g.m();
    }
}

/// Groups the eigenvalues of `delta` within `group_tol·(1 + λ*)` of `lambda_star`.
pub fn extract_eigenspace(delta: &SymMatrix, lambda_star: f64, group_tol: f64) -> Result<Eigenspace> {
    let n = delta.order();
    let e = eigh(delta)?;
    let window = group_tol * (1.0 + lambda_star.abs());
    let members: Vec<usize> =
        (0..n).filter(|&i| (e.values[i] - lambda_star).abs() <= window).collect();

    // project out the constant vector, then re-orthonormalize (Gram–Schmidt twice)
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for &i in &members {
        let mut v = e.vector(i);
        let mean = v.iter().sum::<f64>() / n as f64;
        v.iter_mut().for_each(|x| *x -= mean);
        for _ in 0..2 {
            for c in &cols {
                let proj: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(c).for_each(|(a, b)| *a -= proj * b);
            }
        }
        let len = norm(&v);
        if len > 1e-8 {
            cols.push(v.into_iter().map(|x| x / len).collect());
        }
    }
    if cols.is_empty() {
        return Err(Error::EmptyEigenspace { lambda: lambda_star });
    }
    let d = cols.len();
    let basis = Matrix::from_fn(n, d, |i, j| cols[j][i]);
    Ok(Eigenspace { lambda: lambda_star, basis, d })
}

/// Inverse of [`svec`].
fn smat(v: &[f64], d: usize) -> SymMatrix {
    let mut s = SymMatrix::zeros(d);
    let mut idx = 0;
    for i in 0..d {
        for j in 0..=i {
            let f = if i == j { 1.0 } else { std::f64::consts::FRAC_1_SQRT_2 };
            s.set(i, j, f * v[idx]);
            idx += 1;
        }
    }
    s
}

/// Finds a Gram matrix `S ⪰ 0` meeting the edge constraints inside `space`.
///
/// Edges with `w*_k > 0` get equality constraints and the rest get the
/// inequality for `sense`. Fails with [`Error::InfeasibleRefinement`] when
/// the equalities are inconsistent or no PSD point satisfies the
/// inequalities, which usually means the eigenspace was mis-grouped.
pub fn refine_gram(
    space: &Eigenspace,
    g: &Graph,
    phi: &LengthSpec,
    w_star: &WeightVector,
    sense: Sense,
) -> Result<SymMatrix> {
    phi.check_len(g.m())?;
    if w_star.len() != g.m() {
        return Err(Error::LengthMismatch { expected: g.m(), got: w_star.len() });
    }
    let d = space.d;
    let p = d * (d + 1) / 2;
    let ut = space.basis.transpose();
    let mut bk = vec![0.0; g.n()];
    let a_rows: Vec<Vec<f64>> = g
        .edges()
        .iter()
        .map(|&(t, h)| {
            bk.iter_mut().for_each(|x| *x = 0.0);
            bk[t] = -1.0;
            bk[h] = 1.0;
            let q = ut.matvec(&bk);
            svec(&SymMatrix::from_fn(d, |i, j| q[i] * q[j]))
        })
        .collect();

    let (eq, ineq): (Vec<usize>, Vec<usize>) = (0..g.m()).partition(|&k| w_star.values()[k] > 0.0);
    let phis = phi.values();

    // particular solution and null space of the equality system
    let a_eq = Matrix::from_fn(eq.len(), p, |r, c| a_rows[eq[r]][c]);
    let rhs: Vec<f64> = eq.iter().map(|&k| phis[k]).collect();
    let (sigma_p, null) = if eq.is_empty() {
        (vec![0.0; p], Matrix::identity(p))
    } else {
        min_norm_solution(&a_eq, &rhs)?
    };
    let scale = 1.0 + phis.iter().fold(0.0_f64, |a, &b| a.max(b));
    let eq_residual = a_eq
        .matvec(&sigma_p)
        .iter()
        .zip(&rhs)
        .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
    if eq_residual > 1e-6 * scale {
        return Err(Error::InfeasibleRefinement { residual: eq_residual });
    }

    let slack_sign = match sense {
        Sense::MaxLambda2 => 1.0,
        Sense::MinLambdaN => -1.0,
    };
    let slack = |sigma: &[f64], k: usize| -> f64 {
        let qsq: f64 = a_rows[k].iter().zip(sigma).map(|(a, s)| a * s).sum();
        slack_sign * (phis[k] - qsq)
    };

    let s_p = smat(&sigma_p, d);
    let worst = |sigma: &[f64], s: &SymMatrix| -> Result<f64> {
        let lmin = eigh(s)?.values[0];
        Ok(ineq.iter().map(|&k| slack(sigma, k)).fold(lmin, f64::min))
    };

    if null.cols() == 0 {
        let tau = worst(&sigma_p, &s_p)?;
        if tau < -1e-8 * scale {
            return Err(Error::InfeasibleRefinement { residual: -tau });
        }
        return Ok(s_p);
    }

    // maximize τ over (z, τ): S(z) − τI ⪰ 0 and inequality slacks ≥ τ
    let nz = null.cols();
    let mut coeffs: Vec<SymMatrix> = (0..nz).map(|j| smat(&null.column(j), d)).collect();
    coeffs.push(SymMatrix::identity(d).scale(-1.0));
    let mut objective = vec![0.0; nz + 1];
    objective[nz] = 1.0;
    let mut scalar_rows = Matrix::zeros(ineq.len(), nz + 1);
    let mut scalar_offsets = Vec::with_capacity(ineq.len());
    for (r, &k) in ineq.iter().enumerate() {
        for j in 0..nz {
            let an: f64 = a_rows[k].iter().zip(null.column(j)).map(|(a, b)| a * b).sum();
            scalar_rows[(r, j)] = -slack_sign * an;
        }
        scalar_rows[(r, nz)] = -1.0;
        scalar_offsets.push(slack(&sigma_p, k));
    }
    let problem = DenseLmiProblem {
        objective,
        f0: s_p,
        coeffs,
        scalar_rows,
        scalar_offsets,
        equality_rows: Matrix::zeros(0, nz + 1),
    };
    let degree = (d + ineq.len()) as f64;

    let mut x = vec![0.0; nz + 1];
    x[nz] = worst(&sigma_p, &problem.f0)? - 1.0;
    let mut mu = 1.0;
    loop {
        x = center(&problem, &x, mu, 1e-10, 50)?.x;
        if x[nz] > 1e8 * scale {
            break;
        }
        if degree * mu <= 1e-11 * scale {
            break;
        }
        mu *= 0.2;
    }
    let tau = x[nz];
    debug!("gram refinement: d={d}, {nz} free directions, tau={tau:.3e}");
    if tau < -1e-8 * scale {
        return Err(Error::InfeasibleRefinement { residual: -tau });
    }
    let null_part = null.matvec(&x[..nz]);
    let sigma: Vec<f64> = sigma_p.iter().zip(&null_part).map(|(a, b)| a + b).collect();
    Ok(smat(&sigma, d))
}

/// Minimum-norm solution of `A σ = b` and an orthonormal basis of `null(A)`.
fn min_norm_solution(a: &Matrix, b: &[f64]) -> Result<(Vec<f64>, Matrix)> {
    let p = a.cols();
    let s = svd(a)?;
    let rank = crate::denselin::rank_from_singular_values(&s.singular_values, 1e-10);
    // σ = Σ_{i<rank} v_i (u_iᵗ b) / s_i
    let mut sigma = vec![0.0; p];
    for i in 0..rank {
        let ub: f64 = (0..a.rows()).map(|r| s.u[(r, i)] * b[r]).sum();
        let coef = ub / s.singular_values[i];
        for (j, sj) in sigma.iter_mut().enumerate() {
            *sj += coef * s.v[(j, i)];
        }
    }
    let null = Matrix::from_fn(p, p - rank, |i, j| s.v[(i, rank + j)]);
    Ok((sigma, null))
}

/// `X = U S^{1/2}`; active edges are left empty (see [`realize`]).
pub fn build_realization(space: &Eigenspace, s: &SymMatrix, sense: Sense) -> Result<Realization> {
    if s.order() != space.d {
        return Err(Error::DimensionMismatch(format!(
            "gram matrix has order {}, eigenspace has dimension {}",
            s.order(),
            space.d
        )));
    }
    let root = psd_sqrt(s)?;
    let x = space.basis.matmul(&root.to_matrix());
    let gram = SymMatrix::from_matrix(&x.transpose().matmul(&x))?;
    Ok(Realization {
        sense,
        degenerate: x.max_abs() == 0.0,
        x,
        gram,
        active_edges: Vec::new(),
        all_edges_tight: false,
    })
}

/// Full pipeline from a solver result: eigenspace, Gram refinement and
/// coordinates. A failed refinement is retried once with `100·group_tol`.
pub fn realize(g: &Graph, phi: &LengthSpec, result: &OptResult, group_tol: f64) -> Result<Realization> {
    let delta = laplacian(g, &result.w_star)?;
    let attempt = |tol: f64| -> Result<Realization> {
        let space = extract_eigenspace(&delta, result.lambda_star, tol)?;
        let s = refine_gram(&space, g, phi, &result.w_star, result.sense)?;
        let mut r = build_realization(&space, &s, result.sense)?;
        r.mark_active(g, phi);
        Ok(r)
    };
    match attempt(group_tol) {
        Err(Error::InfeasibleRefinement { residual }) => {
            warn!("gram refinement failed (residual {residual:.2e}); retrying with a wider eigenvalue window");
            attempt(group_tol * 100.0)
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eopt::{solve, SolverOptions};
    use crate::graph::{generate, Family};

    fn realize_family(f: Family, sense: Sense) -> (Graph, OptResult, Realization) {
        let g = generate(f).unwrap();
        let r = solve(&g, g.phi(), sense, &SolverOptions::default()).unwrap();
        let x = realize(&g, g.phi(), &r, DEFAULT_GROUP_TOL).unwrap();
        (g, r, x)
    }

    #[test]
    fn cycle6_is_a_unit_hexagon() {
        let (g, r, x) = realize_family(Family::Cycle(6), Sense::MaxLambda2);
        assert_eq!(x.d(), 2);
        // S = 3I
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 3.0 } else { 0.0 };
                assert!((x.gram.get(i, j) - want).abs() < 1e-6, "{:?}", x.gram);
            }
        }
        for i in 0..6 {
            assert!((norm(x.x.row(i)) - 1.0).abs() < 1e-6);
        }
        for l in x.squared_edge_lengths(&g) {
            assert!((l - 1.0).abs() < 1e-7);
        }
        assert!(x.all_edges_tight);
        assert!((x.total_variance() - 1.0 / r.lambda_star).abs() < 1e-6);
    }

    #[test]
    fn path2_half_variance() {
        let (_, _, x) = realize_family(Family::Path(2), Sense::MaxLambda2);
        assert_eq!(x.d(), 1);
        assert!((x.gram.get(0, 0) - 0.5).abs() < 1e-10);
        assert!((x.x[(0, 0)].abs() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn complete4_tetrahedron_variance() {
        let (_, _, x) = realize_family(Family::Complete(4), Sense::MaxLambda2);
        // circumradius² of the unit tetrahedron is 3/8
        assert!((x.gram.trace() - 1.5).abs() < 1e-6, "{}", x.gram.trace());
    }

    #[test]
    fn cube_min_is_two_points() {
        let (_, r, x) = realize_family(Family::Cube, Sense::MinLambdaN);
        assert!((r.lambda_star - 0.5).abs() < 1e-7);
        assert_eq!(x.d(), 1);
        for i in 0..8 {
            assert!((x.x[(i, 0)].abs() - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn eigenspace_grouping() {
        let g = generate(Family::Petersen).unwrap();
        let w = WeightVector::uniform(g.phi());
        let delta = laplacian(&g, &w).unwrap();
        let space = extract_eigenspace(&delta, 2.0 / 15.0, DEFAULT_GROUP_TOL).unwrap();
        assert_eq!(space.d, 5);
        let gram = space.basis.transpose().matmul(&space.basis);
        assert!(gram.sub(&Matrix::identity(5)).max_abs() < 1e-10);
        assert!(space.basis.column_sums().iter().all(|s| s.abs() < 1e-10));
        assert!(matches!(
            extract_eigenspace(&delta, 0.2, DEFAULT_GROUP_TOL),
            Err(Error::EmptyEigenspace { .. })
        ));
    }

    #[test]
    fn zero_gram_is_degenerate() {
        let g = generate(Family::Cycle(4)).unwrap();
        let delta = laplacian(&g, &WeightVector::uniform(g.phi())).unwrap();
        let space = extract_eigenspace(&delta, 0.5, DEFAULT_GROUP_TOL).unwrap();
        let r = build_realization(&space, &SymMatrix::zeros(2), Sense::MaxLambda2).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.total_variance(), 0.0);
    }

    #[test]
    fn smat_inverts_svec() {
        let s = SymMatrix::from_fn(3, |i, j| (i * 3 + j) as f64 + 0.5);
        assert!(smat(&svec(&s), 3).sub(&s).max_abs() < 1e-14);
    }
}
