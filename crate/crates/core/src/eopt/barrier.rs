//! Log-det barrier path following for problems of the form
//!
//! ```text
//! maximize   cᵗx
//! subject to F(x) = F₀ + Σ xᵢ Fᵢ ≻ 0
//!            sⱼ(x) = hⱼ + aⱼᵗx > 0
//!            E x = e            (held fixed by the start point)
//! ```
//!
//! For a barrier parameter μ the centering problem maximizes
//! `cᵗx + μ (log det F(x) + Σ log sⱼ(x))`. The function `cᵗx/μ + barrier` is
//! self-concordant, so Newton steps damped by `1/(1 + λ)` (λ the Newton
//! decrement) stay interior and increase the objective without a line search
//! on function values, which lose resolution once μ is tiny.

use crate::denselin::{dot, eigh, svd, Cholesky, Matrix, Qr, SymMatrix};
use crate::error::{Error, Result};

const MAX_HALVINGS: usize = 30;
const FRACTION_TO_BOUNDARY: f64 = 0.99;

/// Index of entry `(i, j)`, `j ≤ i`, in the symmetric vectorization.
#[inline]
pub(crate) fn svec_index(i: usize, j: usize) -> usize {
    i * (i + 1) / 2 + j
}

/// Symmetric vectorization with `√2` on off-diagonal entries, so that
/// `⟨svec A, svec B⟩ = tr(AB)`.
pub(crate) fn svec(a: &SymMatrix) -> Vec<f64> {
    let n = a.order();
    let mut v = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in 0..=i {
            v.push(if i == j { a.get(i, j) } else { std::f64::consts::SQRT_2 * a.get(i, j) });
        }
    }
    v
}

pub(crate) trait LogDetProblem {
    fn num_vars(&self) -> usize;

    /// Gradient `c` of the linear objective.
    fn objective(&self) -> &[f64];

    fn lmi(&self, x: &[f64]) -> SymMatrix;

    /// With `F(x) = V Λ Vᵗ` and `s = diag(Λ^{-1/2})`, column `i` holds
    /// `svec(diag(s) Vᵗ Fᵢ V diag(s))`.
    fn scaled_coefficients(&self, vectors: &Matrix, inv_sqrt: &[f64]) -> Matrix;

    /// Rows `aⱼ` of the scalar constraints.
    fn scalar_rows(&self) -> &Matrix;

    fn scalar_offsets(&self) -> &[f64];

    /// Rows of `E`; steps are confined to its null space.
    fn equality_rows(&self) -> &Matrix;

    /// Barrier degree ϑ: on the central path the duality gap is ϑ·μ.
    fn barrier_degree(&self) -> f64;

    fn scalars(&self, x: &[f64]) -> Vec<f64> {
        let rows = self.scalar_rows();
        (0..rows.rows()).map(|j| self.scalar_offsets()[j] + dot(rows.row(j), x)).collect()
    }
}

/// Outcome of one damped Newton step.
#[derive(Clone, Debug)]
pub struct NewtonStep {
    pub x: Vec<f64>,
    /// Squared Newton decrement of `cᵗx/μ + barrier` at the starting point.
    pub decrement_sq: f64,
    pub step_size: f64,
    pub halvings: usize,
}

/// Barrier objective `cᵗx + μ(log det F + Σ log s)`, or `None` outside the interior.
pub(crate) fn barrier_value<P: LogDetProblem + ?Sized>(p: &P, x: &[f64], mu: f64) -> Option<f64> {
    let s = p.scalars(x);
    if s.iter().any(|&v| !(v > 0.0)) {
        return None;
    }
    let chol = Cholesky::factor(&p.lmi(x)).ok()?;
    let logs: f64 = s.iter().map(|v| v.ln()).sum();
    Some(dot(p.objective(), x) + mu * (chol.log_det() + logs))
}

/// Square-root form of the barrier derivatives: the barrier part of the
/// gradient is `Aᵗr` and its Hessian is `−AᵗA`.
struct Linearization {
    a: Matrix,
    r: Vec<f64>,
}

fn linearize<P: LogDetProblem + ?Sized>(p: &P, x: &[f64]) -> Result<Linearization> {
    let e = eigh(&p.lmi(x))?;
    if let Some((i, &v)) = e.values.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::NotPositiveDefinite { pivot: i, value: v });
    }
    let inv_sqrt: Vec<f64> = e.values.iter().map(|v| 1.0 / v.sqrt()).collect();
    let g = p.scaled_coefficients(&e.vectors, &inv_sqrt);
    let s = p.scalars(x);
    if let Some((j, &v)) = s.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::NotPositiveDefinite { pivot: j, value: v });
    }
    let nv = p.num_vars();
    let svec_len = g.rows();
    let rows = p.scalar_rows();
    let a = Matrix::from_fn(svec_len + s.len(), nv, |i, j| {
        if i < svec_len {
            g[(i, j)]
        } else {
            rows[(i - svec_len, j)] / s[i - svec_len]
        }
    });
    let n = e.values.len();
    let mut r = vec![0.0; svec_len + s.len()];
    for i in 0..n {
        r[svec_index(i, i)] = 1.0;
    }
    for v in r.iter_mut().skip(svec_len) {
        *v = 1.0;
    }
    Ok(Linearization { a, r })
}

/// Gradient and negated Hessian `Q` of the barrier objective.
pub(crate) fn barrier_derivatives<P: LogDetProblem + ?Sized>(
    p: &P,
    x: &[f64],
    mu: f64,
) -> Result<(Vec<f64>, Matrix)> {
    let lin = linearize(p, x)?;
    let at = lin.a.transpose();
    let atr = at.matvec(&lin.r);
    let grad = p.objective().iter().zip(&atr).map(|(c, g)| c + mu * g).collect();
    Ok((grad, at.matmul(&lin.a).scale(mu)))
}

/// Orthonormal basis (as columns) of the null space of `e`.
fn null_basis(e: &Matrix, nv: usize) -> Result<Matrix> {
    if e.rows() == 0 {
        return Ok(Matrix::identity(nv));
    }
    let s = svd(e)?;
    let rank = crate::denselin::rank_from_singular_values(&s.singular_values, 1e-12);
    Ok(Matrix::from_fn(nv, nv - rank, |i, j| s.v[(i, rank + j)]))
}

/// One damped Newton step on the centering problem for barrier parameter `mu`.
///
/// The Newton system `AᵗA dx = c/μ + Aᵗr` restricted to `null(E)` is solved
/// through a QR factorization of `A N` rather than the normal matrix, which
/// keeps the directions with small curvature resolved when μ is tiny.
pub(crate) fn newton_step<P: LogDetProblem + ?Sized>(
    p: &P,
    x: &[f64],
    mu: f64,
) -> Result<NewtonStep> {
    let lin = linearize(p, x)?;
    let nbasis = null_basis(p.equality_rows(), p.num_vars())?;
    let c_mat = lin.a.matmul(&nbasis);
    let qr = Qr::factor(&c_mat)?;
    if let Some((i, &d)) = qr.r_diagonal().iter().enumerate().find(|(_, d)| **d == 0.0) {
        return Err(Error::NotPositiveDefinite { pivot: i, value: d });
    }
    let z_ls = qr.least_squares(&lin.r);
    let nc: Vec<f64> = nbasis.transpose().matvec(p.objective()).iter().map(|v| v / mu).collect();
    let z_obj = qr.solve_r(&qr.solve_rt(&nc));
    let z: Vec<f64> = z_ls.iter().zip(&z_obj).map(|(a, b)| a + b).collect();
    let dx = nbasis.matvec(&z);
    let decrement_sq = c_mat.matvec(&z).iter().map(|v| v * v).sum::<f64>();
    let lambda = decrement_sq.sqrt();

    let mut alpha: f64 = if lambda > 0.25 { 1.0 / (1.0 + lambda) } else { 1.0 };
    let s = p.scalars(x);
    let rows = p.scalar_rows();
    for (j, &sj) in s.iter().enumerate() {
        let ds = dot(rows.row(j), &dx);
        if ds < 0.0 {
            alpha = alpha.min(FRACTION_TO_BOUNDARY * sj / -ds);
        }
    }

    for halvings in 0..=MAX_HALVINGS {
        let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a + alpha * d).collect();
        let interior = p.scalars(&trial).iter().all(|&v| v > 0.0)
            && Cholesky::factor(&p.lmi(&trial)).is_ok();
        if interior {
            return Ok(NewtonStep { x: trial, decrement_sq, step_size: alpha, halvings });
        }
        alpha *= 0.5;
    }
    Err(Error::StepRejected { halvings: MAX_HALVINGS })
}

/// Result of centering at a fixed μ.
#[derive(Clone, Debug)]
pub(crate) struct Centered {
    pub x: Vec<f64>,
    pub steps: usize,
    pub decrement_sq: f64,
    pub converged: bool,
}

/// Runs damped Newton until `λ²/2 ≤ tol` or `max_steps` is reached.
pub(crate) fn center<P: LogDetProblem + ?Sized>(
    p: &P,
    x0: &[f64],
    mu: f64,
    tol: f64,
    max_steps: usize,
) -> Result<Centered> {
    let mut x = x0.to_vec();
    let mut last = f64::INFINITY;
    for steps in 0..max_steps {
        let step = newton_step(p, &x, mu)?;
        last = step.decrement_sq;
        x = step.x;
        if last / 2.0 <= tol {
            return Ok(Centered { x, steps: steps + 1, decrement_sq: last, converged: true });
        }
    }
    Ok(Centered { x, steps: max_steps, decrement_sq: last, converged: false })
}

/// Dense LMI problem with explicit coefficient matrices, used for small
/// subproblems where specialized derivative formulas are not worth it.
pub(crate) struct DenseLmiProblem {
    pub objective: Vec<f64>,
    pub f0: SymMatrix,
    pub coeffs: Vec<SymMatrix>,
    pub scalar_rows: Matrix,
    pub scalar_offsets: Vec<f64>,
    pub equality_rows: Matrix,
}

impl LogDetProblem for DenseLmiProblem {
    fn num_vars(&self) -> usize {
        self.coeffs.len()
    }

    fn objective(&self) -> &[f64] {
        &self.objective
    }

    fn lmi(&self, x: &[f64]) -> SymMatrix {
        let mut f = self.f0.clone();
        for (xi, fi) in x.iter().zip(&self.coeffs) {
            f = f.add(&fi.scale(*xi));
        }
        f
    }

    fn scaled_coefficients(&self, vectors: &Matrix, inv_sqrt: &[f64]) -> Matrix {
        let d = inv_sqrt.len();
        let vt = vectors.transpose();
        let mut out = Matrix::zeros(d * (d + 1) / 2, self.coeffs.len());
        for (col, fi) in self.coeffs.iter().enumerate() {
            let rot = vt.matmul(&fi.to_matrix()).matmul(vectors);
            let scaled = SymMatrix::from_fn(d, |i, j| inv_sqrt[i] * rot[(i, j)] * inv_sqrt[j]);
            out.set_column(col, &svec(&scaled));
        }
        out
    }

    fn scalar_rows(&self) -> &Matrix {
        &self.scalar_rows
    }

    fn scalar_offsets(&self) -> &[f64] {
        &self.scalar_offsets
    }

    fn equality_rows(&self) -> &Matrix {
        &self.equality_rows
    }

    fn barrier_degree(&self) -> f64 {
        (self.f0.order() + self.scalar_offsets.len()) as f64
    }
}
