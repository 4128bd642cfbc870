//! Edge-weight eigenvalue optimization: maximize `λ₂(Δ_w)` or minimize
//! `λₙ(Δ_w)` over `w ≥ 0, wᵗφ = 1`.
//!
//! Both problems are solved as semidefinite programs in the variables `(w, t)`
//! with a primal log-det barrier method:
//!
//! - max sense: maximize `t` subject to `Δ_w − tJ + 11ᵗ/n ≻ 0`, `w > 0`
//! - min sense: minimize `t` subject to `tI − Δ_w ≻ 0`, `w > 0`
//!
//! where `J = I − 11ᵗ/n`. The rank-one term in the max-sense matrix fixes the
//! eigenvalue along `1` at exactly one, so the matrix is positive definite
//! iff `t < λ₂(Δ_w)`.

mod barrier;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::denselin::{eigh, Cholesky, Matrix, SymMatrix};
use crate::error::{Error, Result};
use crate::extract;
use crate::graph::{laplacian, Graph, LengthSpec, WeightVector};

pub use barrier::NewtonStep;
pub(crate) use barrier::{center, svec, DenseLmiProblem, LogDetProblem};
use barrier::svec_index;

use std::f64::consts::SQRT_2;

/// Weights with `w_k φ_k` at most this are candidates for purification.
const PURIFY_THRESHOLD: f64 = 1e-3;

/// Which extremal eigenvalue is optimized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    /// maximize `λ₂(Δ_w)`; pairs with maximal realizations
    #[serde(rename = "max")]
    MaxLambda2,
    /// minimize `λₙ(Δ_w)`; pairs with minimal realizations
    #[serde(rename = "min")]
    MinLambdaN,
}

impl Sense {
    pub fn as_str(self) -> &'static str {
        match self {
            Sense::MaxLambda2 => "max",
            Sense::MinLambdaN => "min",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub mu0: f64,
    pub mu_shrink: f64,
    pub tol_gap: f64,
    pub tol_newton: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    /// Weights below this at termination are reported as exactly zero.
    pub weight_floor: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            mu0: 1.0,
            mu_shrink: 0.2,
            tol_gap: 1e-8,
            tol_newton: 1e-10,
            max_outer: 60,
            max_inner: 50,
            weight_floor: 1e-7,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Err(Error::BadParam { family: "solver".into(), reason: reason.into() });
        if !(self.mu0 > 0.0) {
            return bad("mu0 must be positive");
        }
        if !(self.mu_shrink > 0.0 && self.mu_shrink < 1.0) {
            return bad("mu_shrink must lie in (0, 1)");
        }
        if !(self.tol_gap > 0.0 && self.tol_newton > 0.0 && self.weight_floor >= 0.0) {
            return bad("tolerances must be positive");
        }
        if self.max_outer == 0 || self.max_inner == 0 {
            return bad("iteration caps must be positive");
        }
        Ok(())
    }
}

/// One outer (barrier-parameter) iteration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub t: f64,
    pub mu: f64,
    pub newton_steps: usize,
    /// `λ₂(Δ_w) − t` (max) or `t − λₙ(Δ_w)` (min): distance to the cone boundary.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub sense: Sense,
    /// Optimal weights, floored at `weight_floor` and renormalized to `wᵗφ = 1`.
    pub w_star: WeightVector,
    /// `λ₂(Δ_{w*})` or `λₙ(Δ_{w*})`, recomputed from `w_star`.
    pub lambda_star: f64,
    /// Final value of the SDP variable `t`.
    pub t_star: f64,
    /// Dual matrix estimate: PSD, `⟨J, Y⟩ = 1`, `1ᵗY1 = 0`.
    pub dual_y: SymMatrix,
    /// Dual objective value paired with `dual_y`.
    pub mu_final: f64,
    /// `dual_y` was rebuilt from the extremal eigenspace rather than taken
    /// from the barrier iterate.
    pub dual_polished: bool,
    /// Last barrier parameter.
    pub barrier_mu: f64,
    pub weight_floor: f64,
    pub zero_weight_edges: Vec<usize>,
    pub trace: Vec<TraceEntry>,
}

impl OptResult {
    /// `|t* − μ*|`.
    pub fn duality_gap(&self) -> f64 {
        (self.mu_final - self.t_star).abs()
    }

    pub fn is_zero_weight(&self, k: usize) -> bool {
        self.zero_weight_edges.binary_search(&k).is_ok()
    }
}

/// Interior iterate `(w, t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BarrierState {
    pub w: Vec<f64>,
    pub t: f64,
}

impl BarrierState {
    fn to_vec(&self) -> Vec<f64> {
        let mut x = self.w.clone();
        x.push(self.t);
        x
    }

    fn from_slice(x: &[f64]) -> Self {
        let (w, t) = x.split_at(x.len() - 1);
        BarrierState { w: w.to_vec(), t: t[0] }
    }
}

/// Outcome of [`barrier_step`].
#[derive(Clone, Debug)]
pub struct StepReport {
    pub state: BarrierState,
    /// Squared Newton decrement at the starting state.
    pub decrement_sq: f64,
    pub step_size: f64,
    pub halvings: usize,
}

/// The barrier subproblem for one graph, length spec and sense.
pub struct EigenProblem {
    sense: Sense,
    n: usize,
    edges: Vec<(usize, usize)>,
    phi: LengthSpec,
    objective: Vec<f64>,
    scalar_rows: Matrix,
    scalar_offsets: Vec<f64>,
    equality_rows: Matrix,
}

impl EigenProblem {
    pub fn new(g: &Graph, phi: &LengthSpec, sense: Sense) -> Result<Self> {
        phi.check_len(g.m())?;
        Self::from_parts(g.n(), g.edges().to_vec(), phi.clone(), sense)
    }

    /// The problem on the edges with `keep[k]`; the others are fixed at zero weight.
    fn restricted(g: &Graph, phi: &LengthSpec, sense: Sense, keep: &[bool]) -> Result<Self> {
        let edges = g.edges().iter().zip(keep).filter(|(_, k)| **k).map(|(e, _)| *e).collect();
        let values = phi.values().iter().zip(keep).filter(|(_, k)| **k).map(|(v, _)| *v).collect();
        Self::from_parts(g.n(), edges, LengthSpec::new(values)?, sense)
    }

    fn from_parts(n: usize, edges: Vec<(usize, usize)>, phi: LengthSpec, sense: Sense) -> Result<Self> {
        if !(phi.total() > 0.0) {
            return Err(Error::Infeasible("φᵗ1 must be positive".into()));
        }
        let m = edges.len();
        let mut objective = vec![0.0; m + 1];
        objective[m] = match sense {
            Sense::MaxLambda2 => 1.0,
            Sense::MinLambdaN => -1.0,
        };
        let scalar_rows = Matrix::from_fn(m, m + 1, |i, j| if i == j { 1.0 } else { 0.0 });
        let equality_rows =
            Matrix::from_fn(1, m + 1, |_, j| if j < m { phi.values()[j] } else { 0.0 });
        Ok(EigenProblem {
            sense,
            n,
            edges,
            phi,
            objective,
            scalar_rows,
            scalar_offsets: vec![0.0; m],
            equality_rows,
        })
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    fn weighted_laplacian(&self, w: &[f64]) -> SymMatrix {
        let mut l = SymMatrix::zeros(self.n);
        for (&(a, b), &wk) in self.edges.iter().zip(w) {
            l.add_to(a, a, wk);
            l.add_to(b, b, wk);
            l.add_to(b, a, -wk);
        }
        l
    }

    /// `Δ_w − tJ + 11ᵗ/n` (max) or `tI − Δ_w` (min).
    pub fn barrier_matrix(&self, state: &BarrierState) -> SymMatrix {
        let n = self.n;
        let lap = self.weighted_laplacian(&state.w);
        let inv_n = 1.0 / n as f64;
        match self.sense {
            Sense::MaxLambda2 => SymMatrix::from_fn(n, |i, j| {
                let jij = if i == j { 1.0 - inv_n } else { -inv_n };
                lap.get(i, j) - state.t * jij + inv_n
            }),
            Sense::MinLambdaN => SymMatrix::from_fn(n, |i, j| {
                let tij = if i == j { state.t } else { 0.0 };
                tij - lap.get(i, j)
            }),
        }
    }

    /// Slater point: uniform `ŵ = 1/(φᵗ1)` and `t` strictly inside the cone.
    pub fn start(&self) -> Result<BarrierState> {
        let w = vec![1.0 / self.phi.total(); self.edges.len()];
        let e = eigh(&self.weighted_laplacian(&w))?;
        let t = match self.sense {
            Sense::MaxLambda2 => 0.5 * e.values[1],
            Sense::MinLambdaN => 1.5 * e.values[self.n - 1],
        };
        Ok(BarrierState { w, t })
    }

    /// `t + μ(log det M + Σ log w)` (max) or `−t + μ(…)` (min); `None` outside the interior.
    pub fn barrier_value(&self, state: &BarrierState, mu: f64) -> Option<f64> {
        barrier::barrier_value(self, &state.to_vec(), mu)
    }

    /// Gradient and Hessian of [`Self::barrier_value`] in the variables `(w, t)`.
    pub fn barrier_gradient_hessian(&self, state: &BarrierState, mu: f64) -> Result<(Vec<f64>, Matrix)> {
        let (g, q) = barrier::barrier_derivatives(self, &state.to_vec(), mu)?;
        Ok((g, q.scale(-1.0)))
    }

    /// Barrier degree: gap between primal and dual values on the central path, per unit μ.
    pub fn degree(&self) -> f64 {
        LogDetProblem::barrier_degree(self)
    }
}

impl LogDetProblem for EigenProblem {
    fn num_vars(&self) -> usize {
        self.edges.len() + 1
    }

    fn objective(&self) -> &[f64] {
        &self.objective
    }

    fn lmi(&self, x: &[f64]) -> SymMatrix {
        self.barrier_matrix(&BarrierState::from_slice(x))
    }

    fn scaled_coefficients(&self, vectors: &Matrix, inv_sqrt: &[f64]) -> Matrix {
        let n = self.n;
        let m = self.edges.len();
        let mut out = Matrix::zeros(n * (n + 1) / 2, m + 1);
        // edge coefficient is +b bᵗ (max) or −b bᵗ (min); in the scaled
        // eigenbasis it becomes ±y yᵗ with y = Λ^{-1/2} Vᵗ b
        let edge_sign = match self.sense {
            Sense::MaxLambda2 => 1.0,
            Sense::MinLambdaN => -1.0,
        };
        let mut y = vec![0.0; n];
        for (k, &(t, h)) in self.edges.iter().enumerate() {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = (vectors[(h, i)] - vectors[(t, i)]) * inv_sqrt[i];
            }
            for i in 0..n {
                for j in 0..=i {
                    let f = if i == j { 1.0 } else { SQRT_2 };
                    out[(svec_index(i, j), k)] = edge_sign * f * y[i] * y[j];
                }
            }
        }
        match self.sense {
            Sense::MaxLambda2 => {
                // −Λ^{-1/2} Vᵗ J V Λ^{-1/2} with Vᵗ J V = I − ccᵗ/n, c = Vᵗ1
                let c = vectors.column_sums();
                let inv_n = 1.0 / n as f64;
                for i in 0..n {
                    for j in 0..=i {
                        let vjv = if i == j { 1.0 } else { 0.0 } - c[i] * c[j] * inv_n;
                        let f = if i == j { 1.0 } else { SQRT_2 };
                        out[(svec_index(i, j), m)] = -f * vjv * inv_sqrt[i] * inv_sqrt[j];
                    }
                }
            }
            Sense::MinLambdaN => {
                for i in 0..n {
                    out[(svec_index(i, i), m)] = inv_sqrt[i] * inv_sqrt[i];
                }
            }
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
        let lmi_dim = match self.sense {
            Sense::MaxLambda2 => self.n - 1,
            Sense::MinLambdaN => self.n,
        };
        (lmi_dim + self.edges.len()) as f64
    }
}

/// One damped Newton step on the barrier subproblem at fixed `mu`.
///
/// The step solves the bordered system that keeps `wᵗφ` fixed, is damped by
/// `1/(1 + λ)` while the decrement λ is large, never moves a weight more than
/// 99% of the way to zero, and is halved (up to 30 times) if the barrier
/// matrix loses definiteness.
pub fn barrier_step(problem: &EigenProblem, state: &BarrierState, mu: f64) -> Result<StepReport> {
    let step = barrier::newton_step(problem, &state.to_vec(), mu)?;
    Ok(StepReport {
        state: BarrierState::from_slice(&step.x),
        decrement_sq: step.decrement_sq,
        step_size: step.step_size,
        halvings: step.halvings,
    })
}

/// Dual estimate `Y = J M⁻¹ J / tr(J M⁻¹ J)` at an interior state.
///
/// On the central path this equals `μ J M⁻¹ J` with `⟨J, Y⟩ = 1`; the
/// normalization removes the dependence on μ.
pub fn dual_from_barrier(problem: &EigenProblem, state: &BarrierState) -> Result<SymMatrix> {
    let minv = Cholesky::factor(&problem.barrier_matrix(state))?.inverse();
    let centered = minv.double_center();
    let scale = centered.trace();
    if !(scale > 0.0) {
        return Err(Error::NotPositiveDefinite { pivot: 0, value: scale });
    }
    Ok(centered.scale(1.0 / scale).double_center())
}

/// Dual objective paired with `y`: the smallest `μ` with `b_kᵗYb_k ≤ μφ_k`
/// (max) or the largest with `b_kᵗYb_k ≥ μφ_k` (min), over edges with `φ_k > 0`.
pub fn dual_objective(g: &Graph, phi: &LengthSpec, y: &SymMatrix, sense: Sense) -> f64 {
    let ratios = g
        .edge_quad_forms(y)
        .into_iter()
        .zip(phi.values())
        .filter(|(_, &p)| p > 0.0)
        .map(|(q, &p)| q / p);
    match sense {
        Sense::MaxLambda2 => ratios.fold(f64::NEG_INFINITY, f64::max),
        Sense::MinLambdaN => ratios.fold(f64::INFINITY, f64::min),
    }
}

/// `λ₂(Δ_w)` (max sense) or `λₙ(Δ_w)` (min sense).
pub fn extreme_eigenvalue(g: &Graph, w: &WeightVector, sense: Sense) -> Result<f64> {
    let e = eigh(&laplacian(g, w)?)?;
    Ok(match sense {
        Sense::MaxLambda2 => e.values[1],
        Sense::MinLambdaN => e.values[g.n() - 1],
    })
}

pub fn solve_max_lambda2(g: &Graph, phi: &LengthSpec, opts: &SolverOptions) -> Result<OptResult> {
    solve(g, phi, Sense::MaxLambda2, opts)
}

pub fn solve_min_lambdan(g: &Graph, phi: &LengthSpec, opts: &SolverOptions) -> Result<OptResult> {
    solve(g, phi, Sense::MinLambdaN, opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PathEnd {
    Converged,
    Stalled(usize),
    OutOfIterations,
}

struct Path {
    state: BarrierState,
    mu: f64,
    end: PathEnd,
}

/// Follows the central path from the Slater point until `ϑμ ≤ tol_gap`.
fn follow_path(problem: &EigenProblem, opts: &SolverOptions, trace: &mut Vec<TraceEntry>) -> Result<Path> {
    let mut state = problem.start()?;
    let mut mu = opts.mu0;
    let degree = problem.degree();
    for outer in 0..opts.max_outer {
        let centered = center(problem, &state.to_vec(), mu, opts.tol_newton, opts.max_inner)?;
        state = BarrierState::from_slice(&centered.x);
        if state.t.abs() > 1e12 || state.w.iter().any(|w| *w > 1e12) {
            return Err(Error::Infeasible("objective is unbounded (zero squared lengths?)".into()));
        }
        let margin = margin(problem, &state)?;
        trace.push(TraceEntry { t: state.t, mu, newton_steps: centered.steps, margin });
        debug!(
            "outer {outer}: mu={mu:.3e} t={:.12} steps={} dec={:.2e}",
            state.t, centered.steps, centered.decrement_sq
        );
        if !centered.converged && centered.decrement_sq > 0.1 {
            return Ok(Path { state, mu, end: PathEnd::Stalled(outer + 1) });
        }
        if degree * mu <= opts.tol_gap {
            return Ok(Path { state, mu, end: PathEnd::Converged });
        }
        mu *= opts.mu_shrink;
    }
    Ok(Path { state, mu, end: PathEnd::OutOfIterations })
}

/// Path-following solve from the Slater point.
///
/// Weights that end at or below `weight_floor`, or that can be zeroed
/// without worsening the objective by more than `tol_gap`, are fixed at zero
/// and the path is re-run on the remaining edges. Dropping a weight of size
/// δ moves the extremal eigenvalues by `O(δ)`, which would otherwise split a
/// repeated optimal eigenvalue by far more than the solver tolerance.
pub fn solve(g: &Graph, phi: &LengthSpec, sense: Sense, opts: &SolverOptions) -> Result<OptResult> {
    opts.validate()?;
    let problem = EigenProblem::new(g, phi, sense)?;
    let mut trace = Vec::new();
    let path = follow_path(&problem, opts, &mut trace)?;
    let keep = support(g, phi, sense, &path.state, opts)?;
    let (mut state, mut mu) = (path.state, path.mu);

    if path.end == PathEnd::Converged && keep.iter().any(|k| !k) {
        match resolve_on_support(g, phi, sense, &keep, opts) {
            Ok((sub, sub_trace)) => {
                let worse = match sense {
                    Sense::MaxLambda2 => state.t - sub.state.t,
                    Sense::MinLambdaN => sub.state.t - state.t,
                };
                if sub.end == PathEnd::Converged && worse <= opts.tol_gap {
                    let mut w = vec![0.0; g.m()];
                    let mut kept = sub.state.w.iter();
                    for (wk, _) in w.iter_mut().zip(&keep).filter(|(_, k)| **k) {
                        *wk = *kept.next().unwrap();
                    }
                    state = BarrierState { w, t: sub.state.t };
                    mu = sub.mu;
                    trace.extend(sub_trace);
                } else {
                    debug!("support re-solve rejected ({:?}, objective change {worse:.2e})", sub.end);
                }
            }
            Err(e) => debug!("support re-solve failed: {e}"),
        }
    }

    let best = finish(g, phi, &problem, &state, &keep, mu, opts, trace)?;
    match path.end {
        PathEnd::Converged => Ok(best),
        PathEnd::Stalled(iterations) => Err(Error::SolverStalled { iterations, best: Box::new(best) }),
        PathEnd::OutOfIterations if best.duality_gap() <= opts.tol_gap => Ok(best),
        PathEnd::OutOfIterations => {
            Err(Error::SolverStalled { iterations: opts.max_outer, best: Box::new(best) })
        }
    }
}

fn resolve_on_support(
    g: &Graph,
    phi: &LengthSpec,
    sense: Sense,
    keep: &[bool],
    opts: &SolverOptions,
) -> Result<(Path, Vec<TraceEntry>)> {
    let sub = EigenProblem::restricted(g, phi, sense, keep)?;
    let mut trace = Vec::new();
    let path = follow_path(&sub, opts, &mut trace)?;
    Ok((path, trace))
}

/// Edges that keep a positive weight: those above the floor, minus the
/// small weights whose removal costs at most `tol_gap` in the objective.
///
/// Along directions where the eigenvalue is flat to first order the barrier
/// leaves weights at `O(√μ)` instead of driving them to zero.
fn support(g: &Graph, phi: &LengthSpec, sense: Sense, state: &BarrierState, opts: &SolverOptions) -> Result<Vec<bool>> {
    let mut keep: Vec<bool> = state.w.iter().map(|w| *w > opts.weight_floor).collect();
    let objective = |keep: &[bool]| extreme_eigenvalue(g, &floored_weights(&state.w, keep, phi), sense);
    let mut lambda = objective(&keep)?;
    let mut candidates: Vec<usize> = (0..g.m())
        .filter(|&k| keep[k] && state.w[k] * phi.values()[k] <= PURIFY_THRESHOLD)
        .collect();
    candidates.sort_by(|&a, &b| state.w[a].total_cmp(&state.w[b]));
    for k in candidates {
        keep[k] = false;
        let trial = objective(&keep).ok().filter(|v| v.is_finite());
        let accepted = trial.is_some_and(|trial| {
            let worse = match sense {
                Sense::MaxLambda2 => lambda - trial,
                Sense::MinLambdaN => trial - lambda,
            };
            worse <= opts.tol_gap
        });
        if accepted {
            debug!("dropping edge {k}: weight {:.3e}", state.w[k]);
            lambda = trial.unwrap();
        } else {
            keep[k] = true;
        }
    }
    Ok(keep)
}

/// `w` with dropped edges zeroed, renormalized to `wᵗφ = 1`.
fn floored_weights(w: &[f64], keep: &[bool], phi: &LengthSpec) -> WeightVector {
    let kept: Vec<f64> = w.iter().zip(keep).map(|(w, k)| if *k { *w } else { 0.0 }).collect();
    let total: f64 = kept.iter().zip(phi.values()).map(|(a, b)| a * b).sum();
    WeightVector(kept.iter().map(|x| x / total).collect())
}

/// Dual matrix `Y = XXᵗ/‖X‖²` from a realization in the extremal eigenspace.
///
/// Near the optimum the smallest eigenvalues of the barrier matrix cluster
/// within `O(μ)`, so the barrier estimate's split between them carries a
/// relative error of order `ε/μ`. Refining the split against the edge
/// constraints removes that floor.
fn polished_dual(
    g: &Graph,
    phi: &LengthSpec,
    w: &WeightVector,
    lambda: f64,
    sense: Sense,
) -> Result<(SymMatrix, f64)> {
    let delta = laplacian(g, w)?;
    let space = extract::extract_eigenspace(&delta, lambda, extract::DEFAULT_GROUP_TOL)?;
    let s = extract::refine_gram(&space, g, phi, w, sense)?;
    let x = extract::build_realization(&space, &s, sense)?.x;
    let total = x.frobenius_norm_sq();
    if !(total > 0.0) {
        return Err(Error::Infeasible("degenerate realization".into()));
    }
    let y = SymMatrix::from_matrix(&x.matmul(&x.transpose()))?.scale(1.0 / total).double_center();
    let m = dual_objective(g, phi, &y, sense);
    Ok((y, m))
}

fn margin(problem: &EigenProblem, state: &BarrierState) -> Result<f64> {
    let e = eigh(&problem.weighted_laplacian(&state.w))?;
    Ok(match problem.sense {
        Sense::MaxLambda2 => e.values[1] - state.t,
        Sense::MinLambdaN => state.t - e.values[problem.n - 1],
    })
}

fn finish(
    g: &Graph,
    phi: &LengthSpec,
    problem: &EigenProblem,
    state: &BarrierState,
    keep: &[bool],
    mu: f64,
    opts: &SolverOptions,
    trace: Vec<TraceEntry>,
) -> Result<OptResult> {
    let w_star = floored_weights(&state.w, keep, phi);
    let lambda_star = extreme_eigenvalue(g, &w_star, problem.sense)?;
    let zero_weight_edges: Vec<usize> = (0..keep.len()).filter(|&k| !keep[k]).collect();

    let barrier_y = dual_from_barrier(problem, state)?;
    let barrier_mu_star = dual_objective(g, phi, &barrier_y, problem.sense);
    let mut dual = (barrier_y, barrier_mu_star, false);
    if (barrier_mu_star - state.t).abs() > opts.tol_gap {
        match polished_dual(g, phi, &w_star, lambda_star, problem.sense) {
            Ok((y, m)) if (m - state.t).abs() < (barrier_mu_star - state.t).abs() => {
                dual = (y, m, true);
            }
            Ok(_) => {}
            Err(e) => debug!("dual polish skipped: {e}"),
        }
    }
    let (dual_y, mu_final, dual_polished) = dual;

    Ok(OptResult {
        sense: problem.sense,
        w_star,
        lambda_star,
        t_star: state.t,
        dual_y,
        mu_final,
        dual_polished,
        barrier_mu: mu,
        weight_floor: opts.weight_floor,
        zero_weight_edges,
        trace,
    })
}
