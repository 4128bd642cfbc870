//! Independent optimality checks.
//!
//! Everything here is recomputed from the graph, the lengths, the
//! coordinates and the weights. Nothing is taken from solver internals, so a
//! passing certificate proves optimality on its own: by weak duality any
//! centered feasible `X` has `‖X‖² ≤ 1/λ₂(Δ_w)` for every feasible `w`, and
//! equality pins both down.

use serde::{Deserialize, Serialize};

use crate::denselin::{eigh, svd, Matrix, SymMatrix, DEFAULT_RANK_TOL};
use crate::eopt::{dual_objective, OptResult, Sense};
use crate::error::{Error, Result};
use crate::extract::{Realization, DEFAULT_GROUP_TOL};
use crate::graph::{laplacian, Graph, LengthSpec, WeightVector};

/// Feasibility slack allowed by [`weak_duality_gap`].
pub const FEASIBILITY_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub sense: Sense,
    pub conditions: Vec<Condition>,
    pub overall: bool,
    /// Number of coordinate columns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_claimed: Option<usize>,
    /// Multiplicity of the extremal eigenvalue of `Δ_w`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_measured: Option<usize>,
}

impl CertificateReport {
    fn new(sense: Sense) -> Self {
        CertificateReport { sense, conditions: Vec::new(), overall: true, d_claimed: None, d_measured: None }
    }

    fn push(&mut self, name: &str, residual: f64, tolerance: f64) {
        // NaN residuals fail
        let pass = residual <= tolerance;
        self.overall &= pass;
        self.conditions.push(Condition { name: name.to_string(), residual, tolerance, pass });
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.pass)
    }
}

fn check_dims(x: &Matrix, w: &WeightVector, g: &Graph, phi: &LengthSpec) -> Result<()> {
    if x.rows() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "coordinates have {} rows, graph has {} vertices",
            x.rows(),
            g.n()
        )));
    }
    if w.len() != g.m() || phi.len() != g.m() {
        return Err(Error::DimensionMismatch(format!(
            "graph has {} edges, weights {} and lengths {}",
            g.m(),
            w.len(),
            phi.len()
        )));
    }
    Ok(())
}

fn positive(v: f64) -> f64 {
    v.max(0.0)
}

fn certificate(
    x: &Realization,
    w: &WeightVector,
    g: &Graph,
    phi: &LengthSpec,
    tol: f64,
    sense: Sense,
) -> Result<CertificateReport> {
    let x = &x.x;
    check_dims(x, w, g, phi)?;
    let n = g.n();
    let mut report = CertificateReport::new(sense);

    let centering = x.column_sums().iter().fold(0.0_f64, |a, s| a.max(s.abs()));
    report.push("centered", centering, tol);

    let lens = g.squared_edge_lengths(x);
    let edge_violation = lens
        .iter()
        .zip(phi.values())
        .map(|(l, p)| match sense {
            Sense::MaxLambda2 => positive(l - p),
            Sense::MinLambdaN => positive(p - l),
        })
        .fold(0.0, f64::max);
    report.push("edge_lengths", edge_violation, tol);

    let negative = w.values().iter().map(|v| positive(-v)).fold(0.0, f64::max);
    report.push("weights_nonnegative", negative, tol);
    report.push("weight_normalization", (w.weighted_length(phi) - 1.0).abs(), tol);

    let e = eigh(&laplacian(g, w)?)?;
    let lambda = match sense {
        Sense::MaxLambda2 => e.values[1],
        Sense::MinLambdaN => e.values[n - 1],
    };
    let window = DEFAULT_GROUP_TOL * (1.0 + lambda.abs());
    // the constant vector's eigenvalue 0 is never part of the count
    let d_measured = e.values[1..].iter().filter(|v| (*v - lambda).abs() <= window).count();
    let d_claimed = x.cols();
    report.d_claimed = Some(d_claimed);
    report.d_measured = Some(d_measured);
    report.push("multiplicity", d_claimed.abs_diff(d_measured) as f64, 0.0);

    let variance_residual = (lambda * x.frobenius_norm_sq() - 1.0).abs();
    report.push("total_variance", variance_residual, tol);
    Ok(report)
}

/// Checks that `X` is a maximal realization and `w` maximizes `λ₂`.
pub fn check_max_certificate(
    x: &Realization,
    w: &WeightVector,
    g: &Graph,
    phi: &LengthSpec,
    tol: f64,
) -> Result<CertificateReport> {
    certificate(x, w, g, phi, tol, Sense::MaxLambda2)
}

/// Checks that `X` is a minimal realization and `w` minimizes `λₙ`.
pub fn check_min_certificate(
    x: &Realization,
    w: &WeightVector,
    g: &Graph,
    phi: &LengthSpec,
    tol: f64,
) -> Result<CertificateReport> {
    certificate(x, w, g, phi, tol, Sense::MinLambdaN)
}

/// Residuals of the optimality conditions for a solver result.
///
/// The primal value is recomputed from `w_star`; the dual value is the
/// reported `mu_final`, and the edge conditions on `dual_y` are checked
/// against it.
pub fn check_kkt(result: &OptResult, g: &Graph, phi: &LengthSpec, tol: f64) -> Result<CertificateReport> {
    let n = g.n();
    let w = &result.w_star;
    let y = &result.dual_y;
    if y.order() != n {
        return Err(Error::DimensionMismatch(format!("dual matrix has order {}, graph has {n} vertices", y.order())));
    }
    check_dims(&Matrix::zeros(n, 0), w, g, phi)?;
    let sense = result.sense;
    let mut report = CertificateReport::new(sense);

    let e = eigh(&laplacian(g, w)?)?;
    let lambda = match sense {
        Sense::MaxLambda2 => e.values[1],
        Sense::MinLambdaN => e.values[n - 1],
    };
    let t_violation = match sense {
        Sense::MaxLambda2 => positive(result.t_star - lambda),
        Sense::MinLambdaN => positive(lambda - result.t_star),
    };
    report.push("primal_eigenvalue", t_violation, tol);
    report.push("primal_weights", w.values().iter().map(|v| positive(-v)).fold(0.0, f64::max), tol);
    report.push("primal_normalization", (w.weighted_length(phi) - 1.0).abs(), tol);

    let y_min = eigh(y)?.values[0];
    report.push("dual_psd", positive(-y_min), tol);
    report.push("dual_trace", (y.frobenius_dot(&SymMatrix::centering(n)) - 1.0).abs(), tol);
    report.push("dual_gauge", y.quad_form(&vec![1.0; n]).abs(), tol);

    let mu = result.mu_final;
    let quads = g.edge_quad_forms(y);
    let edge_violation = quads
        .iter()
        .zip(phi.values())
        .map(|(q, p)| match sense {
            Sense::MaxLambda2 => positive(q - mu * p),
            Sense::MinLambdaN => positive(mu * p - q),
        })
        .fold(0.0, f64::max);
    report.push("dual_edges", edge_violation, tol);

    let cs = quads
        .iter()
        .zip(phi.values())
        .zip(w.values())
        .enumerate()
        .filter(|(k, _)| !result.is_zero_weight(*k))
        .map(|(_, ((q, p), wk))| (wk * (q - mu * p)).abs())
        .fold(0.0, f64::max);
    report.push("complementary_slackness", cs, tol);

    report.push("duality_gap", (lambda - mu).abs(), tol);
    // the dual value claimed must be what dual_y actually certifies
    let recomputed = dual_objective(g, phi, y, sense);
    report.push("dual_value", (recomputed - mu).abs(), tol);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Regularity {
    pub regular: bool,
    pub rank: usize,
    /// Unit-norm `w ≠ 0` with `Δ_w X ≈ 0` when `X` is not regular.
    pub witness: Option<Vec<f64>>,
}

/// Tests whether `w ↦ Δ_w X` is injective on `ℝ^m`.
///
/// `tol` is relative to the largest singular value of the map; the verdict
/// is therefore unchanged when `X` is scaled.
pub fn is_regular(x: &Matrix, g: &Graph, tol: f64) -> Result<Regularity> {
    if x.rows() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "coordinates have {} rows, graph has {} vertices",
            x.rows(),
            g.n()
        )));
    }
    let (n, d, m) = (g.n(), x.cols(), g.m());
    // column k is vec(b_k b_kᵗ X): rows h and t carry ±(x_h − x_t)
    let mut a = Matrix::zeros(n * d, m);
    for (k, &(t, h)) in g.edges().iter().enumerate() {
        for c in 0..d {
            let diff = x[(h, c)] - x[(t, c)];
            a[(h * d + c, k)] = diff;
            a[(t * d + c, k)] = -diff;
        }
    }
    let s = svd(&a)?;
    let rank = crate::denselin::rank_from_singular_values(&s.singular_values, tol);
    if rank == m {
        return Ok(Regularity { regular: true, rank, witness: None });
    }
    // right singular vectors are sorted by decreasing singular value
    let witness = s.v.column(m - 1);
    Ok(Regularity { regular: false, rank, witness: Some(witness) })
}

/// `is_regular` with the default relative rank tolerance.
pub fn is_regular_default(x: &Matrix, g: &Graph) -> Result<Regularity> {
    is_regular(x, g, DEFAULT_RANK_TOL)
}

/// `1/λ₂(Δ_w) − ‖X‖²_F` for a feasible pair; nonnegative by weak duality.
///
/// Returns infinity when `w` disconnects the graph.
pub fn weak_duality_gap(x: &Matrix, w: &WeightVector, g: &Graph, phi: &LengthSpec) -> Result<f64> {
    check_dims(x, w, g, phi)?;
    let centering = x.column_sums().iter().fold(0.0_f64, |a, s| a.max(s.abs()));
    if centering > FEASIBILITY_TOL {
        return Err(Error::InfeasibleInput(format!("X is not centered (|Xᵗ1| = {centering:e})")));
    }
    for (k, (l, p)) in g.squared_edge_lengths(x).iter().zip(phi.values()).enumerate() {
        if l - p > FEASIBILITY_TOL {
            return Err(Error::InfeasibleInput(format!("edge {k} has squared length {l} > {p}")));
        }
    }
    if let Some((k, v)) = w.values().iter().enumerate().find(|(_, v)| **v < -FEASIBILITY_TOL) {
        return Err(Error::InfeasibleInput(format!("weight {k} is negative ({v})")));
    }
    let norm = w.weighted_length(phi);
    if (norm - 1.0).abs() > FEASIBILITY_TOL {
        return Err(Error::InfeasibleInput(format!("wᵗφ = {norm}, expected 1")));
    }
    let lambda2 = eigh(&laplacian(g, w)?)?.values[1];
    if lambda2 <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / lambda2 - x.frobenius_norm_sq())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    fn polygon(n: usize, radius: f64) -> Matrix {
        Matrix::from_fn(n, 2, |i, j| {
            let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            radius * if j == 0 { a.cos() } else { a.sin() }
        })
    }

    fn wrap(g: &Graph, x: Matrix, sense: Sense) -> Realization {
        Realization::from_coords(g, g.phi(), x, sense).unwrap()
    }

    #[test]
    fn hexagon_certifies() {
        let g = generate(Family::Cycle(6)).unwrap();
        let w = WeightVector::uniform(g.phi());
        let r = check_max_certificate(&wrap(&g, polygon(6, 1.0), Sense::MaxLambda2), &w, &g, g.phi(), 1e-9).unwrap();
        assert!(r.overall, "{r:?}");
        assert_eq!(r.d_measured, Some(2));
    }

    #[test]
    fn shrunk_hexagon_fails_only_on_variance() {
        let g = generate(Family::Cycle(6)).unwrap();
        let w = WeightVector::uniform(g.phi());
        let r = check_max_certificate(&wrap(&g, polygon(6, 0.9), Sense::MaxLambda2), &w, &g, g.phi(), 1e-9).unwrap();
        let failed: Vec<_> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["total_variance"]);
    }

    #[test]
    fn square_certifies_for_cycle4() {
        let g = generate(Family::Cycle(4)).unwrap();
        let w = WeightVector::uniform(g.phi());
        // unit square: circumradius 1/√2
        let x = polygon(4, std::f64::consts::FRAC_1_SQRT_2);
        assert!((x.frobenius_norm_sq() - 2.0).abs() < 1e-14);
        let r = check_max_certificate(&wrap(&g, x, Sense::MaxLambda2), &w, &g, g.phi(), 1e-9).unwrap();
        assert!(r.overall, "{r:?}");
    }

    #[test]
    fn star_two_point_min_certificate() {
        let g = generate(Family::CompleteBipartite(1, 3)).unwrap();
        let w = WeightVector::uniform(g.phi());
        let x = Matrix::from_fn(4, 1, |i, _| if i == 0 { 0.75 } else { -0.25 });
        let r = check_min_certificate(&wrap(&g, x.clone(), Sense::MinLambdaN), &w, &g, g.phi(), 1e-9).unwrap();
        assert!(r.overall, "{r:?}");
        let r = check_min_certificate(&wrap(&g, x.scale(2.0), Sense::MinLambdaN), &w, &g, g.phi(), 1e-9).unwrap();
        assert!(!r.overall);
        assert!(r.condition("edge_lengths").unwrap().pass);
    }

    #[test]
    fn dimension_mismatch() {
        let g = generate(Family::Cycle(4)).unwrap();
        let r = Realization::from_coords(&g, g.phi(), Matrix::zeros(4, 1), Sense::MaxLambda2).unwrap();
        let w = WeightVector(vec![0.5; 2]);
        assert!(matches!(check_max_certificate(&r, &w, &g, g.phi(), 1e-9), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn regularity_examples() {
        let g6 = generate(Family::Cycle(6)).unwrap();
        assert!(is_regular_default(&polygon(6, 1.0), &g6).unwrap().regular);
        assert!(is_regular_default(&polygon(6, 1e-3), &g6).unwrap().regular);

        let g4 = generate(Family::Cycle(4)).unwrap();
        let x = Matrix::from_fn(4, 1, |i, _| if i % 2 == 0 { 0.5 } else { -0.5 });
        let reg = is_regular_default(&x, &g4).unwrap();
        assert!(!reg.regular);
        assert_eq!(reg.rank, 3);
        let w = WeightVector(reg.witness.unwrap());
        let lx = laplacian(&g4, &w).unwrap().to_matrix().matmul(&x);
        assert!(lx.max_abs() <= 1e-12);

        let zero = is_regular_default(&Matrix::zeros(4, 2), &g4).unwrap();
        assert!(!zero.regular && zero.rank == 0);
    }

    #[test]
    fn weak_duality_examples() {
        let g = generate(Family::Cycle(6)).unwrap();
        let hex = polygon(6, 1.0);
        let uniform = WeightVector::uniform(g.phi());
        assert!(weak_duality_gap(&hex, &uniform, &g, g.phi()).unwrap().abs() < 1e-12);
        let skewed = WeightVector(vec![0.3, 0.14, 0.14, 0.14, 0.14, 0.14]);
        assert!(weak_duality_gap(&hex, &skewed, &g, g.phi()).unwrap() > 1e-3);
        let zero = weak_duality_gap(&Matrix::zeros(6, 2), &uniform, &g, g.phi()).unwrap();
        assert!((zero - 6.0).abs() < 1e-9);
        let err = weak_duality_gap(&hex.scale(1.1), &uniform, &g, g.phi()).unwrap_err();
        assert!(matches!(err, Error::InfeasibleInput(_)));
    }
}
