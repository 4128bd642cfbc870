//! Randomized property checks on one graph.

use anyhow::Result;
use graphreal_core::certify::{check_kkt, check_max_certificate, check_min_certificate, weak_duality_gap};
use graphreal_core::denselin::{eigh, Matrix};
use graphreal_core::eopt::{extreme_eigenvalue, solve, Sense, SolverOptions};
use graphreal_core::extract::{realize, Realization, DEFAULT_GROUP_TOL};
use graphreal_core::graph::{laplacian, Graph, WeightVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Serialize, Debug)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub trials: usize,
    /// Worst value seen; its meaning is given by `detail`.
    pub worst: f64,
    pub detail: String,
}

#[derive(Serialize, Debug)]
pub struct PropertyReport {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub overall: bool,
    pub checks: Vec<Check>,
}

/// Random point of `{w ≥ 0, wᵗφ = 1}` with exponential coordinates.
fn random_weights(rng: &mut ChaCha8Rng, g: &Graph) -> WeightVector {
    let raw: Vec<f64> = (0..g.m()).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = raw.iter().zip(g.phi().values()).map(|(w, p)| w * p).sum();
    WeightVector(raw.into_iter().map(|w| w / total).collect())
}

/// Random centered coordinates scaled so the longest edge (relative to φ) is tight.
fn random_feasible_coords(rng: &mut ChaCha8Rng, g: &Graph, d: usize) -> Matrix {
    let n = g.n();
    let mut x = Matrix::from_fn(n, d, |_, _| rng.gen_range(-1.0..1.0));
    let sums = x.column_sums();
    for i in 0..n {
        for c in 0..d {
            x[(i, c)] -= sums[c] / n as f64;
        }
    }
    let worst = g
        .squared_edge_lengths(&x)
        .iter()
        .zip(g.phi().values())
        .map(|(l, p)| if *p > 0.0 { l / p } else if *l > 0.0 { f64::INFINITY } else { 0.0 })
        .fold(0.0, f64::max);
    if worst.is_finite() && worst > 0.0 {
        // a hair inside the boundary so rounding never makes it infeasible
        x.scale((1.0 - 1e-12) / worst.sqrt())
    } else {
        Matrix::zeros(n, d)
    }
}

fn weighted_perturbation(rng: &mut ChaCha8Rng, len: usize, size: f64) -> Vec<f64> {
    let e: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = e.iter().map(|v| v * v).sum::<f64>().sqrt();
    e.iter().map(|v| v * size / norm).collect()
}

pub fn run(g: &Graph, seed: u64, samples: usize, opts: &SolverOptions) -> Result<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let mut worst = f64::INFINITY;
    for _ in 0..samples {
        let w = random_weights(&mut rng, g);
        let d = rng.gen_range(1..=3);
        let x = random_feasible_coords(&mut rng, g, d);
        worst = worst.min(weak_duality_gap(&x, &w, g, g.phi())?);
    }
    checks.push(Check {
        name: "weak_duality",
        pass: worst >= -1e-9,
        trials: samples,
        worst,
        detail: "smallest 1/λ₂(w) − ‖X‖² over random feasible pairs".into(),
    });

    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let w1 = random_weights(&mut rng, g);
        let w2 = random_weights(&mut rng, g);
        let mid = WeightVector(w1.values().iter().zip(w2.values()).map(|(a, b)| 0.5 * (a + b)).collect());
        let ev = |w: &WeightVector, s| extreme_eigenvalue(g, w, s);
        let (a, b, c) = (ev(&w1, Sense::MaxLambda2)?, ev(&w2, Sense::MaxLambda2)?, ev(&mid, Sense::MaxLambda2)?);
        worst = worst.max(0.5 * (a + b) - c);
        let (a, b, c) = (ev(&w1, Sense::MinLambdaN)?, ev(&w2, Sense::MinLambdaN)?, ev(&mid, Sense::MinLambdaN)?);
        worst = worst.max(c - 0.5 * (a + b));
    }
    checks.push(Check {
        name: "concavity",
        pass: worst <= 1e-10,
        trials: 100,
        worst,
        detail: "largest midpoint violation of λ₂ concavity or λₙ convexity".into(),
    });

    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let w = random_weights(&mut rng, g);
        let c: f64 = rng.gen_range(0.1..10.0);
        let base = eigh(&laplacian(g, &w)?)?.values;
        let scaled = eigh(&laplacian(g, &w.scaled(c))?)?.values;
        for (x, y) in base.iter().zip(&scaled) {
            worst = worst.max((y - c * x).abs() / (1.0 + (c * x).abs()));
        }
    }
    checks.push(Check {
        name: "homogeneity",
        pass: worst <= 1e-10,
        trials: 10,
        worst,
        detail: "largest relative |λᵢ(cw) − cλᵢ(w)|".into(),
    });

    for sense in [Sense::MaxLambda2, Sense::MinLambdaN] {
        let result = solve(g, g.phi(), sense, opts)?;
        let kkt = check_kkt(&result, g, g.phi(), 10.0 * opts.tol_gap)?;
        let cs = kkt.condition("complementary_slackness").expect("kkt report has a slackness row");
        checks.push(Check {
            name: match sense {
                Sense::MaxLambda2 => "complementary_slackness_max",
                Sense::MinLambdaN => "complementary_slackness_min",
            },
            pass: cs.pass,
            trials: 1,
            worst: cs.residual,
            detail: format!("max |w_k (b_kᵗYb_k − μφ_k)| against {:e}", cs.tolerance),
        });

        let realization = realize(g, g.phi(), &result, DEFAULT_GROUP_TOL)?;
        let certify = |r: &Realization, w: &WeightVector| match sense {
            Sense::MaxLambda2 => check_max_certificate(r, w, g, g.phi(), 1e-6),
            Sense::MinLambdaN => check_min_certificate(r, w, g, g.phi(), 1e-6),
        };
        let baseline = certify(&realization, &result.w_star)?.overall;
        let mut accepted = 0;
        let trials = 20;
        for trial in 0..trials {
            let x = &realization.x;
            let w = result.w_star.values();
            let px = if trial % 3 != 1 {
                let e = weighted_perturbation(&mut rng, x.rows() * x.cols(), 1e-2 * x.frobenius_norm());
                Matrix::from_fn(x.rows(), x.cols(), |i, j| x[(i, j)] + e[i * x.cols() + j])
            } else {
                x.clone()
            };
            let pw = if trial % 3 != 0 {
                let size = 1e-2 * w.iter().map(|v| v * v).sum::<f64>().sqrt();
                let e = weighted_perturbation(&mut rng, w.len(), size);
                WeightVector(w.iter().zip(&e).map(|(a, b)| a + b).collect())
            } else {
                result.w_star.clone()
            };
            let r = Realization::from_coords(g, g.phi(), px, sense)?;
            if certify(&r, &pw)?.overall {
                accepted += 1;
            }
        }
        checks.push(Check {
            name: match sense {
                Sense::MaxLambda2 => "perturbation_drill_max",
                Sense::MinLambdaN => "perturbation_drill_min",
            },
            pass: baseline && accepted == 0,
            trials,
            worst: accepted as f64,
            detail: format!(
                "perturbations of relative size 1e-2 still certified (unperturbed certifies: {baseline})"
            ),
        });
    }

    let overall = checks.iter().all(|c| c.pass);
    Ok(PropertyReport { seed, n: g.n(), m: g.m(), overall, checks })
}
