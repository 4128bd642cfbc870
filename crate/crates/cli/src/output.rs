//! Result and report files.
//!
//! Floats are written in the shortest form that parses back to the same
//! `f64`, so every file is byte-identical across runs and round-trips exactly.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use graphreal_core::certify::CertificateReport;
use graphreal_core::denselin::Matrix;
use graphreal_core::eopt::{OptResult, Sense, TraceEntry};
use graphreal_core::extract::Realization;
use serde::Serialize;

/// Both halves of the optimality evidence for a solve.
#[derive(Serialize, Debug, Clone)]
pub struct Certificate {
    pub overall: bool,
    /// `X` and `w` checked against each other: feasibility, multiplicity, `λ‖X‖² = 1`.
    pub realization: CertificateReport,
    /// Primal and dual residuals of the solver output.
    pub optimality: CertificateReport,
}

impl Certificate {
    pub fn new(realization: CertificateReport, optimality: CertificateReport) -> Self {
        Certificate { overall: realization.overall && optimality.overall, realization, optimality }
    }
}

#[derive(Serialize, Debug)]
pub struct ResultFile<'a> {
    pub sense: Sense,
    pub lambda_star: f64,
    pub w: &'a [f64],
    pub zero_weight_edges: &'a [usize],
    pub d: usize,
    #[serde(rename = "X")]
    pub x: Vec<Vec<f64>>,
    pub total_variance: f64,
    pub certificate: &'a Certificate,
    pub solver_trace: &'a [TraceEntry],
}

impl<'a> ResultFile<'a> {
    pub fn new(result: &'a OptResult, realization: &Realization, certificate: &'a Certificate) -> Self {
        ResultFile {
            sense: result.sense,
            lambda_star: result.lambda_star,
            w: result.w_star.values(),
            zero_weight_edges: &result.zero_weight_edges,
            d: realization.d(),
            x: rows(&realization.x),
            total_variance: realization.total_variance(),
            certificate,
            solver_trace: &result.trace,
        }
    }
}

pub fn rows(x: &Matrix) -> Vec<Vec<f64>> {
    (0..x.rows()).map(|i| x.row(i).to_vec()).collect()
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
