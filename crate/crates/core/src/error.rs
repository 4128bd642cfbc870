use thiserror::Error;

use crate::eopt::OptResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph must have at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("graph is disconnected ({components} components)")]
    DisconnectedGraph { components: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex index {index} out of range for n = {n}")]
    BadIndex { index: usize, n: usize },
    #[error("squared edge length {value} at edge {edge} must be finite and nonnegative")]
    NegativePhi { edge: usize, value: f64 },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameter for {family}: {reason}")]
    BadParam { family: String, reason: String },
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("solver did not converge after {iterations} outer iterations")]
    SolverStalled { iterations: usize, best: Box<OptResult> },
    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("newton step rejected after {halvings} halvings")]
    StepRejected { halvings: usize },
    #[error("problem is infeasible: {0}")]
    Infeasible(String),
    #[error("no eigenvalue within tolerance of {lambda}")]
    EmptyEigenspace { lambda: f64 },
    #[error("gram refinement infeasible (residual {residual:e})")]
    InfeasibleRefinement { residual: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("infeasible input: {0}")]
    InfeasibleInput(String),
    #[error("malformed graph file: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
