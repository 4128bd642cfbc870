//! Extremal graph realizations from optimal graph Laplacian eigenvalues.

pub mod certify;
pub mod denselin;
pub mod eopt;
pub mod error;
pub mod extract;
pub mod graph;

pub use error::{Error, Result};
