//! Graph sources, length overrides and the weight/coordinate files read by
//! `certify` and `render`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use graphreal_core::denselin::Matrix;
use graphreal_core::graph::{generate, Family, Graph, LengthSpec, WeightVector};
use serde_json::Value;

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// Built-in family: cycle, path, complete, complete_bipartite, star, grid,
    /// circular_ladder, petersen, house, house_x, tetrahedral, cube,
    /// octahedral, dodecahedral, icosahedral
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    /// Graph JSON file: {"n", "edges", "phi"?, "labels"?}
    #[arg(long)]
    pub graph: Option<PathBuf>,

    /// JSON array of squared edge lengths (or an object with a "phi" key)
    #[arg(long, group = "phi_source")]
    pub phi: Option<PathBuf>,
    /// Same squared length on every edge
    #[arg(long, group = "phi_source")]
    pub phi_uniform: Option<f64>,
    /// Comma-separated squared lengths in edge order
    #[arg(long, group = "phi_source", value_delimiter = ',')]
    pub phi_list: Option<Vec<f64>>,
}

impl GraphArgs {
    /// The graph with any length override applied.
    pub fn load(&self) -> Result<Graph> {
        let g = match (&self.family, &self.graph) {
            (Some(name), None) => generate(Family::from_name(name, self.n, self.p, self.q)?)?,
            (None, Some(path)) => Graph::load(path).with_context(|| format!("reading {}", path.display()))?,
            _ => bail!("give exactly one of --family or --graph"),
        };
        let phi = if let Some(path) = &self.phi {
            Some(read_vector(path, "phi")?)
        } else if let Some(v) = self.phi_uniform {
            Some(vec![v; g.m()])
        } else {
            self.phi_list.clone()
        };
        Ok(match phi {
            Some(values) => g.with_phi(LengthSpec::new(values)?)?,
            None => g,
        })
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A bare JSON value, or the entry `key` of an object (so a result file can be passed directly).
fn unwrap_key(value: Value, key: &str, path: &Path) -> Result<Value> {
    match value {
        Value::Object(mut map) => {
            map.remove(key).with_context(|| format!("{} has no \"{key}\" entry", path.display()))
        }
        other => Ok(other),
    }
}

pub fn read_vector(path: &Path, key: &str) -> Result<Vec<f64>> {
    let value = unwrap_key(read_json(path)?, key, path)?;
    serde_json::from_value(value).with_context(|| format!("{}: expected an array of numbers", path.display()))
}

pub fn read_weights(path: &Path) -> Result<WeightVector> {
    Ok(WeightVector(read_vector(path, "w")?))
}

/// Coordinates as rows, one per vertex.
pub fn read_coords(path: &Path) -> Result<Matrix> {
    let value = unwrap_key(read_json(path)?, "X", path)?;
    let rows: Vec<Vec<f64>> = serde_json::from_value(value)
        .with_context(|| format!("{}: expected an array of coordinate rows", path.display()))?;
    Ok(Matrix::from_rows(&rows)?)
}
