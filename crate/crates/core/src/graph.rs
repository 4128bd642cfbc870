//! Graphs, squared edge-length specifications, incidence matrices and
//! weighted Laplacians, plus a catalog of named graph families.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::denselin::{Matrix, SymMatrix};
use crate::error::{Error, Result};

/// Squared edge lengths `φ`, one per edge, all finite and nonnegative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LengthSpec(Vec<f64>);

impl LengthSpec {
    pub fn new(phi: Vec<f64>) -> Result<Self> {
        if let Some((edge, &value)) =
            phi.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::NegativePhi { edge, value });
        }
        Ok(LengthSpec(phi))
    }

    /// All ones: the unit-distance case.
    pub fn unit(m: usize) -> Self {
        LengthSpec(vec![1.0; m])
    }

    pub fn uniform(m: usize, value: f64) -> Result<Self> {
        LengthSpec::new(vec![value; m])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn check_len(&self, m: usize) -> Result<()> {
        if self.0.len() != m {
            return Err(Error::LengthMismatch { expected: m, got: self.0.len() });
        }
        Ok(())
    }
}

/// Nonnegative edge weights `w`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<f64>);

impl WeightVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Uniform weights with `wᵗφ = 1`.
    pub fn uniform(phi: &LengthSpec) -> Self {
        let total = phi.total();
        WeightVector(vec![1.0 / total; phi.len()])
    }

    /// `wᵗφ`.
    pub fn weighted_length(&self, phi: &LengthSpec) -> f64 {
        self.0.iter().zip(phi.values()).map(|(w, p)| w * p).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        WeightVector(self.0.iter().map(|w| c * w).collect())
    }
}

/// A connected simple undirected graph with squared edge-length spec.
///
/// Edges are stored as `(tail, head)` with `tail < head`, sorted
/// lexicographically. The incidence row of edge `k` is `+1` at the head and
/// `-1` at the tail.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    phi: LengthSpec,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Normalizes and validates an edge list. `phi` defaults to all ones and is
    /// permuted along with the edges when they are sorted.
    pub fn from_edge_list(
        n: usize,
        edges: &[(usize, usize)],
        phi: Option<&[f64]>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewVertices(n));
        }
        if let Some(phi) = phi {
            if phi.len() != edges.len() {
                return Err(Error::LengthMismatch { expected: edges.len(), got: phi.len() });
            }
        }
        let phi_in = match phi {
            Some(p) => LengthSpec::new(p.to_vec())?,
            None => LengthSpec::unit(edges.len()),
        };

        let mut seen = BTreeSet::new();
        let mut tagged = Vec::with_capacity(edges.len());
        for (k, &(a, b)) in edges.iter().enumerate() {
            for index in [a, b] {
                if index >= n {
                    return Err(Error::BadIndex { index, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
            tagged.push((e, phi_in.values()[k]));
        }
        tagged.sort_by(|x, y| x.0.cmp(&y.0));
        let edges: Vec<_> = tagged.iter().map(|t| t.0).collect();
        let phi = LengthSpec(tagged.iter().map(|t| t.1).collect());

        let components = count_components(n, &edges);
        if components != 1 {
            return Err(Error::DisconnectedGraph { components });
        }
        Ok(Graph { n, edges, phi, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Replaces the squared edge lengths.
    pub fn with_phi(mut self, phi: LengthSpec) -> Result<Self> {
        phi.check_len(self.m())?;
        self.phi = phi;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn phi(&self) -> &LengthSpec {
        &self.phi
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Index of edge `{a, b}` if present.
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    /// `b_kᵗ v = v[head] − v[tail]`.
    #[inline]
    pub fn edge_diff(&self, k: usize, v: &[f64]) -> f64 {
        let (t, h) = self.edges[k];
        v[h] - v[t]
    }

    /// `‖Xᵗ b_k‖²` for every edge.
    pub fn squared_edge_lengths(&self, x: &Matrix) -> Vec<f64> {
        self.edges
            .iter()
            .map(|&(t, h)| x.row(h).iter().zip(x.row(t)).map(|(a, b)| (a - b) * (a - b)).sum())
            .collect()
    }

    /// `b_kᵗ A b_k` for every edge.
    pub fn edge_quad_forms(&self, a: &SymMatrix) -> Vec<f64> {
        self.edges
            .iter()
            .map(|&(t, h)| a.get(h, h) + a.get(t, t) - 2.0 * a.get(h, t))
            .collect()
    }

    pub fn to_json(&self) -> GraphFile {
        GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            phi: Some(self.phi.values().to_vec()),
            labels: self.labels.clone(),
            extra: BTreeMap::new(),
        }
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json())?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(s)?;
        file.into_graph()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Graph::from_json_str(&std::fs::read_to_string(path)?)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.m())
    }
}

/// On-disk graph format: `{"n", "edges", "phi"?, "labels"?}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(flatten, skip_serializing)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<Graph> {
        for key in self.extra.keys() {
            warn!("ignoring unknown key `{key}` in graph file");
        }
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::from_edge_list(self.n, &edges, self.phi.as_deref())?;
        match self.labels {
            Some(l) => g.with_labels(l),
            None => Ok(g),
        }
    }
}

fn count_components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut components = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    components
}

/// Arc-vertex incidence matrix `B` (m×n).
pub fn incidence_matrix(g: &Graph) -> Matrix {
    let mut b = Matrix::zeros(g.m(), g.n());
    for (k, &(t, h)) in g.edges().iter().enumerate() {
        b[(k, t)] = -1.0;
        b[(k, h)] = 1.0;
    }
    b
}

/// Weighted Laplacian `Δ_w = Bᵗ diag(w) B`.
pub fn laplacian(g: &Graph, w: &WeightVector) -> Result<SymMatrix> {
    if w.len() != g.m() {
        return Err(Error::LengthMismatch { expected: g.m(), got: w.len() });
    }
    let mut l = SymMatrix::zeros(g.n());
    for (&(t, h), &wk) in g.edges().iter().zip(w.values()) {
        l.add_to(t, t, wk);
        l.add_to(h, h, wk);
        l.add_to(h, t, -wk);
    }
    Ok(l)
}

/// Named graph families with their parameters.
///
/// Vertex numbering per family:
/// - `Cycle(n)`: edges `i - i+1 mod n`.
/// - `Path(n)`: edges `i - i+1`.
/// - `Grid(p, q)`: vertex `r·q + c` for row `r < p`, column `c < q`.
/// - `CompleteBipartite(p, q)`: parts `0..p` and `p..p+q`.
/// - `CircularLadder(n)`: outer cycle `0..n`, inner cycle `n..2n`, rungs `i - i+n`.
/// - `Petersen`: outer 5-cycle `0..5`, spokes `i - i+5`, inner pentagram `5+i - 5+(i+2) mod 5`.
/// - `House`: square `0` bottom-left, `1` bottom-right, `2` top-right, `3` top-left, roof apex `4`.
/// - `HouseX`: `House` plus the diagonals `0 - 2` and `1 - 3`.
/// - `Tetrahedral`: `Complete(4)`.
/// - `Cube`: vertices are 3-bit labels, adjacent when they differ in one bit.
/// - `Octahedral`: antipodal pairs `(0,1)`, `(2,3)`, `(4,5)`; every other pair is an edge.
/// - `Dodecahedral`: LCF notation `[10,7,4,-4,-7,10,-4,7,-7,4]^2` on the Hamiltonian cycle `0..20`.
/// - `Icosahedral`: vertices in the order `(0,±1,±g)`, `(±1,±g,0)`, `(±g,0,±1)` with `g` the
///   golden ratio (signs enumerated `(+,+), (+,−), (−,+), (−,−)`); edges join vertices at distance 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Cycle(usize),
    Path(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    Grid(usize, usize),
    CircularLadder(usize),
    Petersen,
    House,
    HouseX,
    Tetrahedral,
    Cube,
    Octahedral,
    Dodecahedral,
    Icosahedral,
}

impl Family {
    pub const NAMES: [&'static str; 14] = [
        "cycle",
        "path",
        "complete",
        "complete_bipartite",
        "grid",
        "circular_ladder",
        "petersen",
        "house",
        "house_x",
        "tetrahedral",
        "cube",
        "octahedral",
        "dodecahedral",
        "icosahedral",
    ];

    /// Resolves a family name with optional `n`, `p`, `q` parameters.
    pub fn from_name(
        name: &str,
        n: Option<usize>,
        p: Option<usize>,
        q: Option<usize>,
    ) -> Result<Self> {
        let need = |v: Option<usize>, what: &str| {
            v.ok_or_else(|| Error::BadParam {
                family: name.to_string(),
                reason: format!("missing parameter {what}"),
            })
        };
        let key = name.to_ascii_lowercase().replace('-', "_");
        Ok(match key.as_str() {
            "cycle" => Family::Cycle(need(n, "n")?),
            "path" => Family::Path(need(n, "n")?),
            "complete" => Family::Complete(need(n, "n")?),
            "complete_bipartite" => Family::CompleteBipartite(need(p, "p")?, need(q, "q")?),
            "star" => Family::CompleteBipartite(1, need(n, "n")?),
            "grid" => Family::Grid(need(p, "p")?, need(q, "q")?),
            "circular_ladder" => Family::CircularLadder(need(n, "n")?),
            "petersen" => Family::Petersen,
            "house" => Family::House,
            "house_x" => Family::HouseX,
            "tetrahedral" => Family::Tetrahedral,
            "cube" => Family::Cube,
            "octahedral" => Family::Octahedral,
            "dodecahedral" => Family::Dodecahedral,
            "icosahedral" => Family::Icosahedral,
            _ => return Err(Error::UnknownFamily(name.to_string())),
        })
    }
}

fn bad(family: &str, reason: &str) -> Error {
    Error::BadParam { family: family.to_string(), reason: reason.to_string() }
}

/// Builds a catalog graph with unit squared edge lengths.
pub fn generate(family: Family) -> Result<Graph> {
    let (n, edges): (usize, Vec<(usize, usize)>) = match family {
        Family::Cycle(n) => {
            if n < 3 {
                return Err(bad("cycle", "n must be at least 3"));
            }
            (n, (0..n).map(|i| (i, (i + 1) % n)).collect())
        }
        Family::Path(n) => {
            if n < 2 {
                return Err(bad("path", "n must be at least 2"));
            }
            (n, (0..n - 1).map(|i| (i, i + 1)).collect())
        }
        Family::Complete(n) => {
            if n < 2 {
                return Err(bad("complete", "n must be at least 2"));
            }
            (n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect())
        }
        Family::CompleteBipartite(p, q) => {
            if p < 1 || q < 1 {
                return Err(bad("complete_bipartite", "both parts must be nonempty"));
            }
            (p + q, (0..p).flat_map(|i| (p..p + q).map(move |j| (i, j))).collect())
        }
        Family::Grid(p, q) => {
            if p < 1 || q < 1 || p * q < 2 {
                return Err(bad("grid", "need p, q >= 1 and at least 2 vertices"));
            }
            let mut e = Vec::new();
            for r in 0..p {
                for c in 0..q {
                    let v = r * q + c;
                    if c + 1 < q {
                        e.push((v, v + 1));
                    }
                    if r + 1 < p {
                        e.push((v, v + q));
                    }
                }
            }
            (p * q, e)
        }
        Family::CircularLadder(n) => {
            if n < 3 {
                return Err(bad("circular_ladder", "n must be at least 3"));
            }
            let mut e = Vec::new();
            for i in 0..n {
                e.push((i, (i + 1) % n));
                e.push((n + i, n + (i + 1) % n));
                e.push((i, i + n));
            }
            (2 * n, e)
        }
        Family::Petersen => {
            let mut e = Vec::new();
            for i in 0..5 {
                e.push((i, (i + 1) % 5));
                e.push((i, i + 5));
                e.push((5 + i, 5 + (i + 2) % 5));
            }
            (10, e)
        }
        Family::House => (5, vec![(0, 1), (1, 2), (2, 3), (0, 3), (2, 4), (3, 4)]),
        Family::HouseX => {
            (5, vec![(0, 1), (1, 2), (2, 3), (0, 3), (2, 4), (3, 4), (0, 2), (1, 3)])
        }
        Family::Tetrahedral => return generate(Family::Complete(4)),
        Family::Cube => {
            let mut e = Vec::new();
            for v in 0..8usize {
                for bit in 0..3 {
                    let u = v ^ (1 << bit);
                    if v < u {
                        e.push((v, u));
                    }
                }
            }
            (8, e)
        }
        Family::Octahedral => {
            let mut e = Vec::new();
            for i in 0..6 {
                for j in i + 1..6 {
                    if !(i % 2 == 0 && j == i + 1) {
                        e.push((i, j));
                    }
                }
            }
            (6, e)
        }
        Family::Dodecahedral => {
            let lcf = [10i64, 7, 4, -4, -7, 10, -4, 7, -7, 4];
            let n = 20usize;
            let mut set = BTreeSet::new();
            for i in 0..n {
                set.insert(ordered(i, (i + 1) % n));
                let j = (i as i64 + lcf[i % lcf.len()]).rem_euclid(n as i64) as usize;
                set.insert(ordered(i, j));
            }
            (n, set.into_iter().collect())
        }
        Family::Icosahedral => {
            let g = (1.0 + 5f64.sqrt()) / 2.0;
            let signs = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
            let mut pts: Vec<[f64; 3]> = Vec::with_capacity(12);
            for &(a, b) in &signs {
                pts.push([0.0, a, b * g]);
            }
            for &(a, b) in &signs {
                pts.push([a, b * g, 0.0]);
            }
            for &(a, b) in &signs {
                pts.push([a * g, 0.0, b]);
            }
            let mut e = Vec::new();
            for i in 0..12 {
                for j in i + 1..12 {
                    let d2: f64 = (0..3).map(|c| (pts[i][c] - pts[j][c]).powi(2)).sum();
                    if (d2 - 4.0).abs() < 1e-9 {
                        e.push((i, j));
                    }
                }
            }
            (12, e)
        }
    };
    Graph::from_edge_list(n, &edges, None)
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}
