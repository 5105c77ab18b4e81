//! Weighted graphs, sign vectors and exact bipartiteness-ratio evaluation.

mod auxiliary;
mod sign;

pub use auxiliary::{aux_cut_ratio, build_auxiliary_graph, AuxEdge, AuxiliaryGraph, Orientation};
pub use sign::{tripartition, SignVector, Tripartition};

use crate::error::{Error, Result};
use crate::ratio::{Ratio, RATIO_LIMIT};

/// An undirected edge `{u, v}` with positive integer weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: u64,
}

impl Edge {
    pub fn new(u: usize, v: usize, w: u64) -> Self {
        Edge { u, v, w }
    }
}

/// Undirected multigraph with positive edge weights `w` and positive vertex
/// weights `b`.
///
/// Vertices are `0..n`. Parallel edges stay distinct; self-loops are
/// rejected. Weighted degrees are cached at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    b: Vec<u64>,
    deg: Vec<u64>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<Edge>, b: Vec<u64>) -> Result<Self> {
        if b.len() != n {
            return Err(Error::InvalidGraph(format!(
                "{} vertex weights for {} vertices",
                b.len(),
                n
            )));
        }
        let deg = degrees(n, &edges)?;
        if let Some(i) = b.iter().position(|&bi| bi == 0) {
            return Err(Error::InvalidGraph(format!(
                "vertex {i} has weight 0; vertex weights must be positive"
            )));
        }
        let total_b = b.iter().try_fold(0u64, |acc, &bi| acc.checked_add(bi));
        match total_b {
            Some(t) if t < RATIO_LIMIT => {}
            _ => return Err(Error::InvalidGraph("total vertex weight exceeds 2^63".into())),
        }
        Ok(WeightedGraph { n, edges, b, deg })
    }

    /// Uses `b = deg`. Isolated vertices would get weight 0 and are rejected.
    pub fn with_degree_weights(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let deg = degrees(n, &edges)?;
        if let Some(i) = deg.iter().position(|&d| d == 0) {
            return Err(Error::InvalidGraph(format!(
                "vertex {i} is isolated; supply explicit vertex weights"
            )));
        }
        Self::new(n, edges, deg)
    }

    /// `b = deg`, except that isolated vertices get weight 1.
    pub fn with_default_weights(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let b = degrees(n, &edges)?.into_iter().map(|d| d.max(1)).collect();
        Self::new(n, edges, b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }

    pub fn deg(&self) -> &[u64] {
        &self.deg
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn total_b(&self) -> u64 {
        self.b.iter().sum()
    }

    /// Same edges, new vertex weights.
    pub fn with_weights(&self, b: Vec<u64>) -> Result<Self> {
        Self::new(self.n, self.edges.clone(), b)
    }

    pub fn has_degree_weights(&self) -> bool {
        self.b == self.deg
    }
}

fn degrees(n: usize, edges: &[Edge]) -> Result<Vec<u64>> {
    let mut deg = vec![0u64; n];
    let mut total: u64 = 0;
    for (id, e) in edges.iter().enumerate() {
        if e.u >= n || e.v >= n {
            return Err(Error::InvalidGraph(format!(
                "edge {id} endpoint out of range for n = {n}"
            )));
        }
        if e.u == e.v {
            return Err(Error::InvalidGraph(format!("edge {id} is a self-loop")));
        }
        if e.w == 0 {
            return Err(Error::InvalidGraph(format!("edge {id} has weight 0")));
        }
        total = total
            .checked_add(e.w)
            .filter(|t| t.checked_mul(2).is_some_and(|d| d < RATIO_LIMIT))
            .ok_or_else(|| Error::InvalidGraph("total edge weight exceeds 2^62".into()))?;
        deg[e.u] += e.w;
        deg[e.v] += e.w;
    }
    Ok(deg)
}

/// `Σ_e w(e)|x_u + x_v| / Σ_i b(i)|x_i|`, exactly.
pub fn evaluate_beta(graph: &WeightedGraph, x: &SignVector) -> Result<Ratio> {
    check_length(graph.n(), x)?;
    beta_of_edges(
        graph.edges().iter().map(|e| (e.u, e.v, e.w)),
        graph.b(),
        x,
    )
}

/// Bipartiteness ratio of a sign vector over an arbitrary weighted edge list.
///
/// Self-loops `(i, i, w)` are allowed and contribute `2w|x_i|`; this is how a
/// demand multigraph is scored.
pub fn beta_of_edges<I>(edges: I, b: &[u64], x: &SignVector) -> Result<Ratio>
where
    I: IntoIterator<Item = (usize, usize, u64)>,
{
    if b.len() != x.len() {
        return Err(Error::LengthMismatch {
            expected: b.len(),
            got: x.len(),
        });
    }
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let s = x.as_slice();
    let num: u64 = edges
        .into_iter()
        .map(|(u, v, w)| w * (s[u] + s[v]).unsigned_abs() as u64)
        .sum();
    let den: u64 = b
        .iter()
        .zip(s)
        .filter(|(_, &xi)| xi != 0)
        .map(|(&bi, _)| bi)
        .sum();
    Ok(Ratio::new(num, den))
}

pub(crate) fn check_length(n: usize, x: &SignVector) -> Result<()> {
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: x.len(),
        });
    }
    Ok(())
}
