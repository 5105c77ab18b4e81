//! Seeded graph generators and test corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {p} is not in [0, 1]")))
    }
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n >= min {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("n = {n} is below {min}")))
    }
}

/// `G(n, p)` with weights uniform in `1..=w_max`, pairs visited in
/// lexicographic order.
pub fn gnp(n: usize, p: f64, w_max: u64, seed: u64) -> Result<WeightedGraph> {
    check_n(n, 1)?;
    check_probability("p", p)?;
    if w_max == 0 {
        return Err(Error::InvalidParameter("w_max must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push(Edge::new(u, v, rng.random_range(1..=w_max)));
            }
        }
    }
    WeightedGraph::with_default_weights(n, edges)
}

/// A random spanning tree (each vertex attached to a uniformly random
/// earlier one) plus `G(n, p)` extra edges; weights in `1..=w_max`.
pub fn connected_gnp<R: Rng + ?Sized>(n: usize, p: f64, w_max: u64, rng: &mut R) -> WeightedGraph {
    let mut present = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        present[u][v] = true;
        edges.push(Edge::new(u, v, rng.random_range(1..=w_max)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present[u][v] && rng.random_bool(p) {
                edges.push(Edge::new(u, v, rng.random_range(1..=w_max)));
            }
        }
    }
    WeightedGraph::with_default_weights(n, edges).expect("generated graph is valid")
}

/// Known structure of a planted instance.
#[derive(Debug, Clone, Serialize)]
pub struct PlantedMeta {
    pub n: usize,
    pub p_cross: f64,
    pub p_noise: f64,
    pub seed: u64,
    /// `true` for vertices on the first side.
    pub sides: Vec<bool>,
    pub total_weight: u64,
    /// Weight of edges inside a side.
    pub noise_weight: u64,
    /// `noise_weight / total_weight`, an upper bound on `1 - maxcut`.
    pub noise_fraction: f64,
}

/// Unit-weight graph with a random planted bipartition: crossing pairs
/// appear with probability `p_cross`, same-side pairs with `p_noise`.
pub fn planted_bipartite(
    n: usize,
    p_cross: f64,
    p_noise: f64,
    seed: u64,
) -> Result<(WeightedGraph, PlantedMeta)> {
    check_n(n, 2)?;
    check_probability("p_cross", p_cross)?;
    check_probability("p_noise", p_noise)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sides: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let mut edges = Vec::new();
    let mut noise_weight = 0;
    for u in 0..n {
        for v in u + 1..n {
            let same = sides[u] == sides[v];
            if rng.random_bool(if same { p_noise } else { p_cross }) {
                edges.push(Edge::new(u, v, 1));
                noise_weight += same as u64;
            }
        }
    }
    let graph = WeightedGraph::with_default_weights(n, edges)?;
    let total_weight = graph.total_weight();
    let meta = PlantedMeta {
        n,
        p_cross,
        p_noise,
        seed,
        sides,
        total_weight,
        noise_weight,
        noise_fraction: if total_weight == 0 {
            0.0
        } else {
            noise_weight as f64 / total_weight as f64
        },
    };
    Ok((graph, meta))
}

/// Bipartite graph on sides of random sizes, connected through a spanning
/// tree and extra crossing edges with probability `p`; weights in
/// `1..=w_max`.
pub fn random_bipartite<R: Rng + ?Sized>(n: usize, p: f64, w_max: u64, rng: &mut R) -> WeightedGraph {
    assert!(n >= 2);
    let split = rng.random_range(1..n);
    let side = |v: usize| v < split;
    let mut present = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    // vertices 0 and `split` seed the tree; every later vertex attaches to a
    // random tree vertex on the other side
    let order: Vec<usize> = std::iter::once(0)
        .chain(std::iter::once(split))
        .chain((1..n).filter(|&v| v != split))
        .collect();
    for (pos, &v) in order.iter().enumerate().skip(1) {
        let candidates: Vec<usize> = order[..pos]
            .iter()
            .copied()
            .filter(|&u| side(u) != side(v))
            .collect();
        let u = candidates[rng.random_range(0..candidates.len())];
        present[u.min(v)][u.max(v)] = true;
        edges.push(Edge::new(u.min(v), u.max(v), rng.random_range(1..=w_max)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if side(u) != side(v) && !present[u][v] && rng.random_bool(p) {
                edges.push(Edge::new(u, v, rng.random_range(1..=w_max)));
            }
        }
    }
    WeightedGraph::with_default_weights(n, edges).expect("generated graph is valid")
}

pub fn cycle(n: usize) -> Result<WeightedGraph> {
    check_n(n, 3)?;
    let edges = (0..n).map(|i| Edge::new(i, (i + 1) % n, 1)).collect();
    WeightedGraph::with_default_weights(n, edges)
}

pub fn complete(n: usize) -> Result<WeightedGraph> {
    check_n(n, 1)?;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push(Edge::new(u, v, 1));
        }
    }
    WeightedGraph::with_default_weights(n, edges)
}

fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut components = n;
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components <= 1
}

/// Every connected labelled graph on `n` vertices with unit weights and
/// `b = deg`, in order of the edge-subset bitmask. `n = 1` gives nothing,
/// since a lone vertex has degree 0.
pub fn all_connected_graphs(n: usize) -> Vec<WeightedGraph> {
    assert!(n <= 6, "enumeration is exponential in n(n-1)/2");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    for mask in 1u64..1 << pairs.len() {
        let chosen: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| (mask >> i) & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        if is_connected(n, &chosen) {
            let edges = chosen.into_iter().map(|(u, v)| Edge::new(u, v, 1)).collect();
            out.push(WeightedGraph::with_degree_weights(n, edges).expect("connected"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_graph_counts() {
        // labelled connected graphs: 1, 4, 38, 728
        assert_eq!(all_connected_graphs(2).len(), 1);
        assert_eq!(all_connected_graphs(3).len(), 4);
        assert_eq!(all_connected_graphs(4).len(), 38);
        assert_eq!(all_connected_graphs(5).len(), 728);
    }

    #[test]
    fn small_families() {
        let c4 = cycle(4).unwrap();
        assert_eq!(c4.m(), 4);
        assert_eq!(c4.b(), &[2, 2, 2, 2]);
        let k3 = complete(3).unwrap();
        assert_eq!(k3.m(), 3);
        assert!(cycle(2).is_err());
    }

    #[test]
    fn generators_are_seeded() {
        assert_eq!(gnp(12, 0.3, 5, 4).unwrap(), gnp(12, 0.3, 5, 4).unwrap());
        assert!(gnp(12, 1.5, 5, 4).is_err());
        let (a, ma) = planted_bipartite(30, 0.3, 0.05, 9).unwrap();
        let (b, mb) = planted_bipartite(30, 0.3, 0.05, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(ma.noise_weight, mb.noise_weight);
    }

    #[test]
    fn planted_accounting() {
        let (g, meta) = planted_bipartite(30, 0.3, 0.05, 9).unwrap();
        let inside: u64 = g
            .edges()
            .iter()
            .filter(|e| meta.sides[e.u] == meta.sides[e.v])
            .map(|e| e.w)
            .sum();
        assert_eq!(inside, meta.noise_weight);
        assert_eq!(g.total_weight(), meta.total_weight);
        assert_eq!(g.n(), 30);
    }

    #[test]
    fn random_families_have_no_isolated_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..12 {
            let g = connected_gnp(n, 0.3, 5, &mut rng);
            assert!(g.has_degree_weights());
            let h = random_bipartite(n, 0.3, 3, &mut rng);
            assert!(h.has_degree_weights());
            assert!(crate::oracle::brute_beta(&h).unwrap().beta.is_zero());
        }
    }
}
