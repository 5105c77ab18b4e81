//! Recursive bipartition for max cut.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{approx_bipartiteness, GameParams};
use crate::graph::{tripartition, Edge, WeightedGraph};
use crate::ratio::Ratio;

/// `w(E(S, V \ S)) / w(E)`.
pub fn cut_value(graph: &WeightedGraph, side: &[usize]) -> Result<Ratio> {
    if graph.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let member = membership(graph.n(), side);
    Ok(Ratio::new(crossing_weight(graph.edges(), &member), graph.total_weight()))
}

fn membership(n: usize, set: &[usize]) -> Vec<bool> {
    let mut member = vec![false; n];
    for &i in set {
        member[i] = true;
    }
    member
}

fn crossing_weight(edges: &[Edge], member: &[bool]) -> u64 {
    edges
        .iter()
        .filter(|e| member[e.u] != member[e.v])
        .map(|e| e.w)
        .sum()
}

/// Subgraph induced by a vertex set, with `b` recomputed as degrees.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    /// Vertices of `Z` with at least one edge inside `Z`, renumbered.
    pub graph: WeightedGraph,
    /// `ids[new] = original`.
    pub ids: Vec<usize>,
    /// Vertices of `Z` without edges inside `Z`, original ids.
    pub isolated: Vec<usize>,
}

/// Vertices isolated inside `Z` would get `b = 0`, so they are split off.
pub fn induced_subgraph(graph: &WeightedGraph, zone: &[usize]) -> InducedSubgraph {
    let inside = membership(graph.n(), zone);
    let kept: Vec<&Edge> = graph
        .edges()
        .iter()
        .filter(|e| inside[e.u] && inside[e.v])
        .collect();
    let mut touched = vec![false; graph.n()];
    for e in &kept {
        touched[e.u] = true;
        touched[e.v] = true;
    }
    let mut zone: Vec<usize> = zone.to_vec();
    zone.sort_unstable();
    zone.dedup();
    let (ids, isolated): (Vec<usize>, Vec<usize>) = zone.into_iter().partition(|&v| touched[v]);
    let mut local = vec![usize::MAX; graph.n()];
    for (new, &old) in ids.iter().enumerate() {
        local[old] = new;
    }
    let edges = kept
        .iter()
        .map(|e| Edge::new(local[e.u], local[e.v], e.w))
        .collect();
    InducedSubgraph {
        graph: WeightedGraph::with_degree_weights(ids.len(), edges)
            .expect("every kept vertex has an edge"),
        ids,
        isolated,
    }
}

/// Solver settings shared by every level.
#[derive(Debug, Clone, Serialize)]
pub struct MaxCutParams {
    pub seed: u64,
    pub delta: f64,
    /// Overrides the per-level default round cap.
    pub rounds: Option<usize>,
    pub early_exit: bool,
    pub jobs: usize,
}

impl MaxCutParams {
    pub fn new(seed: u64) -> Self {
        MaxCutParams {
            seed,
            delta: crate::spectral::DEFAULT_DELTA,
            rounds: None,
            early_exit: false,
            jobs: 1,
        }
    }

    fn game_params(&self, n: usize, depth: usize) -> GameParams {
        let mut p = GameParams::for_graph(n, self.seed.wrapping_add(depth as u64));
        p.delta = self.delta;
        p.early_exit = self.early_exit;
        if let Some(t) = self.rounds {
            p.rounds = t;
        }
        p
    }
}

/// Quantities of one recursion level, all on the level's induced subgraph.
#[derive(Debug, Clone, Serialize)]
pub struct LevelRecord {
    pub depth: usize,
    /// Vertices handed to the solver.
    pub n: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub zero: Vec<usize>,
    /// Placed without the solver: even ids join `left`, odd ids `right`.
    pub isolated: Vec<usize>,
    pub beta: Ratio,
    /// `w(E(L)) + w(E(R))`.
    pub w_inside: u64,
    /// `w(E(L ∪ R, Z))`.
    pub w_cross_zero: u64,
    /// `vol(L ∪ R)`.
    pub vol_lr: u64,
    /// Uncut weight of this level's merged bipartition.
    pub uncut_level: u64,
    /// Uncut weight returned by the recursive call on `Z`.
    pub uncut_rec: u64,
    /// Whether the recursive sides were swapped when merging.
    pub flipped: bool,
}

impl LevelRecord {
    /// `uncut ≤ w(E(L)) + w(E(R)) + ½ w(E(L ∪ R, Z)) + uncut(Z)`, doubled.
    pub fn accounting_holds(&self) -> bool {
        2 * self.uncut_level as u128
            <= 2 * self.w_inside as u128 + self.w_cross_zero as u128 + 2 * self.uncut_rec as u128
    }

    /// `w(E(L)) + w(E(R)) + ½ w(E(L ∪ R, Z)) ≤ ½ β(x) vol(L ∪ R)`, doubled.
    pub fn level_bound_holds(&self) -> bool {
        let lhs = (2 * self.w_inside as u128 + self.w_cross_zero as u128) * self.beta.den() as u128;
        lhs <= self.beta.num() as u128 * self.vol_lr as u128
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CutResult {
    pub side: Vec<usize>,
    pub value: Ratio,
    pub uncut_weight: u64,
    pub levels: Vec<LevelRecord>,
    pub flow_solves: usize,
}

struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

fn uncut_weight(edges: &[Edge], n: usize, part: &Bipartition) -> u64 {
    let left = membership(n, &part.left);
    let right = membership(n, &part.right);
    edges
        .iter()
        .filter(|e| (left[e.u] && left[e.v]) || (right[e.u] && right[e.v]))
        .map(|e| e.w)
        .sum()
}

struct Recursion<'a> {
    graph: &'a WeightedGraph,
    params: &'a MaxCutParams,
    levels: Vec<LevelRecord>,
    flow_solves: usize,
}

impl Recursion<'_> {
    /// Bipartition of `zone` and its uncut weight inside `zone`.
    fn solve(&mut self, zone: &[usize], depth: usize) -> Result<(Bipartition, u64)> {
        if depth > self.graph.n() {
            return Err(Error::RecursionLimit(self.graph.n()));
        }
        let sub = induced_subgraph(self.graph, zone);
        let (mut left, mut right): (Vec<usize>, Vec<usize>) =
            sub.isolated.iter().partition(|&&v| v % 2 == 0);
        if sub.ids.is_empty() {
            return Ok((Bipartition { left, right }, 0));
        }

        let params = self.params.game_params(sub.graph.n(), depth);
        let sweep = approx_bipartiteness(&sub.graph, &params, self.params.jobs)?;
        self.flow_solves += sweep.flow_solves;
        let parts = tripartition(&sweep.x_best);
        let map = |s: &[usize]| -> Vec<usize> { s.iter().map(|&i| sub.ids[i]).collect() };
        let (l, r, z) = (map(&parts.left), map(&parts.right), map(&parts.zero));

        let local_edges = sub.graph.edges();
        let n_local = sub.graph.n();
        let in_l = membership(n_local, &parts.left);
        let in_r = membership(n_local, &parts.right);
        let in_z = membership(n_local, &parts.zero);
        let mut w_inside = 0;
        let mut w_cross_zero = 0;
        for e in local_edges {
            if (in_l[e.u] && in_l[e.v]) || (in_r[e.u] && in_r[e.v]) {
                w_inside += e.w;
            } else if in_z[e.u] != in_z[e.v] {
                w_cross_zero += e.w;
            }
        }
        let vol_lr: u64 = parts
            .left
            .iter()
            .chain(&parts.right)
            .map(|&i| sub.graph.b()[i])
            .sum();

        // original-id edges of this level, for merge comparisons
        let level_edges: Vec<Edge> = local_edges
            .iter()
            .map(|e| Edge::new(sub.ids[e.u], sub.ids[e.v], e.w))
            .collect();
        let n = self.graph.n();
        let record_at = self.levels.len();
        self.levels.push(LevelRecord {
            depth,
            n: n_local,
            left: l.clone(),
            right: r.clone(),
            zero: z.clone(),
            isolated: sub.isolated.clone(),
            beta: sweep.beta_best,
            w_inside,
            w_cross_zero,
            vol_lr,
            uncut_level: 0,
            uncut_rec: 0,
            flipped: false,
        });

        let (merged, uncut, uncut_rec, flipped) = if z.is_empty() {
            let part = Bipartition {
                left: l.clone(),
                right: r.clone(),
            };
            (part, w_inside, 0, false)
        } else {
            let (inner, uncut_rec) = self.solve(&z, depth + 1)?;
            let straight = Bipartition {
                left: [l.as_slice(), &inner.left].concat(),
                right: [r.as_slice(), &inner.right].concat(),
            };
            let swapped = Bipartition {
                left: [l.as_slice(), &inner.right].concat(),
                right: [r.as_slice(), &inner.left].concat(),
            };
            let a = uncut_weight(&level_edges, n, &straight);
            let b = uncut_weight(&level_edges, n, &swapped);
            if b < a {
                (swapped, b, uncut_rec, true)
            } else {
                (straight, a, uncut_rec, false)
            }
        };
        let rec = &mut self.levels[record_at];
        rec.uncut_level = uncut;
        rec.uncut_rec = uncut_rec;
        rec.flipped = flipped;

        left.extend(merged.left);
        right.extend(merged.right);
        Ok((Bipartition { left, right }, uncut))
    }
}

/// Commits the best witness's `(L, R)` at each level and recurses on its
/// zero set, keeping whichever orientation of the recursive answer cuts more.
pub fn recursive_bipart(graph: &WeightedGraph, params: &MaxCutParams) -> Result<CutResult> {
    if graph.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rec = Recursion {
        graph,
        params,
        levels: Vec::new(),
        flow_solves: 0,
    };
    let all: Vec<usize> = (0..graph.n()).collect();
    let (part, uncut) = rec.solve(&all, 0)?;
    let mut side = part.left;
    side.sort_unstable();
    let value = cut_value(graph, &side)?;
    debug_assert_eq!(graph.total_weight() - uncut, value.num());
    Ok(CutResult {
        side,
        value,
        uncut_weight: uncut,
        levels: rec.levels,
        flow_solves: rec.flow_solves,
    })
}

/// `1 - c · η · ln(3/η)`, the guarantee shape for a graph whose optimum
/// leaves an `η` fraction uncut.
pub fn guarantee(eta: f64, c: f64) -> f64 {
    if eta <= 0.0 {
        1.0
    } else {
        1.0 - c * eta * (3.0 / eta).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{complete, cycle, random_bipartite};
    use crate::oracle::brute_maxcut;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cut_values() {
        assert_eq!(cut_value(&cycle(4).unwrap(), &[0, 2]).unwrap(), Ratio::ONE);
        assert_eq!(cut_value(&complete(3).unwrap(), &[0]).unwrap(), Ratio::new(2, 3));
        assert_eq!(cut_value(&complete(4).unwrap(), &[0, 1]).unwrap(), Ratio::new(2, 3));
        let empty = WeightedGraph::new(2, vec![], vec![1, 1]).unwrap();
        assert_eq!(cut_value(&empty, &[0]).unwrap_err(), Error::EmptyGraph);
    }

    #[test]
    fn induced_subgraphs() {
        let k3 = complete(3).unwrap();
        let s = induced_subgraph(&k3, &[0, 1]);
        assert_eq!(s.graph.m(), 1);
        assert_eq!(s.graph.b(), &[1, 1]);
        assert_eq!(s.ids, vec![0, 1]);
        let e = induced_subgraph(&k3, &[]);
        assert_eq!(e.graph.n(), 0);
        let all = induced_subgraph(&k3, &[2, 0, 1]);
        assert_eq!(all.graph, k3);
        let lone = induced_subgraph(&k3, &[2]);
        assert_eq!(lone.isolated, vec![2]);
        assert_eq!(lone.graph.n(), 0);
    }

    #[test]
    fn triangle_reaches_optimum() {
        let k3 = complete(3).unwrap();
        for seed in 0..5 {
            let r = recursive_bipart(&k3, &MaxCutParams::new(seed)).unwrap();
            assert_eq!(r.value, Ratio::new(2, 3));
            assert!(r.levels.iter().all(|l| l.accounting_holds() && l.level_bound_holds()));
        }
    }

    #[test]
    fn bipartite_graphs_are_cut_completely() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..10 {
            let g = random_bipartite(10, 0.3, 3, &mut rng);
            let r = recursive_bipart(&g, &MaxCutParams::new(seed)).unwrap();
            assert_eq!(r.value, Ratio::ONE);
            assert_eq!(r.uncut_weight, 0);
        }
    }

    #[test]
    fn complete_four_matches_oracle() {
        let k4 = complete(4).unwrap();
        let r = recursive_bipart(&k4, &MaxCutParams::new(1)).unwrap();
        assert!(r.value <= brute_maxcut(&k4).unwrap().value);
        assert!(r.levels.iter().all(|l| l.accounting_holds()));
    }

    #[test]
    fn guarantee_shape() {
        assert_eq!(guarantee(0.0, 10.0), 1.0);
        // x ln(3/x) increases on (0, 1)
        let f = |x: f64| x * (3.0 / x).ln();
        let grid: Vec<f64> = (1..1000).map(|i| i as f64 / 1000.0).collect();
        assert!(grid.windows(2).all(|w| f(w[0]) < f(w[1])));
    }
}
