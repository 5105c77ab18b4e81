use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::decompose::FlowPath;
use super::network::{ArcKind, FlowNetwork};
use crate::error::{Error, Result};
use crate::graph::Orientation;

/// Path usage of each base edge, split by auxiliary copy.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CongestionLedger {
    /// base edge id -> [usage of (u⁺, v⁻), usage of (u⁻, v⁺)]
    pub usage: BTreeMap<usize, [u64; 2]>,
}

impl CongestionLedger {
    pub fn add(&mut self, base: usize, orientation: Orientation, amount: u64) {
        let slot = match orientation {
            Orientation::PlusToMinus => 0,
            Orientation::MinusToPlus => 1,
        };
        self.usage.entry(base).or_default()[slot] += amount;
    }

    /// Total usage across both copies of `base`.
    pub fn total(&self, base: usize) -> u64 {
        self.usage.get(&base).map_or(0, |u| u[0] + u[1])
    }

    /// Largest usage of a single auxiliary copy of `base`.
    pub fn copy_max(&self, base: usize) -> u64 {
        self.usage.get(&base).map_or(0, |u| u[0].max(u[1]))
    }

    pub fn merge(&mut self, other: &CongestionLedger) {
        for (&base, u) in &other.usage {
            let slot = self.usage.entry(base).or_default();
            slot[0] += u[0];
            slot[1] += u[1];
        }
    }
}

/// Multigraph of flow-path endpoints. `{i, i}` self-loops are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandMultigraph {
    n: usize,
    /// `(min(i, j), max(i, j))` -> multiplicity
    pairs: BTreeMap<(usize, usize), u64>,
    ledger: CongestionLedger,
}

impl DemandMultigraph {
    pub fn empty(n: usize) -> Self {
        DemandMultigraph {
            n,
            pairs: BTreeMap::new(),
            ledger: CongestionLedger::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, i: usize, j: usize, count: u64) {
        assert!(i < self.n && j < self.n);
        if count > 0 {
            *self.pairs.entry((i.min(j), i.max(j))).or_default() += count;
        }
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> u64 {
        self.pairs.get(&(i.min(j), i.max(j))).copied().unwrap_or(0)
    }

    /// `(i, j, multiplicity)` with `i <= j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.pairs.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Self-loops count twice.
    pub fn degrees(&self) -> Vec<u64> {
        let mut deg = vec![0u64; self.n];
        for (i, j, c) in self.edges() {
            deg[i] += c;
            deg[j] += c;
        }
        deg
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.degrees()[i]
    }

    /// Number of paths (edges counted with multiplicity).
    pub fn total_paths(&self) -> u64 {
        self.pairs.values().sum()
    }

    pub fn ledger(&self) -> &CongestionLedger {
        &self.ledger
    }

    /// Whether some nonzero sign vector has ratio 0 on this multigraph, for
    /// any positive vertex weights: true iff a connected component (an
    /// untouched vertex included) is bipartite. Self-loops are odd cycles.
    pub fn has_zero_ratio(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        let mut looped = vec![false; self.n];
        for (i, j, _) in self.edges() {
            if i == j {
                looped[i] = true;
            } else {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        for root in 0..self.n {
            if colour[root].is_some() {
                continue;
            }
            colour[root] = Some(false);
            let mut stack = vec![root];
            let mut bipartite = true;
            while let Some(u) = stack.pop() {
                bipartite &= !looped[u];
                let cu = colour[u].unwrap();
                for &v in &adj[u] {
                    match colour[v] {
                        None => {
                            colour[v] = Some(!cu);
                            stack.push(v);
                        }
                        Some(cv) => bipartite &= cv != cu,
                    }
                }
            }
            if bipartite {
                return true;
            }
        }
        false
    }

    /// Multigraph sum `self ⊕ other`; ledgers add up.
    pub fn merge(&mut self, other: &DemandMultigraph) {
        assert_eq!(self.n, other.n);
        for (i, j, c) in other.edges() {
            self.add(i, j, c);
        }
        self.ledger.merge(&other.ledger);
    }
}

impl Serialize for DemandMultigraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let edges: Vec<[u64; 3]> = self
            .edges()
            .map(|(i, j, c)| [i as u64, j as u64, c])
            .collect();
        let mut s = serializer.serialize_struct("DemandMultigraph", 3)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("edges", &edges)?;
        s.serialize_field("ledger", &self.ledger)?;
        s.end()
    }
}

/// Demand graph of a path multiset from [`super::decompose_flow`].
///
/// A path entering at a copy of `i` and leaving from a copy of `j` adds one
/// `{i, j}` edge per unit; every middle edge on it charges the ledger.
pub fn demand_graph(network: &FlowNetwork, paths: &[FlowPath]) -> Result<DemandMultigraph> {
    let n = network.base_n();
    let mut demand = DemandMultigraph::empty(n);
    for path in paths {
        let len = path.nodes.len();
        if len < 3
            || path.nodes[0] != network.source()
            || path.nodes[len - 1] != network.sink()
            || !network.in_a(path.nodes[1])
            || !network.in_b(path.nodes[len - 2])
        {
            return Err(Error::MalformedPath);
        }
        let entry = path.nodes[1] % n;
        let exit = path.nodes[len - 2] % n;
        demand.add(entry, exit, path.amount);
        for &a in &path.arcs {
            let arc = network.arcs().get(a).ok_or(Error::MalformedPath)?;
            if let ArcKind::Middle { base, orientation } = arc.kind {
                demand.ledger.add(base, orientation, path.amount);
            }
        }
    }
    Ok(demand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{decompose_flow, max_flow};
    use crate::graph::{AuxiliaryGraph, Edge, WeightedGraph};

    #[test]
    fn k3_self_loop_demand() {
        let g = WeightedGraph::with_degree_weights(
            3,
            vec![Edge::new(0, 1, 1), Edge::new(0, 2, 1), Edge::new(1, 2, 1)],
        )
        .unwrap();
        let aux = AuxiliaryGraph::build(&g);
        let net = FlowNetwork::build(&aux, &[0], &[], 2).unwrap();
        let paths = decompose_flow(&net, &max_flow(&net));
        let m = demand_graph(&net, &paths).unwrap();
        assert_eq!(m.edges().collect::<Vec<_>>(), vec![(0, 0, 2)]);
        assert_eq!(m.degrees(), vec![4, 0, 0]);
        assert_eq!(m.degree(0), 2 * g.b()[0]);
        assert_eq!(m.degrees().iter().sum::<u64>(), 2 * m.total_paths());
        for base in 0..3 {
            assert!(m.ledger().copy_max(base) <= 2);
        }
    }

    #[test]
    fn empty_paths_empty_demand() {
        let g = WeightedGraph::new(2, vec![Edge::new(0, 1, 1)], vec![1, 1]).unwrap();
        let aux = AuxiliaryGraph::build(&g);
        let net = FlowNetwork::build(&aux, &[0], &[], 1).unwrap();
        let m = demand_graph(&net, &[]).unwrap();
        assert!(m.is_empty());
        assert_eq!(m.total_paths(), 0);
    }

    #[test]
    fn entry_and_exit_define_the_pair() {
        let g = WeightedGraph::new(
            3,
            vec![Edge::new(1, 2, 1)],
            vec![1, 1, 1],
        )
        .unwrap();
        let aux = AuxiliaryGraph::build(&g);
        let net = FlowNetwork::build(&aux, &[1, 2], &[], 1).unwrap();
        // s⁺ -> 1⁺ -> 2⁻ -> s⁻ over source arc 0, middle arc (1⁺, 2⁻), sink arc
        let source_arc = net.arcs().iter().position(|a| a.head == 1 && a.tail == net.source()).unwrap();
        let middle = net.arcs().iter().position(|a| a.tail == 1 && a.head == 5).unwrap();
        let sink_arc = net.arcs().iter().position(|a| a.tail == 5 && a.head == net.sink()).unwrap();
        let path = FlowPath {
            nodes: vec![net.source(), 1, 5, net.sink()],
            arcs: vec![source_arc, middle, sink_arc],
            amount: 1,
        };
        let m = demand_graph(&net, &[path]).unwrap();
        assert_eq!(m.multiplicity(1, 2), 1);
        assert_eq!(m.ledger().total(0), 1);
    }

    #[test]
    fn zero_ratio_detection() {
        let mut m = DemandMultigraph::empty(3);
        assert!(m.has_zero_ratio());
        m.add(0, 1, 1);
        m.add(1, 2, 1);
        assert!(m.has_zero_ratio());
        m.add(0, 2, 1);
        assert!(!m.has_zero_ratio());
        let mut loops = DemandMultigraph::empty(2);
        loops.add(0, 0, 1);
        assert!(loops.has_zero_ratio());
        loops.add(1, 1, 3);
        assert!(!loops.has_zero_ratio());
    }

    #[test]
    fn malformed_path_rejected() {
        let g = WeightedGraph::new(2, vec![Edge::new(0, 1, 1)], vec![1, 1]).unwrap();
        let aux = AuxiliaryGraph::build(&g);
        let net = FlowNetwork::build(&aux, &[0], &[], 1).unwrap();
        // exits at 1⁻, which is not in B = {0⁻}
        let bad = FlowPath {
            nodes: vec![net.source(), 0, 3, net.sink()],
            arcs: vec![],
            amount: 1,
        };
        assert_eq!(demand_graph(&net, &[bad]), Err(Error::MalformedPath));
    }
}
