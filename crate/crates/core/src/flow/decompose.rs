//! Path decomposition of an integral flow.

use super::network::{FlowAssignment, FlowNetwork};

/// One `s⁺`–`s⁻` path carrying `amount` units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowPath {
    /// Node sequence starting at `s⁺` and ending at `s⁻`.
    pub nodes: Vec<usize>,
    /// Arc ids (into `FlowNetwork::arcs`) in traversal order.
    pub arcs: Vec<usize>,
    pub amount: u64,
}

/// A flow-carrying arc oriented in the direction of its net flow.
#[derive(Debug, Clone, Copy)]
struct Carrier {
    to: usize,
    arc: usize,
    amount: u64,
}

struct FlowGraph {
    carriers: Vec<Carrier>,
    out: Vec<Vec<usize>>,
}

impl FlowGraph {
    fn new(network: &FlowNetwork, flow: &FlowAssignment) -> Self {
        let mut carriers = Vec::new();
        let mut out = vec![Vec::new(); network.node_count()];
        for (id, (a, &f)) in network.arcs().iter().zip(&flow.flow).enumerate() {
            let (from, to) = match f {
                0 => continue,
                f if f > 0 => (a.tail, a.head),
                _ => (a.head, a.tail),
            };
            out[from].push(carriers.len());
            carriers.push(Carrier {
                to,
                arc: id,
                amount: f.unsigned_abs(),
            });
        }
        FlowGraph { carriers, out }
    }

    fn first_live(&self, u: usize) -> Option<usize> {
        self.out[u]
            .iter()
            .copied()
            .find(|&c| self.carriers[c].amount > 0)
    }

    /// Some directed cycle of positive carriers, as carrier ids.
    fn find_cycle(&self) -> Option<Vec<usize>> {
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;
        let nodes = self.out.len();
        let mut colour = vec![WHITE; nodes];
        for root in 0..nodes {
            if colour[root] != WHITE {
                continue;
            }
            // stack of (node, next out-index, carrier used to enter)
            let mut stack: Vec<(usize, usize, Option<usize>)> = vec![(root, 0, None)];
            colour[root] = GREY;
            while let Some(&mut (u, ref mut next, _)) = stack.last_mut() {
                let live = self.out[u][*next..]
                    .iter()
                    .position(|&c| self.carriers[c].amount > 0)
                    .map(|p| *next + p);
                match live {
                    Some(idx) => {
                        *next = idx + 1;
                        let c = self.out[u][idx];
                        let v = self.carriers[c].to;
                        match colour[v] {
                            WHITE => {
                                colour[v] = GREY;
                                stack.push((v, 0, Some(c)));
                            }
                            GREY => {
                                let start = stack.iter().position(|&(w, _, _)| w == v).unwrap();
                                let mut cycle: Vec<usize> = stack[start + 1..]
                                    .iter()
                                    .filter_map(|&(_, _, entered)| entered)
                                    .collect();
                                cycle.push(c);
                                return Some(cycle);
                            }
                            _ => {}
                        }
                    }
                    None => {
                        colour[u] = BLACK;
                        stack.pop();
                    }
                }
            }
        }
        None
    }

    fn cancel_cycles(&mut self) {
        while let Some(cycle) = self.find_cycle() {
            let bottleneck = cycle
                .iter()
                .map(|&c| self.carriers[c].amount)
                .min()
                .unwrap();
            for c in cycle {
                self.carriers[c].amount -= bottleneck;
            }
        }
    }
}

/// Decomposes a feasible flow into `s⁺`–`s⁻` paths.
///
/// Flow cycles are cancelled first. Paths are then peeled greedily from
/// `s⁺`, always following the lowest-indexed arc that still carries flow,
/// and each path takes its bottleneck amount. Multiplicities sum to the flow
/// value and every path zeroes at least one arc, so there are at most as many
/// paths as flow-carrying arcs.
pub fn decompose_flow(network: &FlowNetwork, flow: &FlowAssignment) -> Vec<FlowPath> {
    debug_assert!(flow.is_feasible(network));
    let mut graph = FlowGraph::new(network, flow);
    graph.cancel_cycles();

    let source = network.source();
    let sink = network.sink();
    let mut paths = Vec::new();
    while graph.first_live(source).is_some() {
        let mut nodes = vec![source];
        let mut used = Vec::new();
        let mut u = source;
        while u != sink {
            let c = graph
                .first_live(u)
                .expect("flow conservation violated during decomposition");
            used.push(c);
            u = graph.carriers[c].to;
            nodes.push(u);
        }
        let amount = used
            .iter()
            .map(|&c| graph.carriers[c].amount)
            .min()
            .unwrap();
        for &c in &used {
            graph.carriers[c].amount -= amount;
        }
        paths.push(FlowPath {
            nodes,
            arcs: used.iter().map(|&c| graph.carriers[c].arc).collect(),
            amount,
        });
    }
    debug_assert_eq!(paths.iter().map(|p| p.amount).sum::<u64>(), flow.value);
    paths
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::network::{max_flow, ArcKind};
    use crate::graph::{AuxiliaryGraph, Edge, WeightedGraph};

    fn k3() -> WeightedGraph {
        WeightedGraph::with_degree_weights(
            3,
            vec![Edge::new(0, 1, 1), Edge::new(0, 2, 1), Edge::new(1, 2, 1)],
        )
        .unwrap()
    }

    fn usage_per_arc(network: &FlowNetwork, paths: &[FlowPath]) -> Vec<u64> {
        let mut usage = vec![0u64; network.arcs().len()];
        for p in paths {
            for &a in &p.arcs {
                usage[a] += p.amount;
            }
        }
        usage
    }

    #[test]
    fn k3_saturating_flow_decomposes_into_odd_closed_paths() {
        let g = k3();
        let aux = AuxiliaryGraph::build(&g);
        let net = FlowNetwork::build(&aux, &[0], &[], 2).unwrap();
        let f = max_flow(&net);
        let paths = decompose_flow(&net, &f);
        assert_eq!(paths.iter().map(|p| p.amount).sum::<u64>(), 2);
        for p in &paths {
            assert_eq!(p.nodes.first(), Some(&net.source()));
            assert_eq!(p.nodes.last(), Some(&net.sink()));
            // enters at 0⁺, leaves at 0⁻ through an odd cycle of the triangle
            assert_eq!(p.nodes[1], 0);
            assert_eq!(p.nodes[p.nodes.len() - 2], 3);
            assert_eq!(p.nodes.len(), 6);
        }
        let usage = usage_per_arc(&net, &paths);
        for (a, u) in net.arcs().iter().zip(usage) {
            assert!(u <= a.cap);
        }
    }

    #[test]
    fn zero_flow_gives_no_paths() {
        let g = WeightedGraph::new(2, vec![Edge::new(0, 1, 1)], vec![1, 1]).unwrap();
        let aux = AuxiliaryGraph::build(&g);
        let net = FlowNetwork::build(&aux, &[0], &[], 1).unwrap();
        let f = FlowAssignment::zero(&net);
        assert!(decompose_flow(&net, &f).is_empty());
    }

    #[test]
    fn two_disjoint_unit_paths() {
        // L = {0, 1} on a single edge: 0⁺ -> 1⁻ and 1⁺ -> 0⁻, one unit each
        let g = WeightedGraph::new(2, vec![Edge::new(0, 1, 1)], vec![1, 1]).unwrap();
        let aux = AuxiliaryGraph::build(&g);
        let net = FlowNetwork::build(&aux, &[0, 1], &[], 1).unwrap();
        let f = max_flow(&net);
        assert_eq!(f.value, 2);
        let mut paths: Vec<_> = decompose_flow(&net, &f)
            .into_iter()
            .map(|p| (p.nodes, p.amount))
            .collect();
        paths.sort();
        assert_eq!(paths, vec![(vec![4, 0, 3, 5], 1), (vec![4, 1, 2, 5], 1)]);
    }

    #[test]
    fn cycles_are_cancelled() {
        let g = k3();
        let aux = AuxiliaryGraph::build(&g);
        let net = FlowNetwork::build(&aux, &[0], &[], 4).unwrap();
        let mut f = max_flow(&net);
        // one unit around the 6-cycle 0⁺ -> 1⁻ -> 2⁺ -> 0⁻ -> 1⁺ -> 2⁻ -> 0⁺
        let cycle = [(0, 4), (4, 2), (2, 3), (3, 1), (1, 5), (5, 0)];
        for (u, v) in cycle {
            let (id, a) = net
                .arcs()
                .iter()
                .enumerate()
                .find(|(_, a)| {
                    matches!(a.kind, ArcKind::Middle { .. })
                        && ((a.tail, a.head) == (u, v) || (a.tail, a.head) == (v, u))
                })
                .unwrap();
            f.flow[id] += if (a.tail, a.head) == (u, v) { 1 } else { -1 };
        }
        assert!(f.is_feasible(&net));
        let paths = decompose_flow(&net, &f);
        assert_eq!(paths.iter().map(|p| p.amount).sum::<u64>(), f.value);
        let carrying = f.flow.iter().filter(|&&x| x != 0).count();
        assert!(paths.len() <= carrying);
        for p in &paths {
            let mut seen = p.nodes.clone();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), p.nodes.len(), "paths are simple");
        }
    }
}
