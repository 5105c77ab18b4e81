use super::dinic::{ArcHandle, Dinic};
use crate::error::{Error, Result};
use crate::graph::{AuxiliaryGraph, Orientation, SignVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    /// `s⁺ -> u` for `u ∈ A`, capacity `b(u)`.
    Source,
    /// `v -> s⁻` for `v ∈ B`, capacity `b(v)`.
    Sink,
    /// Undirected copy of an auxiliary edge, capacity `w(e) * k`.
    Middle {
        base: usize,
        orientation: Orientation,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetArc {
    pub tail: usize,
    pub head: usize,
    pub cap: u64,
    pub kind: ArcKind,
}

impl NetArc {
    pub fn is_undirected(&self) -> bool {
        matches!(self.kind, ArcKind::Middle { .. })
    }
}

/// The network `N_{A,B,r}` with `r = 1/k`.
///
/// Nodes `0..2n` are the auxiliary vertices, `2n` is `s⁺` and `2n + 1` is
/// `s⁻`. Arcs are stored source arcs first, then sink arcs, then middle edges
/// in auxiliary edge order; solvers and path extraction visit them in that
/// order.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    base_n: usize,
    k: u64,
    arcs: Vec<NetArc>,
    in_a: Vec<bool>,
    in_b: Vec<bool>,
    demand: u64,
}

impl FlowNetwork {
    pub fn build(aux: &AuxiliaryGraph<'_>, left: &[usize], right: &[usize], k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k = 1/r must be at least 1".into()));
        }
        let x = SignVector::from_sets(aux.base_n(), left, right)?;
        if x.is_zero() {
            return Err(Error::EmptySelection);
        }
        let n = aux.base_n();
        let source = 2 * n;
        let sink = 2 * n + 1;
        let in_a = aux.selection_of(&x);
        let in_b: Vec<bool> = (0..2 * n).map(|u| in_a[aux.mirror(u)]).collect();

        let mut arcs = Vec::with_capacity(2 * n + aux.edges().len());
        let mut demand = 0u64;
        for u in (0..2 * n).filter(|&u| in_a[u]) {
            let cap = aux.vertex_weight(u);
            demand += cap;
            arcs.push(NetArc {
                tail: source,
                head: u,
                cap,
                kind: ArcKind::Source,
            });
        }
        for v in (0..2 * n).filter(|&v| in_b[v]) {
            arcs.push(NetArc {
                tail: v,
                head: sink,
                cap: aux.vertex_weight(v),
                kind: ArcKind::Sink,
            });
        }
        for e in aux.edges() {
            let cap = e
                .w
                .checked_mul(k)
                .filter(|&c| c < i64::MAX as u64 / 4)
                .ok_or_else(|| Error::InvalidParameter(format!("capacity w*k overflows at k = {k}")))?;
            arcs.push(NetArc {
                tail: e.tail,
                head: e.head,
                cap,
                kind: ArcKind::Middle {
                    base: e.base,
                    orientation: e.orientation,
                },
            });
        }
        Ok(FlowNetwork {
            base_n: n,
            k,
            arcs,
            in_a,
            in_b,
            demand,
        })
    }

    pub fn base_n(&self) -> usize {
        self.base_n
    }

    pub fn node_count(&self) -> usize {
        2 * self.base_n + 2
    }

    pub fn source(&self) -> usize {
        2 * self.base_n
    }

    pub fn sink(&self) -> usize {
        2 * self.base_n + 1
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn arcs(&self) -> &[NetArc] {
        &self.arcs
    }

    pub fn in_a(&self, u: usize) -> bool {
        u < 2 * self.base_n && self.in_a[u]
    }

    pub fn in_b(&self, u: usize) -> bool {
        u < 2 * self.base_n && self.in_b[u]
    }

    /// `b(A)`, which equals `b(B)` for a symmetric pair.
    pub fn demand(&self) -> u64 {
        self.demand
    }

    /// Capacity of the cut `(X, X̄)` where `side[u]` marks `X`.
    pub fn cut_capacity(&self, side: &[bool]) -> u64 {
        self.arcs
            .iter()
            .filter(|a| {
                if a.is_undirected() {
                    side[a.tail] != side[a.head]
                } else {
                    side[a.tail] && !side[a.head]
                }
            })
            .map(|a| a.cap)
            .sum()
    }

    /// Mirror of a node: `i⁺ ↔ i⁻`, `s⁺ ↔ s⁻`.
    pub fn mirror(&self, u: usize) -> usize {
        let n = self.base_n;
        match u {
            u if u < n => u + n,
            u if u < 2 * n => u - n,
            u if u == 2 * n => 2 * n + 1,
            _ => 2 * n,
        }
    }
}

/// An integral flow on a [`FlowNetwork`]: one signed value per arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowAssignment {
    pub value: u64,
    /// Net flow per arc, in `arcs()` order. Middle edges may be negative
    /// (flow runs head to tail).
    pub flow: Vec<i64>,
}

impl FlowAssignment {
    pub fn zero(network: &FlowNetwork) -> Self {
        FlowAssignment {
            value: 0,
            flow: vec![0; network.arcs().len()],
        }
    }

    /// Capacity bounds, conservation at inner nodes and the value equal to
    /// the net outflow of `s⁺`.
    pub fn is_feasible(&self, network: &FlowNetwork) -> bool {
        if self.flow.len() != network.arcs().len() {
            return false;
        }
        let mut excess = vec![0i64; network.node_count()];
        for (a, &f) in network.arcs().iter().zip(&self.flow) {
            let cap = a.cap as i64;
            let lower = if a.is_undirected() { -cap } else { 0 };
            if f < lower || f > cap {
                return false;
            }
            excess[a.tail] -= f;
            excess[a.head] += f;
        }
        let inner_ok = (0..network.node_count())
            .filter(|&u| u != network.source() && u != network.sink())
            .all(|u| excess[u] == 0);
        inner_ok && -excess[network.source()] == self.value as i64
    }
}

fn load(network: &FlowNetwork) -> (Dinic, Vec<ArcHandle>) {
    let mut solver = Dinic::new(network.node_count());
    let handles = network
        .arcs()
        .iter()
        .map(|a| {
            if a.is_undirected() {
                solver.add_undirected(a.tail, a.head, a.cap as i64)
            } else {
                solver.add_arc(a.tail, a.head, a.cap as i64)
            }
        })
        .collect();
    (solver, handles)
}

/// Maximum integral `s⁺`–`s⁻` flow.
///
/// The value is audited against the capacity of the residual-reachability
/// cut on every solve.
pub fn max_flow(network: &FlowNetwork) -> FlowAssignment {
    let (mut solver, handles) = load(network);
    let value = solver.max_flow(network.source(), network.sink());
    let flow: Vec<i64> = handles.iter().map(|&h| solver.flow(h)).collect();
    let side = solver.reachable(network.source());
    assert_eq!(
        network.cut_capacity(&side),
        value as u64,
        "max-flow value differs from min-cut capacity"
    );
    FlowAssignment {
        value: value as u64,
        flow,
    }
}

pub fn is_saturating(network: &FlowNetwork, flow: &FlowAssignment) -> bool {
    flow.value == network.demand()
}

/// Source side of the canonical min cut: nodes reachable from `s⁺` in the
/// residual graph of `flow`.
pub fn residual_source_side(network: &FlowNetwork, flow: &FlowAssignment) -> Vec<bool> {
    let nodes = network.node_count();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (id, (a, &f)) in network.arcs().iter().zip(&flow.flow).enumerate() {
        let cap = a.cap as i64;
        if f < cap {
            out[a.tail].push(id);
        }
        let backward = if a.is_undirected() { cap + f } else { f };
        if backward > 0 {
            out[a.head].push(id);
        }
    }
    let mut seen = vec![false; nodes];
    seen[network.source()] = true;
    let mut stack = vec![network.source()];
    while let Some(u) = stack.pop() {
        for &id in &out[u] {
            let a = &network.arcs()[id];
            let v = if a.tail == u { a.head } else { a.tail };
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// Removes both copies of every vertex (and terminal) that appears twice.
pub fn drop_inconsistent(network: &FlowNetwork, side: &[bool]) -> Vec<bool> {
    let mut reduced = side.to_vec();
    for u in 0..network.node_count() {
        let twin = network.mirror(u);
        if side[u] && side[twin] {
            reduced[u] = false;
        }
    }
    reduced
}

/// Consistent minimum cut of a non-saturating max flow, as a sign vector
/// `x_i = +1` for `i⁺ ∈ S`, `-1` for `i⁻ ∈ S`.
///
/// The result satisfies `β_b(x) < 1/k`.
pub fn consistent_min_cut(network: &FlowNetwork, flow: &FlowAssignment) -> Result<SignVector> {
    if is_saturating(network, flow) {
        return Err(Error::SaturatingFlow);
    }
    let side = residual_source_side(network, flow);
    let reduced = drop_inconsistent(network, &side);
    let n = network.base_n();
    let x: Vec<i8> = (0..n)
        .map(|i| match (reduced[i], reduced[n + i]) {
            (true, _) => 1,
            (_, true) => -1,
            _ => 0,
        })
        .collect();
    SignVector::new(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{evaluate_beta, Edge, WeightedGraph};

    fn single_edge() -> WeightedGraph {
        WeightedGraph::new(2, vec![Edge::new(0, 1, 1)], vec![1, 1]).unwrap()
    }

    fn k3() -> WeightedGraph {
        WeightedGraph::with_degree_weights(
            3,
            vec![Edge::new(0, 1, 1), Edge::new(0, 2, 1), Edge::new(1, 2, 1)],
        )
        .unwrap()
    }

    fn c4() -> WeightedGraph {
        WeightedGraph::with_degree_weights(
            4,
            vec![
                Edge::new(0, 1, 1),
                Edge::new(1, 2, 1),
                Edge::new(2, 3, 1),
                Edge::new(3, 0, 1),
            ],
        )
        .unwrap()
    }

    /// Minimum over all `s⁺ ∈ X ∌ s⁻` of the cut capacity.
    fn enumerated_min_cut(network: &FlowNetwork) -> u64 {
        let inner = network.node_count() - 2;
        (0u64..1 << inner)
            .map(|mask| {
                let mut side: Vec<bool> = (0..inner).map(|u| mask >> u & 1 == 1).collect();
                side.push(true);
                side.push(false);
                network.cut_capacity(&side)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn single_edge_network_unrolled() {
        let g = single_edge();
        let aux = AuxiliaryGraph::build(&g);
        let net = FlowNetwork::build(&aux, &[0], &[], 1).unwrap();
        let arcs: Vec<_> = net.arcs().iter().map(|a| (a.tail, a.head, a.cap)).collect();
        assert_eq!(arcs, vec![(4, 0, 1), (2, 5, 1), (0, 3, 1), (2, 1, 1)]);

        let net = FlowNetwork::build(&aux, &[0], &[], 3).unwrap();
        let caps: Vec<_> = net.arcs().iter().map(|a| a.cap).collect();
        assert_eq!(caps, vec![1, 1, 3, 3]);
    }

    #[test]
    fn k3_full_left_counts() {
        let g = k3();
        let aux = AuxiliaryGraph::build(&g);
        let net = FlowNetwork::build(&aux, &[0, 1, 2], &[], 2).unwrap();
        let count = |kind: fn(&ArcKind) -> bool| net.arcs().iter().filter(|a| kind(&a.kind)).count();
        assert_eq!(count(|k| *k == ArcKind::Source), 3);
        assert_eq!(count(|k| *k == ArcKind::Sink), 3);
        assert_eq!(count(|k| matches!(k, ArcKind::Middle { .. })), 6);
        assert!(net.arcs().iter().all(|a| a.cap == 2));
        assert_eq!(net.demand(), 6);
    }

    #[test]
    fn empty_selection_and_bad_k() {
        let g = k3();
        let aux = AuxiliaryGraph::build(&g);
        assert!(matches!(
            FlowNetwork::build(&aux, &[], &[], 1),
            Err(Error::EmptySelection)
        ));
        assert!(FlowNetwork::build(&aux, &[0], &[], 0).is_err());
    }

    #[test]
    fn single_edge_is_blocked() {
        let g = single_edge();
        let aux = AuxiliaryGraph::build(&g);
        let net = FlowNetwork::build(&aux, &[0], &[], 1).unwrap();
        let f = max_flow(&net);
        assert_eq!(f.value, 0);
        assert!(f.is_feasible(&net));
        assert!(!is_saturating(&net, &f));
        let x = consistent_min_cut(&net, &f).unwrap();
        assert_eq!(x.as_slice(), &[1, -1]);
        assert!(evaluate_beta(&g, &x).unwrap().is_zero());
    }

    #[test]
    fn k3_single_left_saturates() {
        let g = k3();
        let aux = AuxiliaryGraph::build(&g);
        let net = FlowNetwork::build(&aux, &[0], &[], 2).unwrap();
        let f = max_flow(&net);
        assert_eq!(f.value, 2);
        assert!(is_saturating(&net, &f));
        assert!(f.is_feasible(&net));
        assert_eq!(enumerated_min_cut(&net), 2);
        assert_eq!(consistent_min_cut(&net, &f), Err(Error::SaturatingFlow));
    }

    #[test]
    fn c4_bipartition_routes_nothing() {
        let g = c4();
        let aux = AuxiliaryGraph::build(&g);
        let net = FlowNetwork::build(&aux, &[0, 2], &[1, 3], 2).unwrap();
        let f = max_flow(&net);
        assert_eq!(f.value, 0);
        let x = consistent_min_cut(&net, &f).unwrap();
        assert_eq!(x.as_slice(), &[1, -1, 1, -1]);
        assert!(evaluate_beta(&g, &x).unwrap().is_zero());
    }

    #[test]
    fn max_flow_matches_enumerated_min_cut() {
        let graphs = [single_edge(), k3(), c4()];
        for g in &graphs {
            let aux = AuxiliaryGraph::build(g);
            let n = g.n();
            for code in 1..3usize.pow(n as u32) {
                let x: Vec<i8> = (0..n)
                    .map(|i| [0i8, 1, -1][(code / 3usize.pow(i as u32)) % 3])
                    .collect();
                let x = SignVector::new(x).unwrap();
                let parts = crate::graph::tripartition(&x);
                for k in 1..=3 {
                    let net = FlowNetwork::build(&aux, &parts.left, &parts.right, k).unwrap();
                    let f = max_flow(&net);
                    assert!(f.is_feasible(&net));
                    assert_eq!(f.value, enumerated_min_cut(&net));
                    if !is_saturating(&net, &f) {
                        let side = residual_source_side(&net, &f);
                        let reduced = drop_inconsistent(&net, &side);
                        assert_eq!(net.cut_capacity(&reduced), f.value);
                        let x = consistent_min_cut(&net, &f).unwrap();
                        assert!(evaluate_beta(g, &x).unwrap().below_reciprocal(k));
                    }
                }
            }
        }
    }
}
