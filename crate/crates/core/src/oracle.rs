//! Exhaustive ground truth for small instances.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{is_saturating, max_flow, DemandMultigraph, FlowNetwork};
use crate::graph::{AuxiliaryGraph, SignVector, WeightedGraph};
use crate::ratio::Ratio;

pub const BRUTE_BETA_LIMIT: usize = 16;
pub const BRUTE_MAXCUT_LIMIT: usize = 20;
pub const BRUTE_LINKED_LIMIT: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteBeta {
    pub beta: Ratio,
    pub argmin: SignVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteCut {
    pub value: Ratio,
    /// One side of an optimal cut; never contains vertex `n - 1`.
    pub side: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WellLinked {
    pub linked: bool,
    /// First non-saturating pair `(L, R)` in enumeration order.
    pub violating_pair: Option<(Vec<usize>, Vec<usize>)>,
}

/// Ternary odometer over `{0, +1, -1}^n`, vertex 0 least significant.
///
/// Only vectors whose first nonzero entry is `+1` are scored, since `x` and
/// `-x` have the same ratio.
struct SignOdometer {
    x: Vec<i8>,
}

impl SignOdometer {
    fn new(n: usize) -> Self {
        SignOdometer { x: vec![0; n] }
    }

    /// Number of low digits the next step rewrites, or `None` at the end.
    fn carry_len(&self) -> Option<usize> {
        self.x.iter().position(|&v| v != -1).map(|p| p + 1)
    }

    fn step(&mut self) -> bool {
        for v in self.x.iter_mut() {
            match *v {
                0 => {
                    *v = 1;
                    return true;
                }
                1 => {
                    *v = -1;
                    return true;
                }
                _ => *v = 0,
            }
        }
        false
    }

    fn canonical(&self) -> bool {
        self.x.iter().find(|&&v| v != 0) == Some(&1)
    }
}

/// Exact minimum of the ratio over an edge list that may contain self-loops.
fn brute_over(n: usize, edges: &[(usize, usize, u64)], b: &[u64]) -> Result<BruteBeta> {
    if n > BRUTE_BETA_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_BETA_LIMIT,
        });
    }
    if n == 0 {
        return Err(Error::ZeroVector);
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, &(u, v, _)) in edges.iter().enumerate() {
        incident[u].push(id);
        if v != u {
            incident[v].push(id);
        }
    }
    let term = |x: &[i8], id: usize| {
        let (u, v, w) = edges[id];
        w * (x[u] + x[v]).unsigned_abs() as u64
    };

    let mut odo = SignOdometer::new(n);
    let mut num = 0u64;
    let mut den = 0u64;
    let mut best: Option<(Ratio, Vec<i8>)> = None;
    let mut touched: Vec<usize> = Vec::new();
    let mut stamp = vec![0u64; edges.len()];
    let mut epoch = 0u64;
    while let Some(len) = odo.carry_len() {
        epoch += 1;
        touched.clear();
        for i in 0..len {
            for &id in &incident[i] {
                if stamp[id] != epoch {
                    stamp[id] = epoch;
                    touched.push(id);
                }
            }
            den -= b[i] * odo.x[i].unsigned_abs() as u64;
        }
        for &id in &touched {
            num -= term(&odo.x, id);
        }
        odo.step();
        for i in 0..len {
            den += b[i] * odo.x[i].unsigned_abs() as u64;
        }
        for &id in &touched {
            num += term(&odo.x, id);
        }
        if !odo.canonical() {
            continue;
        }
        let r = Ratio::new(num, den);
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, odo.x.clone()));
        }
    }
    let (beta, x) = best.expect("n >= 1 has a nonzero sign vector");
    Ok(BruteBeta {
        beta,
        argmin: SignVector::new(x)?,
    })
}

/// `min_{x ≠ 0} β_b(x)` by enumeration, ties broken by counter order.
pub fn brute_beta(graph: &WeightedGraph) -> Result<BruteBeta> {
    let edges: Vec<_> = graph.edges().iter().map(|e| (e.u, e.v, e.w)).collect();
    brute_over(graph.n(), &edges, graph.b())
}

/// [`brute_beta`] for a demand multigraph with vertex weights `b`.
pub fn brute_beta_multigraph(m: &DemandMultigraph, b: &[u64]) -> Result<BruteBeta> {
    let edges: Vec<_> = m.edges().collect();
    brute_over(m.n(), &edges, b)
}

/// Weight of edges crossing `side`, over total weight.
fn cut_ratio_of_mask(graph: &WeightedGraph, mask: u64) -> Ratio {
    let crossing: u64 = graph
        .edges()
        .iter()
        .filter(|e| ((mask >> e.u) ^ (mask >> e.v)) & 1 == 1)
        .map(|e| e.w)
        .sum();
    Ratio::new(crossing, graph.total_weight())
}

/// Maximum cut fraction over all `2^{n-1}` bipartitions.
pub fn brute_maxcut(graph: &WeightedGraph) -> Result<BruteCut> {
    let n = graph.n();
    if n > BRUTE_MAXCUT_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_MAXCUT_LIMIT,
        });
    }
    if graph.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut best = (Ratio::ZERO, 0u64);
    for mask in 0..1u64 << (n - 1) {
        let r = cut_ratio_of_mask(graph, mask);
        if r > best.0 {
            best = (r, mask);
        }
    }
    Ok(BruteCut {
        value: best.0,
        side: (0..n).filter(|&i| (best.1 >> i) & 1 == 1).collect(),
    })
}

/// Checks every symmetric pair `(L, R)` for a saturating flow in the
/// network with edge capacities `w · k`.
///
/// `(R, L)` gives the mirror network of `(L, R)`, so only pairs whose
/// lowest selected vertex is in `L` are tried.
pub fn brute_well_linked(graph: &WeightedGraph, k: u64) -> Result<WellLinked> {
    let n = graph.n();
    if n > BRUTE_LINKED_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_LINKED_LIMIT,
        });
    }
    let aux = AuxiliaryGraph::build(graph);
    let mut odo = SignOdometer::new(n);
    while odo.step() {
        if !odo.canonical() {
            continue;
        }
        let left: Vec<usize> = (0..n).filter(|&i| odo.x[i] == 1).collect();
        let right: Vec<usize> = (0..n).filter(|&i| odo.x[i] == -1).collect();
        let net = FlowNetwork::build(&aux, &left, &right, k)?;
        if !is_saturating(&net, &max_flow(&net)) {
            return Ok(WellLinked {
                linked: false,
                violating_pair: Some((left, right)),
            });
        }
    }
    Ok(WellLinked {
        linked: true,
        violating_pair: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{evaluate_beta, Edge};

    fn unit(n: usize, pairs: &[(usize, usize)]) -> WeightedGraph {
        WeightedGraph::with_degree_weights(
            n,
            pairs.iter().map(|&(u, v)| Edge::new(u, v, 1)).collect(),
        )
        .unwrap()
    }

    fn k3() -> WeightedGraph {
        unit(3, &[(0, 1), (0, 2), (1, 2)])
    }

    fn c4() -> WeightedGraph {
        unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])
    }

    #[test]
    fn triangle_beta_is_one_third() {
        let r = brute_beta(&k3()).unwrap();
        assert_eq!(r.beta, Ratio::new(1, 3));
        // first minimizer in counter order (vertex 0 least significant)
        assert_eq!(r.argmin.as_slice(), &[1, -1, 1]);
        assert_eq!(evaluate_beta(&k3(), &r.argmin).unwrap(), r.beta);
    }

    #[test]
    fn bipartite_beta_is_zero() {
        let r = brute_beta(&c4()).unwrap();
        assert!(r.beta.is_zero());
        assert_eq!(evaluate_beta(&c4(), &r.argmin).unwrap(), Ratio::ZERO);
    }

    #[test]
    fn lone_vertex() {
        let g = WeightedGraph::new(1, vec![], vec![1]).unwrap();
        let r = brute_beta(&g).unwrap();
        assert!(r.beta.is_zero());
        assert_eq!(r.argmin.as_slice(), &[1]);
    }

    #[test]
    fn incremental_matches_direct_evaluation() {
        let g = WeightedGraph::new(
            5,
            vec![
                Edge::new(0, 1, 3),
                Edge::new(1, 2, 1),
                Edge::new(2, 0, 2),
                Edge::new(3, 4, 5),
                Edge::new(2, 3, 1),
            ],
            vec![2, 1, 4, 3, 1],
        )
        .unwrap();
        let mut best: Option<Ratio> = None;
        for code in 1..3usize.pow(5) {
            let x: Vec<i8> = (0..5)
                .map(|i| [0i8, 1, -1][(code / 3usize.pow(i)) % 3])
                .collect();
            let r = evaluate_beta(&g, &SignVector::new(x).unwrap()).unwrap();
            best = Some(best.map_or(r, |b| b.min(r)));
        }
        assert_eq!(brute_beta(&g).unwrap().beta, best.unwrap());
    }

    #[test]
    fn multigraph_with_loops() {
        let mut m = DemandMultigraph::empty(2);
        m.add(0, 0, 2);
        m.add(0, 1, 1);
        // x = (0, 1): (0 + 1) / 3; x = (1, -1): 4 / 5; x = (1, 0): 5 / 2
        let r = brute_beta_multigraph(&m, &[2, 3]).unwrap();
        assert_eq!(r.beta, Ratio::new(1, 3));
    }

    #[test]
    fn too_large() {
        let g = WeightedGraph::new(17, vec![], vec![1; 17]).unwrap();
        assert_eq!(
            brute_beta(&g).unwrap_err(),
            Error::TooLarge { n: 17, limit: 16 }
        );
        let g = WeightedGraph::new(8, vec![], vec![1; 8]).unwrap();
        assert!(matches!(
            brute_well_linked(&g, 1),
            Err(Error::TooLarge { n: 8, limit: 7 })
        ));
    }

    #[test]
    fn maxcut_small_graphs() {
        assert_eq!(brute_maxcut(&k3()).unwrap().value, Ratio::new(2, 3));
        assert_eq!(brute_maxcut(&c4()).unwrap().value, Ratio::ONE);
        let k4 = unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let cut = brute_maxcut(&k4).unwrap();
        assert_eq!(cut.value, Ratio::new(2, 3));
        assert_eq!(cut.side.len(), 2);
        let empty = WeightedGraph::new(2, vec![], vec![1, 1]).unwrap();
        assert_eq!(brute_maxcut(&empty).unwrap_err(), Error::EmptyGraph);
    }

    #[test]
    fn triangle_linkedness_switches_at_one_third() {
        assert!(brute_well_linked(&k3(), 3).unwrap().linked);
        let two = brute_well_linked(&k3(), 2).unwrap();
        assert!(!two.linked);
        assert!(two.violating_pair.is_some());
    }

    #[test]
    fn bipartite_never_linked() {
        for k in 1..=4 {
            assert!(!brute_well_linked(&c4(), k).unwrap().linked);
        }
    }
}
