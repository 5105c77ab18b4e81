use super::{SignVector, WeightedGraph};
use crate::error::{Error, Result};
use crate::ratio::Ratio;

/// Which copy of a base edge an auxiliary edge is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// `(u⁺, v⁻)` for base edge `{u, v}`.
    PlusToMinus,
    /// `(u⁻, v⁺)`.
    MinusToPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuxEdge {
    pub tail: usize,
    pub head: usize,
    pub w: u64,
    pub base: usize,
    pub orientation: Orientation,
}

/// The doubled graph on `V⁺ ∪ V⁻`.
///
/// Vertex `i⁺` is index `i` and `i⁻` is `n + i`. Each base edge `{u, v}`
/// yields `(u⁺, v⁻)` and `(u⁻, v⁺)`, so the graph is bipartite between the
/// two copies and invariant under swapping them.
#[derive(Debug, Clone)]
pub struct AuxiliaryGraph<'g> {
    base: &'g WeightedGraph,
    edges: Vec<AuxEdge>,
}

impl<'g> AuxiliaryGraph<'g> {
    pub fn build(base: &'g WeightedGraph) -> Self {
        let n = base.n();
        let edges = base
            .edges()
            .iter()
            .enumerate()
            .flat_map(|(id, e)| {
                [
                    AuxEdge {
                        tail: e.u,
                        head: n + e.v,
                        w: e.w,
                        base: id,
                        orientation: Orientation::PlusToMinus,
                    },
                    AuxEdge {
                        tail: n + e.u,
                        head: e.v,
                        w: e.w,
                        base: id,
                        orientation: Orientation::MinusToPlus,
                    },
                ]
            })
            .collect();
        AuxiliaryGraph { base, edges }
    }

    pub fn base(&self) -> &'g WeightedGraph {
        self.base
    }

    pub fn base_n(&self) -> usize {
        self.base.n()
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.base.n()
    }

    pub fn edges(&self) -> &[AuxEdge] {
        &self.edges
    }

    pub fn plus(&self, i: usize) -> usize {
        i
    }

    pub fn minus(&self, i: usize) -> usize {
        self.base.n() + i
    }

    pub fn is_plus(&self, u: usize) -> bool {
        u < self.base.n()
    }

    pub fn base_vertex(&self, u: usize) -> usize {
        u % self.base.n()
    }

    /// The other copy: `i⁺ ↔ i⁻`.
    pub fn mirror(&self, u: usize) -> usize {
        let n = self.base.n();
        if u < n {
            u + n
        } else {
            u - n
        }
    }

    /// `b(i⁺) = b(i⁻) = b(i)`.
    pub fn vertex_weight(&self, u: usize) -> u64 {
        self.base.b()[self.base_vertex(u)]
    }

    /// Membership vector of `S = L⁺ ∪ R⁻` over `V'`.
    pub fn selection(&self, left: &[usize], right: &[usize]) -> Result<Vec<bool>> {
        let x = SignVector::from_sets(self.base.n(), left, right)?;
        if x.is_zero() {
            return Err(Error::EmptySelection);
        }
        Ok(self.selection_of(&x))
    }

    pub fn selection_of(&self, x: &SignVector) -> Vec<bool> {
        let n = self.base.n();
        let mut member = vec![false; 2 * n];
        for (i, &v) in x.as_slice().iter().enumerate() {
            match v {
                1 => member[i] = true,
                -1 => member[n + i] = true,
                _ => {}
            }
        }
        member
    }

    /// `w(E'(S, S̄)) / b(S)` for `S = L⁺ ∪ R⁻`.
    pub fn cut_ratio(&self, left: &[usize], right: &[usize]) -> Result<Ratio> {
        let member = self.selection(left, right)?;
        Ok(self.set_cut_ratio(&member))
    }

    /// Cut ratio of an arbitrary nonempty vertex subset of `V'`.
    pub fn set_cut_ratio(&self, member: &[bool]) -> Ratio {
        let num: u64 = self
            .edges
            .iter()
            .filter(|e| member[e.tail] != member[e.head])
            .map(|e| e.w)
            .sum();
        let den: u64 = (0..self.vertex_count())
            .filter(|&u| member[u])
            .map(|u| self.vertex_weight(u))
            .sum();
        Ratio::new(num, den.max(1))
    }
}

/// Free-function form of [`AuxiliaryGraph::build`].
pub fn build_auxiliary_graph(base: &WeightedGraph) -> AuxiliaryGraph<'_> {
    AuxiliaryGraph::build(base)
}

/// Free-function form of [`AuxiliaryGraph::cut_ratio`].
pub fn aux_cut_ratio(aux: &AuxiliaryGraph<'_>, left: &[usize], right: &[usize]) -> Result<Ratio> {
    aux.cut_ratio(left, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{evaluate_beta, tripartition, Edge};

    fn k3() -> WeightedGraph {
        WeightedGraph::with_degree_weights(
            3,
            vec![Edge::new(0, 1, 1), Edge::new(0, 2, 1), Edge::new(1, 2, 1)],
        )
        .unwrap()
    }

    fn assert_structure(aux: &AuxiliaryGraph<'_>) {
        let n = aux.base_n();
        assert_eq!(aux.edges().len(), 2 * aux.base().m());
        for e in aux.edges() {
            // bipartite between the copies
            assert_ne!(e.tail < n, e.head < n);
            // skew-symmetric partner exists with equal weight
            let twin = aux
                .edges()
                .iter()
                .filter(|f| f.tail == aux.mirror(e.tail) && f.head == aux.mirror(e.head))
                .map(|f| f.w)
                .sum::<u64>();
            let same = aux
                .edges()
                .iter()
                .filter(|f| f.tail == e.tail && f.head == e.head)
                .map(|f| f.w)
                .sum::<u64>();
            assert_eq!(twin, same);
        }
    }

    #[test]
    fn single_edge_unrolled() {
        let g = WeightedGraph::new(2, vec![Edge::new(0, 1, 1)], vec![1, 1]).unwrap();
        let aux = build_auxiliary_graph(&g);
        let pairs: Vec<_> = aux.edges().iter().map(|e| (e.tail, e.head)).collect();
        assert_eq!(pairs, vec![(0, 3), (2, 1)]);
        assert_structure(&aux);
    }

    #[test]
    fn k3_and_empty_graph() {
        let g = k3();
        let aux = build_auxiliary_graph(&g);
        assert_eq!(aux.vertex_count(), 6);
        assert_eq!(aux.edges().len(), 6);
        assert_structure(&aux);

        let empty = WeightedGraph::new(3, vec![], vec![1, 1, 1]).unwrap();
        let aux = build_auxiliary_graph(&empty);
        assert_eq!(aux.vertex_count(), 6);
        assert!(aux.edges().is_empty());
    }

    #[test]
    fn k3_single_vertex_cut() {
        let g = k3();
        let aux = build_auxiliary_graph(&g);
        let ratio = aux_cut_ratio(&aux, &[0], &[]).unwrap();
        assert_eq!((ratio.num(), ratio.den()), (2, 2));
        let x = SignVector::new(vec![1, 0, 0]).unwrap();
        assert_eq!(evaluate_beta(&g, &x).unwrap(), ratio);
    }

    #[test]
    fn c4_bipartition_and_single_edge_split() {
        let c4 = WeightedGraph::with_degree_weights(
            4,
            vec![
                Edge::new(0, 1, 1),
                Edge::new(1, 2, 1),
                Edge::new(2, 3, 1),
                Edge::new(3, 0, 1),
            ],
        )
        .unwrap();
        let ratio = aux_cut_ratio(&build_auxiliary_graph(&c4), &[0, 2], &[1, 3]).unwrap();
        assert_eq!((ratio.num(), ratio.den()), (0, 8));

        let g = WeightedGraph::new(2, vec![Edge::new(0, 1, 1)], vec![1, 1]).unwrap();
        let ratio = aux_cut_ratio(&build_auxiliary_graph(&g), &[0], &[1]).unwrap();
        assert!(ratio.is_zero());
        let x = SignVector::new(vec![1, -1]).unwrap();
        assert!(evaluate_beta(&g, &x).unwrap().is_zero());
    }

    #[test]
    fn empty_selection_rejected() {
        let g = k3();
        let aux = build_auxiliary_graph(&g);
        assert_eq!(aux_cut_ratio(&aux, &[], &[]), Err(Error::EmptySelection));
        assert_eq!(aux_cut_ratio(&aux, &[0], &[0]), Err(Error::EmptySelection));
    }

    #[test]
    fn claim_equality_exhaustive_on_weighted_k4() {
        let g = WeightedGraph::new(
            4,
            vec![
                Edge::new(0, 1, 3),
                Edge::new(0, 2, 1),
                Edge::new(0, 3, 2),
                Edge::new(1, 2, 5),
                Edge::new(1, 3, 1),
                Edge::new(2, 3, 4),
                Edge::new(2, 3, 1),
            ],
            vec![2, 1, 3, 5],
        )
        .unwrap();
        let aux = build_auxiliary_graph(&g);
        for code in 1..81usize {
            let x: Vec<i8> = (0..4)
                .map(|i| [0i8, 1, -1][(code / 3usize.pow(i)) % 3])
                .collect();
            let x = SignVector::new(x).unwrap();
            let parts = tripartition(&x);
            assert_eq!(
                evaluate_beta(&g, &x).unwrap(),
                aux_cut_ratio(&aux, &parts.left, &parts.right).unwrap()
            );
        }
    }
}
