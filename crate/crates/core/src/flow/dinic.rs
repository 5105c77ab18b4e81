//! Blocking-flow (level graph) max-flow over integer capacities.
//!
//! Residual arcs come in pairs `2a` / `2a + 1`. An undirected edge is a pair
//! whose two halves both start at the full capacity, so its net flow lives in
//! `[-c, c]` and both directions share one capacity.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
pub struct Dinic {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    residual: Vec<i64>,
    capacity: Vec<i64>,
    level: Vec<i32>,
    cursor: Vec<usize>,
}

/// Handle of an arc added to a [`Dinic`] instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcHandle(usize);

impl Dinic {
    pub fn new(nodes: usize) -> Self {
        Dinic {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            residual: Vec::new(),
            capacity: Vec::new(),
            level: vec![-1; nodes],
            cursor: vec![0; nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Directed arc `u -> v`.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: i64) -> ArcHandle {
        self.push_pair(u, v, cap, 0)
    }

    /// Undirected edge `{u, v}`; positive net flow means `u -> v`.
    pub fn add_undirected(&mut self, u: usize, v: usize, cap: i64) -> ArcHandle {
        self.push_pair(u, v, cap, cap)
    }

    fn push_pair(&mut self, u: usize, v: usize, forward: i64, backward: i64) -> ArcHandle {
        assert!(forward >= 0 && backward >= 0, "capacities must be nonnegative");
        let id = self.to.len();
        self.to.push(v);
        self.residual.push(forward);
        self.capacity.push(forward);
        self.adj[u].push(id);
        self.to.push(u);
        self.residual.push(backward);
        self.capacity.push(backward);
        self.adj[v].push(id + 1);
        ArcHandle(id)
    }

    /// Net flow along the arc in its `u -> v` direction.
    pub fn flow(&self, arc: ArcHandle) -> i64 {
        self.capacity[arc.0] - self.residual[arc.0]
    }

    pub fn max_flow(&mut self, source: usize, sink: usize) -> i64 {
        assert_ne!(source, sink);
        let mut total = 0i64;
        while self.build_levels(source, sink) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            loop {
                let pushed = self.augment(source, sink, i64::MAX);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    fn build_levels(&mut self, source: usize, sink: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.residual[a] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[sink] >= 0
    }

    fn augment(&mut self, u: usize, sink: usize, limit: i64) -> i64 {
        if u == sink {
            return limit;
        }
        while self.cursor[u] < self.adj[u].len() {
            let a = self.adj[u][self.cursor[u]];
            let v = self.to[a];
            if self.residual[a] > 0 && self.level[v] == self.level[u] + 1 {
                let pushed = self.augment(v, sink, limit.min(self.residual[a]));
                if pushed > 0 {
                    self.residual[a] -= pushed;
                    self.residual[a ^ 1] += pushed;
                    return pushed;
                }
            }
            self.cursor[u] += 1;
        }
        0
    }

    /// Nodes reachable from `source` in the current residual graph.
    pub fn reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        seen[source] = true;
        let mut stack = vec![source];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.residual[a] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bottleneck_path() {
        // s -> a (2), a - b (1), b -> t (2)
        let mut d = Dinic::new(4);
        d.add_arc(0, 1, 2);
        let mid = d.add_undirected(1, 2, 1);
        d.add_arc(2, 3, 2);
        assert_eq!(d.max_flow(0, 3), 1);
        assert_eq!(d.flow(mid), 1);
        let side = d.reachable(0);
        assert_eq!(side, vec![true, true, false, false]);
    }

    #[test]
    fn undirected_edge_carries_flow_backwards() {
        let mut d = Dinic::new(4);
        d.add_arc(0, 2, 3);
        let mid = d.add_undirected(1, 2, 5);
        d.add_arc(1, 3, 3);
        assert_eq!(d.max_flow(0, 3), 3);
        assert_eq!(d.flow(mid), -3);
    }

    #[test]
    fn two_parallel_paths() {
        let mut d = Dinic::new(4);
        d.add_arc(0, 1, 1);
        d.add_arc(0, 2, 1);
        d.add_arc(1, 3, 1);
        d.add_arc(2, 3, 1);
        assert_eq!(d.max_flow(0, 3), 2);
    }

    #[test]
    fn disconnected_is_zero() {
        let mut d = Dinic::new(3);
        d.add_arc(0, 1, 4);
        assert_eq!(d.max_flow(0, 2), 0);
    }
}
