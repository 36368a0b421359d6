//! Weighted order graphs. An edge `x -> y` with weight `c` encodes `0 <= y - x + c`:
//! `x <= y` has weight `0`, `x < y` has weight `-1`. A set of such constraints is
//! consistent iff the graph has no cycle of negative weight.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderEdge<L> {
    pub from: usize,
    pub to: usize,
    pub weight: i64,
    pub label: L,
}

#[derive(Clone, Debug)]
pub struct OrderGraph<L> {
    nodes: usize,
    edges: Vec<OrderEdge<L>>,
}

/// Path weights between all node pairs; `None` when unreachable.
pub type Distances = Vec<Vec<Option<i64>>>;

impl<L: Clone> OrderGraph<L> {
    pub fn new(nodes: usize) -> Self {
        OrderGraph {
            nodes,
            edges: Vec::new(),
        }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[OrderEdge<L>] {
        &self.edges
    }

    pub fn add_edge(&mut self, from: usize, to: usize, weight: i64, label: L) -> usize {
        assert!(from < self.nodes && to < self.nodes, "edge endpoint out of range");
        self.edges.push(OrderEdge {
            from,
            to,
            weight,
            label,
        });
        self.edges.len() - 1
    }

    /// Label-correcting shortest paths from a virtual source joined to every node by a
    /// zero edge. Returns the potentials, or the edge indices of a negative cycle in path
    /// order. Edges are relaxed in insertion order, so the result is deterministic.
    pub fn potentials(&self) -> Result<Vec<i64>, Vec<usize>> {
        let n = self.nodes;
        let mut dist = vec![0i64; n];
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut last = None;
        for _ in 0..=n {
            last = None;
            for (k, e) in self.edges.iter().enumerate() {
                let cand = dist[e.from] + e.weight;
                if cand < dist[e.to] {
                    dist[e.to] = cand;
                    pred[e.to] = Some(k);
                    last = Some(e.to);
                }
            }
            if last.is_none() {
                return Ok(dist);
            }
        }
        let mut v = last.expect("relaxation continued past n rounds");
        for _ in 0..n {
            v = self.edges[pred[v].expect("relaxed node has a predecessor")].from;
        }
        let start = v;
        let mut cycle = Vec::new();
        loop {
            let k = pred[v].expect("cycle node has a predecessor");
            cycle.push(k);
            v = self.edges[k].from;
            if v == start {
                break;
            }
        }
        cycle.reverse();
        Err(cycle)
    }

    /// Strongly connected components of the edges that are tight under `dist`
    /// (`weight + dist[from] - dist[to] == 0`). Nodes on a common zero-weight cycle end up
    /// in one component. Singletons are omitted.
    pub fn tight_components(&self, dist: &[i64]) -> Vec<Vec<usize>> {
        let mut g: DiGraph<(), ()> = DiGraph::new();
        let ids: Vec<_> = (0..self.nodes).map(|_| g.add_node(())).collect();
        for e in &self.edges {
            if e.weight + dist[e.from] - dist[e.to] == 0 {
                g.add_edge(ids[e.from], ids[e.to], ());
            }
        }
        let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        comps.sort();
        comps
    }

    /// A path of tight edges from `from` to `to`, as edge indices.
    pub fn tight_path(&self, dist: &[i64], from: usize, to: usize) -> Option<Vec<usize>> {
        let mut back: Vec<Option<usize>> = vec![None; self.nodes];
        let mut seen = vec![false; self.nodes];
        let mut queue = std::collections::VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = Vec::new();
                let mut cur = to;
                while cur != from {
                    let k = back[cur].unwrap();
                    path.push(k);
                    cur = self.edges[k].from;
                }
                path.reverse();
                return Some(path);
            }
            for (k, e) in self.edges.iter().enumerate() {
                if e.from == v && !seen[e.to] && e.weight + dist[e.from] - dist[e.to] == 0 {
                    seen[e.to] = true;
                    back[e.to] = Some(k);
                    queue.push_back(e.to);
                }
            }
        }
        None
    }

    /// Minimal path weight between every pair of nodes (Floyd–Warshall).
    #[allow(clippy::needless_range_loop)]
    pub fn all_pairs(&self) -> Distances {
        let n = self.nodes;
        let mut d: Distances = vec![vec![None; n]; n];
        for (v, row) in d.iter_mut().enumerate() {
            row[v] = Some(0);
        }
        for e in &self.edges {
            let cur = &mut d[e.from][e.to];
            if cur.is_none_or(|c| e.weight < c) {
                *cur = Some(e.weight);
            }
        }
        for k in 0..n {
            for i in 0..n {
                let Some(ik) = d[i][k] else { continue };
                for j in 0..n {
                    if let Some(kj) = d[k][j] {
                        let cand = ik + kj;
                        if d[i][j].is_none_or(|c| cand < c) {
                            d[i][j] = Some(cand);
                        }
                    }
                }
            }
        }
        d
    }
}
