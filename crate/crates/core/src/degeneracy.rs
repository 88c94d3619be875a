//! Base `k`-orientations.
//!
//! A graph has an orientation with every outdegree at most `k` exactly when
//! its maximum average degree is at most `2k`. [`build_k_orientation`] is the
//! constructive side: it starts from an arbitrary orientation and repairs
//! overloaded vertices by reversing directed paths. When a repair is
//! impossible, the vertices reachable from the overloaded vertex form a
//! subgraph of average degree greater than `2k`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::{EdgeId, Graph, IntegralOrientation, Vertex};

/// A fixed `k`-orientation `D_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseOrientation {
    k: usize,
    tail: Vec<Vertex>,
    out_of: Vec<Vec<Vertex>>,
}

impl BaseOrientation {
    pub fn k(&self) -> usize {
        self.k
    }

    /// The vertex edge `e` leaves in `D_0`.
    pub fn tail(&self, e: EdgeId) -> Vertex {
        self.tail[e]
    }

    /// Is edge `e` an out-edge of `v` in `D_0`?
    pub fn is_out(&self, v: Vertex, e: EdgeId) -> bool {
        self.tail[e] == v
    }

    /// `D_0`-out-neighbors of `v`, ascending.
    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out_of[v]
    }

    pub fn outdegree(&self, v: Vertex) -> usize {
        self.out_of[v].len()
    }

    pub fn as_orientation(&self, g: &Graph) -> IntegralOrientation {
        IntegralOrientation::from_tails(g, self.tail.clone()).expect("base orientation covers E(G)")
    }

    fn from_tails(g: &Graph, k: usize, tail: Vec<Vertex>) -> Self {
        let mut out_of = vec![Vec::new(); g.vertex_count()];
        for (e, &t) in tail.iter().enumerate() {
            let (u, v) = g.endpoints(e);
            out_of[t].push(if t == u { v } else { u });
        }
        for list in &mut out_of {
            list.sort_unstable();
        }
        BaseOrientation { k, tail, out_of }
    }
}

/// A vertex set whose induced subgraph has more than `k * |S|` edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfeasibilityWitness {
    pub k: usize,
    pub vertex_set: Vec<Vertex>,
    pub edge_count: usize,
}

impl InfeasibilityWitness {
    /// `2|E(G[S])| > 2k|S|`, checked by counting.
    pub fn certifies(&self, g: &Graph) -> bool {
        let mut inside = vec![false; g.vertex_count()];
        for &v in &self.vertex_set {
            inside[v] = true;
        }
        let edges = g.edges().iter().filter(|&&(u, v)| inside[u] && inside[v]).count();
        edges == self.edge_count && edges > self.k * self.vertex_set.len()
    }
}

/// Builds a `k`-orientation or proves that none exists.
///
/// Edges start oriented from the lower id to the higher. While some vertex
/// has outdegree above `k` (lowest id first), a breadth-first search along
/// out-arcs (lowest neighbor first) looks for a vertex with outdegree below
/// `k`; the path to it is reversed. If no such vertex is reachable, the
/// reachable set is closed under out-arcs and every member has outdegree at
/// least `k`, one strictly more, so it is returned as the witness.
pub fn build_k_orientation(g: &Graph, k: usize) -> Result<BaseOrientation, InfeasibilityWitness> {
    let n = g.vertex_count();
    let mut tail: Vec<Vertex> = g.edges().iter().map(|&(u, _)| u).collect();
    let mut out = vec![0usize; n];
    for &t in &tail {
        out[t] += 1;
    }
    let mut parent_edge = vec![usize::MAX; n];
    let mut visited = vec![false; n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    let mut next = 0;
    while next < n {
        let v = next;
        if out[v] <= k {
            next += 1;
            continue;
        }
        for &x in &touched {
            visited[x] = false;
            parent_edge[x] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        visited[v] = true;
        touched.push(v);
        queue.push_back(v);
        let mut target = None;
        'bfs: while let Some(x) = queue.pop_front() {
            for &(y, e) in g.incident(x) {
                if tail[e] != x || visited[y] {
                    continue;
                }
                visited[y] = true;
                touched.push(y);
                parent_edge[y] = e;
                if out[y] < k {
                    target = Some(y);
                    break 'bfs;
                }
                queue.push_back(y);
            }
        }
        match target {
            Some(mut y) => {
                // Reverse the path v -> ... -> y.
                out[y] += 1;
                while y != v {
                    let e = parent_edge[y];
                    let (a, b) = g.endpoints(e);
                    let x = if a == y { b } else { a };
                    tail[e] = y;
                    y = x;
                }
                out[v] -= 1;
            }
            None => {
                let mut vertex_set: Vec<Vertex> = touched.clone();
                vertex_set.sort_unstable();
                let edge_count = vertex_set
                    .iter()
                    .map(|&x| g.incident(x).iter().filter(|&&(y, _)| visited[y] && y > x).count())
                    .sum();
                return Err(InfeasibilityWitness {
                    k,
                    vertex_set,
                    edge_count,
                });
            }
        }
    }
    Ok(BaseOrientation::from_tails(g, k, tail))
}

/// Smallest `k` admitting a `k`-orientation, i.e. `⌈MAD(G)/2⌉`, found by
/// doubling followed by binary search.
pub fn min_orientation_k(g: &Graph) -> usize {
    if g.edge_count() == 0 {
        return 0;
    }
    let feasible = |k: usize| build_k_orientation(g, k).is_ok();
    let mut hi = 1;
    while !feasible(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2; // infeasible, or 0 which is infeasible with edges
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).unwrap()
    }

    fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::from_edges(a + b, (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y)))).unwrap()
    }

    fn check(g: &Graph, base: &BaseOrientation) {
        for v in g.vertices() {
            assert!(base.outdegree(v) <= base.k());
        }
        let o = base.as_orientation(g);
        assert_eq!(o.outdegrees().iter().sum::<usize>(), g.edge_count());
    }

    #[test]
    fn c4_with_k1() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let base = build_k_orientation(&g, 1).unwrap();
        check(&g, &base);
        assert!(g.vertices().all(|v| base.outdegree(v) == 1));
    }

    #[test]
    fn k4_with_k1_fails_on_whole_graph() {
        let g = complete(4);
        let w = build_k_orientation(&g, 1).unwrap_err();
        assert_eq!(w.vertex_set, vec![0, 1, 2, 3]);
        assert_eq!(w.edge_count, 6);
        assert!(w.certifies(&g));
    }

    #[test]
    fn k4_with_k2() {
        let g = complete(4);
        check(&g, &build_k_orientation(&g, 2).unwrap());
    }

    #[test]
    fn min_k_examples() {
        let tree = Graph::from_edges(5, [(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(min_orientation_k(&tree), 1);
        assert_eq!(min_orientation_k(&complete_bipartite(3, 3)), 2);
        assert_eq!(min_orientation_k(&complete(5)), 2);
        assert_eq!(min_orientation_k(&complete(7)), 3);
        assert_eq!(min_orientation_k(&Graph::from_edges(3, []).unwrap()), 0);
    }

    #[test]
    fn k_zero_needs_no_edges() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let w = build_k_orientation(&g, 0).unwrap_err();
        assert!(w.certifies(&g));
    }
}
