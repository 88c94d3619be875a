//! Colorings used as the vertex partition: smallest-last greedy coloring and
//! BFS two-coloring.

use std::collections::{BTreeSet, VecDeque};

use crate::graph::{Graph, Vertex, VertexPartition};

/// Smallest-last elimination order: repeatedly remove a vertex of minimum
/// remaining degree (lowest id on ties). Returns the removal order and the
/// degeneracy (largest degree seen at removal time).
pub fn smallest_last_order(g: &Graph) -> (Vec<Vertex>, usize) {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut queue: BTreeSet<(usize, Vertex)> = g.vertices().map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut degeneracy = 0;
    while let Some((d, v)) = queue.pop_first() {
        degeneracy = degeneracy.max(d);
        removed[v] = true;
        order.push(v);
        for u in g.neighbors(v) {
            if !removed[u] {
                queue.remove(&(deg[u], u));
                deg[u] -= 1;
                queue.insert((deg[u], u));
            }
        }
    }
    (order, degeneracy)
}

pub fn degeneracy(g: &Graph) -> usize {
    smallest_last_order(g).1
}

/// Greedy coloring in reverse smallest-last order, each vertex taking the
/// lowest class not used by an already colored neighbor. Uses at most
/// `degeneracy + 1` classes.
pub fn greedy_partition(g: &Graph) -> VertexPartition {
    let (order, _) = smallest_last_order(g);
    let mut class_of = vec![0usize; g.vertex_count()];
    let mut used = Vec::new();
    for &v in order.iter().rev() {
        used.clear();
        used.extend(g.neighbors(v).map(|u| class_of[u]).filter(|&c| c > 0));
        used.sort_unstable();
        used.dedup();
        let mut c = 1;
        for &x in &used {
            if x == c {
                c += 1;
            } else if x > c {
                break;
            }
        }
        class_of[v] = c;
    }
    let r = class_of.iter().copied().max().unwrap_or(1);
    VertexPartition::new(g, class_of, r).expect("greedy coloring is proper")
}

/// A 2-coloring found by BFS (lowest id roots first), or `None` when `g` has
/// an odd cycle.
pub fn two_coloring(g: &Graph) -> Option<VertexPartition> {
    let n = g.vertex_count();
    let mut class_of = vec![0usize; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if class_of[root] != 0 {
            continue;
        }
        class_of[root] = 1;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for u in g.neighbors(v) {
                if class_of[u] == 0 {
                    class_of[u] = 3 - class_of[v];
                    queue.push_back(u);
                } else if class_of[u] == class_of[v] {
                    return None;
                }
            }
        }
    }
    VertexPartition::new(g, class_of, 2).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Smallest number of colors by trying every assignment.
    fn brute_chromatic(g: &Graph) -> usize {
        let n = g.vertex_count();
        for r in 1..=n {
            let total = r.pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let colors: Vec<usize> = (0..n)
                    .map(|_| {
                        let x = c % r;
                        c /= r;
                        x
                    })
                    .collect();
                if g.edges().iter().all(|&(u, v)| colors[u] != colors[v]) {
                    return r;
                }
            }
        }
        0
    }

    #[test]
    fn k2_needs_two() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(greedy_partition(&g).r(), 2);
    }

    #[test]
    fn c5_needs_three() {
        let g = cycle(5);
        assert_eq!(brute_chromatic(&g), 3);
        assert_eq!(greedy_partition(&g).r(), 3);
        assert!(two_coloring(&g).is_none());
    }

    #[test]
    fn star_is_bipartite() {
        let g = Graph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
        assert_eq!(greedy_partition(&g).r(), 2);
        assert_eq!(degeneracy(&g), 1);
        assert!(two_coloring(&g).is_some());
    }

    #[test]
    fn complete_graph_degeneracy() {
        let g = Graph::from_edges(5, (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b)))).unwrap();
        assert_eq!(degeneracy(&g), 4);
        assert_eq!(greedy_partition(&g).r(), 5);
    }
}
