//! Simple undirected graphs, vertex partitions, integral orientations and the
//! proper-orientation checker.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Dense vertex id in `0..n`.
pub type Vertex = usize;
/// Dense edge id in `0..m`.
pub type EdgeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("edge {0}-{1} is not in the graph")]
    MissingEdge(Vertex, Vertex),
    #[error("edge {0}-{1} is oriented twice")]
    DuplicateOrientation(Vertex, Vertex),
    #[error("edge {0}-{1} is not oriented")]
    UnorientedEdge(Vertex, Vertex),
    #[error("partition covers {got} vertices, graph has {expected}")]
    PartitionSize { expected: usize, got: usize },
    #[error("orientation covers {got} edges, graph has {expected}")]
    OrientationSize { expected: usize, got: usize },
    #[error("class {class} of vertex {vertex} is outside 1..={r}")]
    ClassOutOfRange { vertex: Vertex, class: usize, r: usize },
    #[error("partition is not proper: edge {0}-{1} joins vertices of the same class")]
    ImproperPartition(Vertex, Vertex),
}

/// An undirected simple graph on vertices `0..n`.
///
/// Edges are stored with `u < v`; adjacency lists are sorted by neighbor id
/// and carry the edge id alongside the neighbor.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    edges: Vec<(Vertex, Vertex)>,
    adjacency: Vec<Vec<(Vertex, EdgeId)>>,
    index: HashMap<(Vertex, Vertex), EdgeId>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges (in either direction)
    /// are collapsed; self-loops are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, GraphError> {
        let labels = (0..n).map(|v| v.to_string()).collect();
        Self::with_labels(labels, edges).map(|(g, _)| g)
    }

    /// Like [`Graph::from_edges`] with explicit vertex labels. Also returns the
    /// number of duplicate edges that were dropped.
    pub fn with_labels(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<(Self, usize), GraphError> {
        let n = labels.len();
        let mut list = Vec::new();
        let mut index = HashMap::new();
        let mut duplicates = 0;
        for (a, b) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let key = (a.min(b), a.max(b));
            if index.contains_key(&key) {
                duplicates += 1;
                continue;
            }
            index.insert(key, list.len());
            list.push(key);
        }
        let mut adjacency = vec![Vec::new(); n];
        for (e, &(u, v)) in list.iter().enumerate() {
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Ok((
            Graph {
                labels,
                edges: list,
                adjacency,
                index,
            },
            duplicates,
        ))
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count()
    }

    /// Edges as `(u, v)` with `u < v`, indexed by [`EdgeId`].
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    /// Sorted `(neighbor, edge id)` pairs.
    pub fn incident(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adjacency[v].iter().map(|&(u, _)| u)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        self.index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    pub fn is_forest(&self) -> bool {
        // union-find; an edge inside one component closes a cycle
        let mut parent: Vec<usize> = (0..self.vertex_count()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count() > 0 && self.is_connected() && self.is_forest()
    }

    /// The subgraph induced by `keep`, relabelled densely in the given order.
    pub fn induced(&self, keep: &[Vertex]) -> Graph {
        let mut pos = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]));
        Graph::with_labels(labels, edges).expect("induced subgraph is simple").0
    }
}

/// A vertex partition `V_1 ∪ … ∪ V_r`. Classes are 1-based; a class may be
/// empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexPartition {
    class_of: Vec<usize>,
    r: usize,
}

impl VertexPartition {
    /// Validates that every class lies in `1..=r` and that the partition is a
    /// proper coloring of `g`.
    pub fn new(g: &Graph, class_of: Vec<usize>, r: usize) -> Result<Self, GraphError> {
        if class_of.len() != g.vertex_count() {
            return Err(GraphError::PartitionSize {
                expected: g.vertex_count(),
                got: class_of.len(),
            });
        }
        for (vertex, &class) in class_of.iter().enumerate() {
            if class == 0 || class > r {
                return Err(GraphError::ClassOutOfRange { vertex, class, r });
            }
        }
        for &(u, v) in g.edges() {
            if class_of[u] == class_of[v] {
                return Err(GraphError::ImproperPartition(u, v));
            }
        }
        Ok(VertexPartition { class_of, r })
    }

    /// Number of classes (including empty ones).
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn class_of(&self, v: Vertex) -> usize {
        self.class_of[v]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class_of
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = Vertex> + '_ {
        self.class_of
            .iter()
            .enumerate()
            .filter(move |&(_, &c)| c == class)
            .map(|(v, _)| v)
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.r];
        for &c in &self.class_of {
            sizes[c - 1] += 1;
        }
        sizes
    }
}

/// Every edge carries one direction, stored as the tail (the vertex the edge
/// leaves).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralOrientation {
    tail: Vec<Vertex>,
    outdegree: Vec<usize>,
}

impl IntegralOrientation {
    /// `tail[e]` must be an endpoint of edge `e`.
    pub fn from_tails(g: &Graph, tail: Vec<Vertex>) -> Result<Self, GraphError> {
        if tail.len() != g.edge_count() {
            return Err(GraphError::OrientationSize {
                expected: g.edge_count(),
                got: tail.len(),
            });
        }
        let mut outdegree = vec![0; g.vertex_count()];
        for (e, &t) in tail.iter().enumerate() {
            let (u, v) = g.endpoints(e);
            if t != u && t != v {
                return Err(GraphError::MissingEdge(u, t));
            }
            outdegree[t] += 1;
        }
        Ok(IntegralOrientation { tail, outdegree })
    }

    /// Builds an orientation from a list of arcs `u -> v`. Every arc must be
    /// an edge of `g` and every edge must be oriented exactly once.
    pub fn from_arcs(g: &Graph, arcs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, GraphError> {
        let mut tail = vec![usize::MAX; g.edge_count()];
        for (u, v) in arcs {
            let e = g.edge_id(u, v).ok_or(GraphError::MissingEdge(u, v))?;
            if tail[e] != usize::MAX {
                return Err(GraphError::DuplicateOrientation(u, v));
            }
            tail[e] = u;
        }
        if let Some(e) = tail.iter().position(|&t| t == usize::MAX) {
            let (u, v) = g.endpoints(e);
            return Err(GraphError::UnorientedEdge(u, v));
        }
        Self::from_tails(g, tail)
    }

    pub fn tail(&self, e: EdgeId) -> Vertex {
        self.tail[e]
    }

    pub fn outdegree(&self, v: Vertex) -> usize {
        self.outdegree[v]
    }

    pub fn outdegrees(&self) -> &[usize] {
        &self.outdegree
    }

    pub fn max_outdegree(&self) -> usize {
        self.outdegree.iter().copied().max().unwrap_or(0)
    }

    /// Arcs `(tail, head)` in edge-id order.
    pub fn arcs<'a>(&'a self, g: &'a Graph) -> impl Iterator<Item = (Vertex, Vertex)> + 'a {
        g.edges()
            .iter()
            .enumerate()
            .map(move |(e, &(u, v))| if self.tail[e] == u { (u, v) } else { (v, u) })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub is_proper: bool,
    pub max_outdegree: usize,
    /// Edges whose endpoints share an outdegree.
    pub violations: Vec<(Vertex, Vertex)>,
    pub bound: usize,
    pub bound_respected: bool,
}

/// Checks that adjacent vertices receive different outdegrees and that the
/// maximum outdegree is at most `bound`.
pub fn verify_proper_orientation(
    g: &Graph,
    o: &IntegralOrientation,
    bound: usize,
) -> Result<VerificationReport, GraphError> {
    if o.tail.len() != g.edge_count() || o.outdegree.len() != g.vertex_count() {
        return Err(GraphError::OrientationSize {
            expected: g.edge_count(),
            got: o.tail.len(),
        });
    }
    // Recount rather than trusting the cached outdegrees.
    let mut out = vec![0usize; g.vertex_count()];
    for (e, &t) in o.tail.iter().enumerate() {
        let (u, v) = g.endpoints(e);
        if t != u && t != v {
            return Err(GraphError::MissingEdge(u, v));
        }
        out[t] += 1;
    }
    let violations: Vec<_> = g.edges().iter().copied().filter(|&(u, v)| out[u] == out[v]).collect();
    let max_outdegree = out.iter().copied().max().unwrap_or(0);
    Ok(VerificationReport {
        is_proper: violations.is_empty(),
        max_outdegree,
        violations,
        bound,
        bound_respected: max_outdegree <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn duplicate_edges_collapse() {
        let (g, dups) = Graph::with_labels(vec!["a".into(), "b".into()], [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(dups, 1);
    }

    #[test]
    fn self_loop_rejected() {
        assert_eq!(Graph::from_edges(1, [(0, 0)]), Err(GraphError::SelfLoop(0)));
    }

    #[test]
    fn single_edge_is_proper() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let o = IntegralOrientation::from_arcs(&g, [(0, 1)]).unwrap();
        let r = verify_proper_orientation(&g, &o, 1).unwrap();
        assert!(r.is_proper);
        assert_eq!(r.max_outdegree, 1);
        assert!(r.bound_respected);
    }

    #[test]
    fn cyclic_triangle_is_not_proper() {
        let g = triangle();
        let o = IntegralOrientation::from_arcs(&g, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let r = verify_proper_orientation(&g, &o, 2).unwrap();
        assert!(!r.is_proper);
        assert_eq!(r.violations.len(), 3);
    }

    #[test]
    fn transitive_triangle_is_proper() {
        let g = triangle();
        let o = IntegralOrientation::from_arcs(&g, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let r = verify_proper_orientation(&g, &o, 2).unwrap();
        assert!(r.is_proper);
        assert_eq!(r.max_outdegree, 2);
        assert_eq!(o.outdegrees(), &[2, 1, 0]);
    }

    #[test]
    fn orientation_must_cover_edges() {
        let g = triangle();
        assert_eq!(
            IntegralOrientation::from_arcs(&g, [(0, 1), (0, 2)]),
            Err(GraphError::UnorientedEdge(1, 2))
        );
        let p = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            IntegralOrientation::from_arcs(&p, [(0, 1), (1, 2), (0, 2)]),
            Err(GraphError::MissingEdge(0, 2))
        );
    }

    #[test]
    fn partition_must_be_proper() {
        let g = triangle();
        assert!(VertexPartition::new(&g, vec![1, 2, 3], 3).is_ok());
        assert_eq!(
            VertexPartition::new(&g, vec![1, 1, 2], 2),
            Err(GraphError::ImproperPartition(0, 1))
        );
        assert!(matches!(
            VertexPartition::new(&g, vec![1, 2, 4], 3),
            Err(GraphError::ClassOutOfRange { .. })
        ));
    }

    #[test]
    fn forest_and_tree_detection() {
        assert!(!triangle().is_forest());
        let p = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(p.is_tree());
        let f = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(f.is_forest() && !f.is_tree());
    }
}
