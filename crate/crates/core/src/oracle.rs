//! Exhaustive reference computations for small graphs. Nothing in the
//! pipeline calls these; they exist to test it.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{Graph, IntegralOrientation, Vertex};
use crate::rational::{ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub time_cap: Option<Duration>,
}

impl Default for OracleBudget {
    /// Enough for every graph on seven vertices, `K_7` included.
    fn default() -> Self {
        OracleBudget {
            max_vertices: 16,
            max_edges: 28,
            time_cap: None,
        }
    }
}

impl OracleBudget {
    /// Subset enumeration for the maximum average degree.
    pub fn mad_default() -> Self {
        OracleBudget {
            max_vertices: 20,
            max_edges: usize::MAX,
            time_cap: None,
        }
    }

    fn admit(&self, g: &Graph) -> Result<(), OracleError> {
        if g.vertex_count() > self.max_vertices || g.edge_count() > self.max_edges {
            return Err(OracleError::OverBudget {
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                max_vertices: self.max_vertices,
                max_edges: self.max_edges,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{vertices} vertices / {edges} edges exceed the budget of {max_vertices} / {max_edges}")]
    OverBudget {
        vertices: usize,
        edges: usize,
        max_vertices: usize,
        max_edges: usize,
    },
    #[error("search exceeded its time cap")]
    TimedOut,
    #[error("graph is not a tree")]
    NotATree,
}

struct Backtrack<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    cap: usize,
    out: Vec<usize>,
    left: Vec<usize>,
    tail: Vec<Vertex>,
    deadline: Option<Instant>,
    steps: u64,
    timed_out: bool,
}

impl Backtrack<'_> {
    /// A vertex with no undecided edge must differ from every finished
    /// neighbor.
    fn finished_ok(&self, v: Vertex) -> bool {
        self.left[v] > 0
            || self
                .g
                .neighbors(v)
                .all(|u| self.left[u] > 0 || self.out[u] != self.out[v])
    }

    fn search(&mut self, idx: usize) -> bool {
        if idx == self.order.len() {
            return true;
        }
        self.steps += 1;
        if self.steps.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return false;
        }
        let e = self.order[idx];
        let (u, v) = self.g.endpoints(e);
        for (a, b) in [(u, v), (v, u)] {
            if self.out[a] == self.cap {
                continue;
            }
            self.out[a] += 1;
            self.left[a] -= 1;
            self.left[b] -= 1;
            self.tail[e] = a;
            if self.finished_ok(a) && self.finished_ok(b) && self.search(idx + 1) {
                return true;
            }
            self.out[a] -= 1;
            self.left[a] += 1;
            self.left[b] += 1;
        }
        false
    }
}

/// Exact proper orientation number: the smallest `l` admitting a proper
/// orientation with all outdegrees at most `l`, with a witness.
///
/// Tries `l = 0, 1, ...` and backtracks over edge directions, heaviest
/// degree-sum edges first, pruning on the outdegree cap and on finished
/// adjacent vertices with equal outdegree.
pub fn exact_proper_chromatic(g: &Graph, budget: &OracleBudget) -> Result<(usize, IntegralOrientation), OracleError> {
    budget.admit(g)?;
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&e| {
        let (u, v) = g.endpoints(e);
        (std::cmp::Reverse(g.degree(u) + g.degree(v)), e)
    });
    let deadline = budget.time_cap.map(|d| Instant::now() + d);
    for cap in 0.. {
        let mut bt = Backtrack {
            g,
            order: order.clone(),
            cap,
            out: vec![0; g.vertex_count()],
            left: g.vertices().map(|v| g.degree(v)).collect(),
            tail: vec![0; g.edge_count()],
            deadline,
            steps: 0,
            timed_out: false,
        };
        if bt.search(0) {
            let o = IntegralOrientation::from_tails(g, bt.tail).expect("every edge decided");
            return Ok((cap, o));
        }
        if bt.timed_out {
            return Err(OracleError::TimedOut);
        }
    }
    unreachable!("some cap up to the maximum degree always works")
}

/// Exact proper orientation number of a tree by dynamic programming.
///
/// For a vertex `v`, an outdegree `d` and the direction of the edge to its
/// parent, the table records whether the subtree admits a proper
/// orientation. A child edge may point out of `v` when the child has some
/// feasible outdegree other than `d` with its parent edge pointing in, and
/// vice versa; `v` then needs a number of out-edges among its children
/// between the forced and the forced-plus-free count. The cap on outdegrees
/// is raised until the root is feasible.
pub fn exact_proper_chromatic_tree(g: &Graph) -> Result<(usize, IntegralOrientation), OracleError> {
    if !g.is_tree() {
        return Err(OracleError::NotATree);
    }
    let n = g.vertex_count();
    // BFS order from vertex 0, parents and children.
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    if n > 0 {
        seen[0] = true;
        order.push(0);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = v;
                    order.push(u);
                }
            }
        }
    }
    let kids: Vec<Vec<Vertex>> = g
        .vertices()
        .map(|v| g.neighbors(v).filter(|&u| parent[u] == v).collect())
        .collect();

    for cap in 0.. {
        let width = cap + 1;
        // feasible[v][dir * width + d], dir 0: parent -> v, dir 1: v -> parent.
        let mut feasible = vec![vec![false; 2 * width]; n];
        for &v in order.iter().rev() {
            for dir in 0..2 {
                for d in 0..width {
                    let Some(need) = d.checked_sub(dir) else { continue };
                    let (mut forced_out, mut free, mut ok) = (0, 0, true);
                    for &c in &kids[v] {
                        // v -> c means c sees its parent edge pointing in.
                        let can_out = (0..width).any(|x| x != d && feasible[c][x]);
                        let can_in = (0..width).any(|x| x != d && feasible[c][width + x]);
                        match (can_out, can_in) {
                            (true, true) => free += 1,
                            (true, false) => forced_out += 1,
                            (false, true) => {}
                            (false, false) => ok = false,
                        }
                    }
                    if v == 0 && dir == 1 {
                        ok = false;
                    }
                    feasible[v][dir * width + d] = ok && forced_out <= need && need <= forced_out + free;
                }
            }
        }
        if n == 0 || !(0..width).any(|d| feasible[0][d]) {
            if n == 0 {
                return Ok((0, IntegralOrientation::from_tails(g, Vec::new()).expect("no edges")));
            }
            continue;
        }
        // Rebuild one orientation top-down.
        let mut tail = vec![0; g.edge_count()];
        let mut chosen = vec![(0usize, 0usize); n]; // (d, dir)
        chosen[0] = ((0..width).find(|&d| feasible[0][d]).unwrap(), 0);
        for &v in &order {
            let (d, dir) = chosen[v];
            let mut need = d - dir;
            let mut flexible = Vec::new();
            let pick = |c: Vertex, cdir: usize| (0..width).find(|&x| x != d && feasible[c][cdir * width + x]).unwrap();
            for &c in &kids[v] {
                let can_out = (0..width).any(|x| x != d && feasible[c][x]);
                let can_in = (0..width).any(|x| x != d && feasible[c][width + x]);
                let e = g.edge_id(v, c).unwrap();
                match (can_out, can_in) {
                    (true, false) => {
                        tail[e] = v;
                        chosen[c] = (pick(c, 0), 0);
                        need -= 1;
                    }
                    (false, true) => {
                        tail[e] = c;
                        chosen[c] = (pick(c, 1), 1);
                    }
                    _ => flexible.push((c, e)),
                }
            }
            for (c, e) in flexible {
                if need > 0 {
                    tail[e] = v;
                    chosen[c] = (pick(c, 0), 0);
                    need -= 1;
                } else {
                    tail[e] = c;
                    chosen[c] = (pick(c, 1), 1);
                }
            }
        }
        let o = IntegralOrientation::from_tails(g, tail).expect("tree edges all decided");
        return Ok((cap, o));
    }
    unreachable!()
}

/// Maximum average degree `max 2|E(H)|/|V(H)|` over induced subgraphs, by
/// enumerating vertex subsets. Zero for the empty graph.
pub fn exact_mad(g: &Graph, budget: &OracleBudget) -> Result<Rational, OracleError> {
    budget.admit(g)?;
    let n = g.vertex_count();
    if n > 24 {
        return Err(OracleError::OverBudget {
            vertices: n,
            edges: g.edge_count(),
            max_vertices: 24,
            max_edges: budget.max_edges,
        });
    }
    let adj: Vec<u32> = g
        .vertices()
        .map(|v| g.neighbors(v).fold(0u32, |m, u| m | 1 << u))
        .collect();
    let mut edges = vec![0u32; 1 << n];
    let (mut best_e, mut best_v) = (0u64, 1u64);
    for s in 1u32..(1 << n) {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        edges[s as usize] = edges[rest as usize] + (adj[v] & rest).count_ones();
        let (e, size) = (edges[s as usize] as u64, s.count_ones() as u64);
        if e * best_v > best_e * size {
            best_e = e;
            best_v = size;
        }
    }
    Ok(ratio(2 * best_e as i64, best_v as i64))
}

/// Adjacency bitmask code of `g` under the vertex order `perm`
/// (`perm[i]` is the vertex placed at position `i`).
fn code(adj: &[u32], perm: &[usize]) -> u64 {
    let n = perm.len();
    let mut c = 0u64;
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if adj[perm[i]] >> perm[j] & 1 == 1 {
                c |= 1 << bit;
            }
            bit += 1;
        }
    }
    c
}

/// Canonical code: the smallest code over vertex orders that list vertices
/// by a refined degree invariant, permuting freely inside each cell.
fn canonical(n: usize, adj: &[u32]) -> u64 {
    let deg: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
    let invariant: Vec<(u32, Vec<u32>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<u32> = (0..n).filter(|&u| adj[v] >> u & 1 == 1).map(|u| deg[u]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect();
    let mut verts: Vec<usize> = (0..n).collect();
    verts.sort_by(|&a, &b| invariant[a].cmp(&invariant[b]));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &verts {
        match cells.last_mut() {
            Some(cell) if invariant[cell[0]] == invariant[v] => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut best = u64::MAX;
    let mut perm = Vec::with_capacity(n);
    fn rec(cells: &mut [Vec<usize>], idx: usize, perm: &mut Vec<usize>, adj: &[u32], best: &mut u64) {
        if idx == cells.len() {
            *best = (*best).min(code(adj, perm));
            return;
        }
        let len = cells[idx].len();
        // Heap's algorithm over the cell.
        let mut c = vec![0usize; len];
        let base = perm.len();
        perm.extend_from_slice(&cells[idx]);
        rec(cells, idx + 1, perm, adj, best);
        let mut i = 0;
        while i < len {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(base, base + i);
                } else {
                    perm.swap(base + c[i], base + i);
                }
                rec(cells, idx + 1, perm, adj, best);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        perm.truncate(base);
    }
    rec(&mut cells, 0, &mut perm, adj, &mut best);
    best
}

/// One representative of every isomorphism class of graphs on exactly `n`
/// vertices (`n <= 8`), built by adding a vertex with every possible
/// neighborhood to the classes on `n - 1` vertices.
pub fn enumerate_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 8, "enumeration is limited to 8 vertices");
    let mut classes: Vec<Vec<u32>> = vec![Vec::new()];
    for size in 1..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for adj in &classes {
            for nbrs in 0u32..(1 << (size - 1)) {
                let mut grown = adj.clone();
                for (u, row) in grown.iter_mut().enumerate() {
                    if nbrs >> u & 1 == 1 {
                        *row |= 1 << (size - 1);
                    }
                }
                grown.push(nbrs);
                if seen.insert(canonical(size, &grown)) {
                    next.push(grown);
                }
            }
        }
        classes = next;
    }
    classes
        .iter()
        .map(|adj| {
            let edges = (0..n).flat_map(|a| (a + 1..n).filter(move |&b| adj[a] >> b & 1 == 1).map(move |b| (a, b)));
            Graph::from_edges(n, edges).expect("simple graph")
        })
        .collect()
}

/// Connected isomorphism classes on exactly `n` vertices.
pub fn enumerate_connected_graphs(n: usize) -> Vec<Graph> {
    enumerate_graphs(n).into_iter().filter(|g| g.is_connected()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn chi(g: &Graph) -> usize {
        let (value, o) = exact_proper_chromatic(g, &OracleBudget::default()).unwrap();
        let report = crate::graph::verify_proper_orientation(g, &o, value).unwrap();
        assert!(report.is_proper && report.bound_respected);
        value
    }

    #[test]
    fn small_exact_values() {
        assert_eq!(chi(&complete(2)), 1);
        assert_eq!(chi(&complete(3)), 2);
        assert_eq!(chi(&cycle(4)), 2);
        assert_eq!(chi(&Graph::from_edges(3, []).unwrap()), 0);
    }

    #[test]
    fn k7_fits_the_default_budget() {
        assert_eq!(chi(&complete(7)), 6);
    }

    #[test]
    fn over_budget_refused() {
        let g = complete(9);
        assert!(matches!(
            exact_proper_chromatic(&g, &OracleBudget::default()),
            Err(OracleError::OverBudget { .. })
        ));
    }

    #[test]
    fn tree_values() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(exact_proper_chromatic_tree(&p3).unwrap().0, 1);
        let star = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        assert_eq!(exact_proper_chromatic_tree(&star).unwrap().0, 1);
        assert_eq!(exact_proper_chromatic_tree(&cycle(4)), Err(OracleError::NotATree));
    }

    #[test]
    fn tree_dp_matches_backtracking() {
        for n in 1..=8 {
            for g in enumerate_connected_graphs(n).into_iter().filter(|g| g.is_tree()) {
                let (dp, o) = exact_proper_chromatic_tree(&g).unwrap();
                assert!(crate::graph::verify_proper_orientation(&g, &o, dp).unwrap().is_proper);
                assert_eq!(dp, chi(&g), "{:?}", g.edges());
                assert!(dp <= 4);
            }
        }
    }

    #[test]
    fn mad_values() {
        let k33 = Graph::from_edges(6, (0..3).flat_map(|a| (3..6).map(move |b| (a, b)))).unwrap();
        let b = OracleBudget::mad_default();
        assert_eq!(exact_mad(&k33, &b).unwrap(), ratio(3, 1));
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(exact_mad(&p3, &b).unwrap(), ratio(4, 3));
        let k4e = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(exact_mad(&k4e, &b).unwrap(), ratio(5, 2));
    }

    #[test]
    fn enumeration_counts() {
        // Known numbers of graphs and connected graphs on n vertices.
        let all = [1, 2, 4, 11, 34, 156];
        let connected = [1, 1, 2, 6, 21, 112];
        for n in 1..=6 {
            assert_eq!(enumerate_graphs(n).len(), all[n - 1], "n = {n}");
            assert_eq!(enumerate_connected_graphs(n).len(), connected[n - 1], "n = {n}");
        }
    }
}
