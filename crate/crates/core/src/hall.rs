//! Weighted Hall subgraphs.
//!
//! Given a bipartite graph on `U ∪ V` with vertex weights `W` such that every
//! edge has an endpoint of weight one, either there is an edge set `M` with
//! `d_M(u) = W(u)` on `U` and `d_M(v) <= W(v)` on `V`, or some `S ⊆ U` has
//! `W(S) > W(N(S))`. [`solve_hall`] returns whichever holds, computed as a
//! maximum flow with shortest augmenting paths.

use std::collections::VecDeque;

use thiserror::Error;

/// Bipartite instance with local indices: left vertices `0..left.len()`,
/// right vertices `0..right.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallInstance {
    pub left: Vec<u64>,
    pub right: Vec<u64>,
    /// `(left index, right index)` pairs; no duplicates.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HallOutcome {
    /// Indices into `HallInstance::edges`.
    Subgraph(Vec<usize>),
    /// Left indices of a set violating the Hall condition, ascending.
    Violation(Vec<usize>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HallError {
    #[error("edge ({left}, {right}) has weights {wl} and {wr}; one endpoint must have weight 1")]
    SideCondition {
        left: usize,
        right: usize,
        wl: u64,
        wr: u64,
    },
    #[error("edge ({0}, {1}) references a missing vertex")]
    BadEdge(usize, usize),
}

impl HallInstance {
    pub fn check_side_condition(&self) -> Result<(), HallError> {
        for &(l, r) in &self.edges {
            if l >= self.left.len() || r >= self.right.len() {
                return Err(HallError::BadEdge(l, r));
            }
            let (wl, wr) = (self.left[l], self.right[r]);
            if wl != 1 && wr != 1 {
                return Err(HallError::SideCondition {
                    left: l,
                    right: r,
                    wl,
                    wr,
                });
            }
        }
        Ok(())
    }

    /// Degree of each left and right vertex in the edge subset `m`.
    pub fn degrees(&self, m: &[usize]) -> (Vec<u64>, Vec<u64>) {
        let mut dl = vec![0; self.left.len()];
        let mut dr = vec![0; self.right.len()];
        for &e in m {
            let (l, r) = self.edges[e];
            dl[l] += 1;
            dr[r] += 1;
        }
        (dl, dr)
    }

    pub fn is_valid_subgraph(&self, m: &[usize]) -> bool {
        let mut sorted = m.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != m.len() {
            return false;
        }
        let (dl, dr) = self.degrees(m);
        dl == self.left && dr.iter().zip(&self.right).all(|(d, w)| d <= w)
    }

    /// `W(S) > W(N(S))`, by direct summation.
    pub fn is_violation(&self, s: &[usize]) -> bool {
        let mut in_s = vec![false; self.left.len()];
        for &l in s {
            in_s[l] = true;
        }
        let mut in_n = vec![false; self.right.len()];
        for &(l, r) in &self.edges {
            if in_s[l] {
                in_n[r] = true;
            }
        }
        let ws: u64 = s.iter().map(|&l| self.left[l]).sum();
        let wn: u64 = in_n
            .iter()
            .zip(&self.right)
            .filter(|(inside, _)| **inside)
            .map(|(_, w)| w)
            .sum();
        ws > wn
    }
}

struct FlowEdge {
    to: usize,
    cap: u64,
}

struct Network {
    edges: Vec<FlowEdge>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(n: usize) -> Self {
        Network {
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let id = self.edges.len();
        self.edges.push(FlowEdge { to, cap });
        self.adj[from].push(id);
        self.edges.push(FlowEdge { to: from, cap: 0 });
        self.adj[to].push(id + 1);
        id
    }

    /// BFS parents over residual arcs; `None` where unreachable.
    fn bfs(&self, source: usize) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            for &id in &self.adj[x] {
                let e = &self.edges[id];
                if e.cap > 0 && !seen[e.to] {
                    seen[e.to] = true;
                    parent[e.to] = Some(id);
                    queue.push_back(e.to);
                }
            }
        }
        parent
    }

    fn max_flow(&mut self, source: usize, sink: usize) -> u64 {
        let mut total = 0;
        loop {
            let parent = self.bfs(source);
            if parent[sink].is_none() {
                return total;
            }
            let mut push = u64::MAX;
            let mut x = sink;
            while x != source {
                let id = parent[x].unwrap();
                push = push.min(self.edges[id].cap);
                x = self.edges[id ^ 1].to;
            }
            let mut x = sink;
            while x != source {
                let id = parent[x].unwrap();
                self.edges[id].cap -= push;
                self.edges[id ^ 1].cap += push;
                x = self.edges[id ^ 1].to;
            }
            total += push;
        }
    }
}

pub fn solve_hall(inst: &HallInstance) -> Result<HallOutcome, HallError> {
    inst.check_side_condition()?;
    let nl = inst.left.len();
    let nr = inst.right.len();
    let source = 0;
    let sink = nl + nr + 1;
    let demand: u64 = inst.left.iter().sum();
    // Middle arcs are uncapacitated so the minimum cut never uses them; the
    // side condition still caps the flow on each at one unit.
    let unbounded = demand + inst.right.iter().sum::<u64>() + 1;
    let mut net = Network::new(nl + nr + 2);
    for (l, &w) in inst.left.iter().enumerate() {
        net.add(source, 1 + l, w);
    }
    let middle: Vec<usize> = inst
        .edges
        .iter()
        .map(|&(l, r)| net.add(1 + l, 1 + nl + r, unbounded))
        .collect();
    for (r, &w) in inst.right.iter().enumerate() {
        net.add(1 + nl + r, sink, w);
    }
    let flow = net.max_flow(source, sink);
    if flow == demand {
        let m = middle
            .iter()
            .enumerate()
            .filter(|&(_, &id)| net.edges[id ^ 1].cap > 0)
            .map(|(e, &id)| {
                debug_assert_eq!(net.edges[id ^ 1].cap, 1);
                e
            })
            .collect();
        return Ok(HallOutcome::Subgraph(m));
    }
    let parent = net.bfs(source);
    let witness = (0..nl).filter(|&l| parent[1 + l].is_some()).collect();
    Ok(HallOutcome::Violation(witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k22_perfect_matching() {
        let inst = HallInstance {
            left: vec![1, 1],
            right: vec![1, 1],
            edges: vec![(0, 0), (0, 1), (1, 0), (1, 1)],
        };
        match solve_hall(&inst).unwrap() {
            HallOutcome::Subgraph(m) => {
                assert_eq!(m.len(), 2);
                assert!(inst.is_valid_subgraph(&m));
            }
            other => panic!("expected a matching, got {other:?}"),
        }
    }

    #[test]
    fn weighted_star_uses_both_edges() {
        let inst = HallInstance {
            left: vec![2],
            right: vec![1, 1],
            edges: vec![(0, 0), (0, 1)],
        };
        assert_eq!(solve_hall(&inst).unwrap(), HallOutcome::Subgraph(vec![0, 1]));
    }

    #[test]
    fn shared_neighbor_violates() {
        let inst = HallInstance {
            left: vec![1, 1],
            right: vec![1],
            edges: vec![(0, 0), (1, 0)],
        };
        let out = solve_hall(&inst).unwrap();
        assert_eq!(out, HallOutcome::Violation(vec![0, 1]));
        if let HallOutcome::Violation(s) = out {
            assert!(inst.is_violation(&s));
        }
    }

    #[test]
    fn zero_weights_are_allowed() {
        let inst = HallInstance {
            left: vec![1, 0],
            right: vec![0, 1],
            edges: vec![(0, 0), (0, 1), (1, 1)],
        };
        assert_eq!(solve_hall(&inst).unwrap(), HallOutcome::Subgraph(vec![1]));
    }

    #[test]
    fn side_condition_enforced() {
        let inst = HallInstance {
            left: vec![2],
            right: vec![3],
            edges: vec![(0, 0)],
        };
        assert!(matches!(solve_hall(&inst), Err(HallError::SideCondition { .. })));
    }
}
