//! Choosing the independent set frozen in a round.
//!
//! Candidates are split by class into a focus class, protected classes and
//! the rest. A selected set `A` is acceptable when
//!
//! * (c1) for each protected class `s`, the candidates of `s` outside `A`
//!   (weight one each) have a weighted Hall subgraph into `A \ V_s`, where
//!   `a ∈ A` may absorb up to `W(a)` edges;
//! * (c2) every focus candidate `x ∉ A` has at least `W(x) + 1` neighbors in
//!   `A` that belong to protected classes;
//! * (c3) every candidate outside `A` has a neighbor in `A`.
//!
//! Any set maximizing `(W(A), |A ∩ F|, |A|)` lexicographically is
//! acceptable, since a failure of any condition yields a local exchange that
//! increases the key. [`select_exchange`] runs those exchanges to a fixed
//! point; [`select_exact`] maximizes the key outright on small inputs.

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::hall::{solve_hall, HallInstance, HallOutcome};

#[derive(Debug, Clone)]
pub struct IndsetProblem<'a> {
    pub graph: &'a Graph,
    /// Candidate vertices; must be independent within each class.
    pub candidates: Vec<Vertex>,
    /// Weight per vertex of the graph (only candidates matter).
    pub weight: Vec<u64>,
    /// Class of every vertex, `1..=r`.
    pub class_of: &'a [usize],
    pub focus: usize,
    pub protected: Vec<usize>,
}

/// Arcs `a -> x` of one protected class's Hall subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallAssignment {
    pub class: usize,
    pub arcs: Vec<(Vertex, Vertex)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    /// Selected vertices, ascending.
    pub set: Vec<Vertex>,
    pub hall: Vec<HallAssignment>,
    pub exchanges: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SelectError {
    #[error("set is not an independent subset of the candidates")]
    NotIndependent,
    #[error("protected class {class}: candidates {witness:?} violate the Hall condition")]
    HallFailure { class: usize, witness: Vec<Vertex> },
    #[error("focus vertex {v} has {found} protected neighbors in the set, needs {needed}")]
    FocusUncovered { v: Vertex, found: u64, needed: u64 },
    #[error("candidate {0} has no neighbor in the set")]
    NotDominating(Vertex),
    #[error("exchange loop exceeded {0} iterations")]
    IterationCap(usize),
    #[error("exact search limited to {limit} candidates, got {got}")]
    TooLarge { limit: usize, got: usize },
    #[error("Hall instance rejected: {0}")]
    Hall(String),
}

pub const EXACT_LIMIT: usize = 30;

impl IndsetProblem<'_> {
    fn is_protected(&self, v: Vertex) -> bool {
        self.protected.contains(&self.class_of[v])
    }

    fn is_focus(&self, v: Vertex) -> bool {
        self.class_of[v] == self.focus
    }

    /// `(W(A), |A ∩ F|, |A|)`.
    pub fn key(&self, set: &[Vertex]) -> (u64, usize, usize) {
        let w = set.iter().map(|&v| self.weight[v]).sum();
        let f = set.iter().filter(|&&v| self.is_focus(v)).count();
        (w, f, set.len())
    }

    fn membership(&self, set: &[Vertex]) -> Vec<bool> {
        let mut inside = vec![false; self.graph.vertex_count()];
        for &v in set {
            inside[v] = true;
        }
        inside
    }

    /// Hall instance for class `s`: left are the candidates of `s` outside
    /// the set, right the members of the set outside `s`.
    fn hall_instance(&self, s: usize, inside: &[bool]) -> (HallInstance, Vec<Vertex>, Vec<Vertex>) {
        let left: Vec<Vertex> = self
            .candidates
            .iter()
            .copied()
            .filter(|&x| self.class_of[x] == s && !inside[x])
            .collect();
        let right: Vec<Vertex> = self
            .candidates
            .iter()
            .copied()
            .filter(|&a| inside[a] && self.class_of[a] != s)
            .collect();
        let mut right_index = vec![usize::MAX; self.graph.vertex_count()];
        for (i, &a) in right.iter().enumerate() {
            right_index[a] = i;
        }
        let mut edges = Vec::new();
        for (li, &x) in left.iter().enumerate() {
            for u in self.graph.neighbors(x) {
                if right_index[u] != usize::MAX {
                    edges.push((li, right_index[u]));
                }
            }
        }
        let inst = HallInstance {
            left: vec![1; left.len()],
            right: right.iter().map(|&a| self.weight[a]).collect(),
            edges,
        };
        (inst, left, right)
    }

    fn hall(&self, s: usize, inside: &[bool]) -> Result<Result<HallAssignment, Vec<Vertex>>, SelectError> {
        let (inst, left, right) = self.hall_instance(s, inside);
        match solve_hall(&inst).map_err(|e| SelectError::Hall(e.to_string()))? {
            HallOutcome::Subgraph(m) => Ok(Ok(HallAssignment {
                class: s,
                arcs: m
                    .iter()
                    .map(|&e| {
                        let (l, r) = inst.edges[e];
                        (right[r], left[l])
                    })
                    .collect(),
            })),
            HallOutcome::Violation(s_idx) => Ok(Err(s_idx.iter().map(|&l| left[l]).collect())),
        }
    }

    fn protected_neighbors_in(&self, x: Vertex, inside: &[bool]) -> u64 {
        self.graph
            .neighbors(x)
            .filter(|&u| inside[u] && self.is_protected(u))
            .count() as u64
    }

    /// Re-checks (c1)-(c3) from scratch and returns the Hall subgraphs.
    pub fn verify(&self, set: &[Vertex]) -> Result<Vec<HallAssignment>, SelectError> {
        let inside = self.membership(set);
        let candidate = self.membership(&self.candidates);
        if set.iter().any(|&v| !candidate[v]) || self.graph.edges().iter().any(|&(u, v)| inside[u] && inside[v]) {
            return Err(SelectError::NotIndependent);
        }
        let mut hall = Vec::new();
        for &s in &self.protected {
            match self.hall(s, &inside)? {
                Ok(a) => hall.push(a),
                Err(witness) => return Err(SelectError::HallFailure { class: s, witness }),
            }
        }
        for &x in &self.candidates {
            if inside[x] {
                continue;
            }
            if self.is_focus(x) {
                let found = self.protected_neighbors_in(x, &inside);
                if found <= self.weight[x] {
                    return Err(SelectError::FocusUncovered {
                        v: x,
                        found,
                        needed: self.weight[x] + 1,
                    });
                }
            }
            if !self.graph.neighbors(x).any(|u| inside[u]) {
                return Err(SelectError::NotDominating(x));
            }
        }
        Ok(hall)
    }
}

/// Greedy start followed by improving exchanges until (c1)-(c3) hold.
///
/// The greedy pass scans candidates focus class first, then by weight
/// descending, then by id. Exchanges, tried in this order:
///
/// 1. a Hall violation `S` in a protected class: add `S`, drop `N(S) ∩ A`;
/// 2. a focus candidate with at most `W(x)` protected neighbors in `A`: add
///    it and drop its neighbors in `A`;
/// 3. a candidate with no neighbor in `A`: add it.
pub fn select_exchange(p: &IndsetProblem<'_>) -> Result<Selection, SelectError> {
    let n = p.graph.vertex_count();
    let mut order = p.candidates.clone();
    order.sort_by_key(|&v| (!p.is_focus(v), std::cmp::Reverse(p.weight[v]), v));
    let mut inside = vec![false; n];
    for &v in &order {
        if !p.graph.neighbors(v).any(|u| inside[u]) {
            inside[v] = true;
        }
    }
    let cap = 1000 + 4 * p.candidates.len().pow(2);
    let mut exchanges = 0;
    'outer: loop {
        if exchanges > cap {
            return Err(SelectError::IterationCap(cap));
        }
        for &s in &p.protected {
            if let Err(witness) = p.hall(s, &inside)? {
                for &x in &witness {
                    for u in p.graph.neighbors(x) {
                        inside[u] = false;
                    }
                }
                for &x in &witness {
                    inside[x] = true;
                }
                exchanges += 1;
                continue 'outer;
            }
        }
        for &x in &p.candidates {
            if !inside[x] && p.is_focus(x) && p.protected_neighbors_in(x, &inside) <= p.weight[x] {
                for u in p.graph.neighbors(x) {
                    inside[u] = false;
                }
                inside[x] = true;
                exchanges += 1;
                continue 'outer;
            }
        }
        for &x in &p.candidates {
            if !inside[x] && !p.graph.neighbors(x).any(|u| inside[u]) {
                inside[x] = true;
                exchanges += 1;
                continue 'outer;
            }
        }
        break;
    }
    let set: Vec<Vertex> = (0..n).filter(|&v| inside[v]).collect();
    let hall = p.verify(&set)?;
    Ok(Selection { set, hall, exchanges })
}

/// Exact maximum of the key by branch and bound over independent sets.
pub fn select_exact(p: &IndsetProblem<'_>) -> Result<Selection, SelectError> {
    let c = p.candidates.len();
    if c > EXACT_LIMIT {
        return Err(SelectError::TooLarge {
            limit: EXACT_LIMIT,
            got: c,
        });
    }
    let scale = (c as u128) + 1;
    let score: Vec<u128> = p
        .candidates
        .iter()
        .map(|&v| p.weight[v] as u128 * scale * scale + u128::from(p.is_focus(v)) * scale + 1)
        .collect();
    let conflict: Vec<u64> = p
        .candidates
        .iter()
        .map(|&a| {
            (0..c)
                .filter(|&j| p.graph.has_edge(a, p.candidates[j]))
                .fold(0, |mask, j| mask | 1 << j)
        })
        .collect();
    let mut suffix = vec![0u128; c + 1];
    for i in (0..c).rev() {
        suffix[i] = suffix[i + 1] + score[i];
    }
    struct Search<'s> {
        score: &'s [u128],
        conflict: &'s [u64],
        suffix: &'s [u128],
        best: (u128, u64),
    }
    impl Search<'_> {
        fn go(&mut self, i: usize, chosen: u64, value: u128) {
            if value > self.best.0 {
                self.best = (value, chosen);
            }
            if i == self.score.len() || value + self.suffix[i] <= self.best.0 {
                return;
            }
            if chosen & self.conflict[i] == 0 {
                self.go(i + 1, chosen | 1 << i, value + self.score[i]);
            }
            self.go(i + 1, chosen, value);
        }
    }
    let mut search = Search {
        score: &score,
        conflict: &conflict,
        suffix: &suffix,
        best: (0, 0),
    };
    search.go(0, 0, 0);
    let mask = search.best.1;
    let mut set: Vec<Vertex> = (0..c)
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| p.candidates[i])
        .collect();
    set.sort_unstable();
    let hall = p.verify(&set)?;
    Ok(Selection {
        set,
        hall,
        exchanges: 0,
    })
}
