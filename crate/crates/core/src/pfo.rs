//! Partial fractional orientations.
//!
//! Every edge `uv` carries two exact values `p(u,v)` and `p(v,u)` in `[0,1]`
//! and is in exactly one of three states:
//!
//! * unoriented: `p(u,v) = p(v,u) = 1`;
//! * oriented `u -> v`: `p(u,v) = 1`, `p(v,u) = 0`;
//! * fractional: `p(u,v) + p(v,u) = 1` with both strictly inside `(0,1)`.
//!
//! The potential outdegree `d_p(v) = Σ p(v,u)` is what `v`'s outdegree would
//! be if its unoriented edges all left `v`. Vertices are collected into level
//! sets `A_m`: independent sets of fully oriented vertices with potential
//! exactly `m`. At level `j` the set `A = ∪_{m>j} A_m` is frozen and every
//! other vertex `v` has gap `d_p(v) - j`.

use std::fmt;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::degeneracy::BaseOrientation;
use crate::graph::{EdgeId, Graph, IntegralOrientation, Vertex, VertexPartition};
use crate::rational::{self, ceil_i64, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeState {
    Unoriented,
    /// Oriented out of `tail`.
    Oriented {
        tail: Vertex,
    },
    Fractional,
}

/// First structural violation found by a checker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The edge values match none of the three states.
    EdgeValues {
        u: Vertex,
        v: Vertex,
        p_uv: String,
        p_vu: String,
    },
    /// An oriented vertex has a non-integral potential.
    NonIntegralOriented { v: Vertex, potential: String },
    /// Two adjacent vertices share a level.
    NotIndependent { level: i64, u: Vertex, v: Vertex },
    /// An oriented or fractional edge avoids every frozen level set.
    OrphanEdge { u: Vertex, v: Vertex },
    /// `v ∈ A`, `u ∉ A`, `v -> u` in the base orientation but not under `p`.
    Misaligned { v: Vertex, u: Vertex },
    /// A potential at most `j` is not integral (strong version only).
    NonIntegralBelowLevel { v: Vertex, potential: String },
    /// Level-set membership disagrees with orientation status or potential.
    LevelMismatch {
        v: Vertex,
        level: Option<i64>,
        potential: String,
    },
    /// `d_1(v) < ⌈gap(v)⌉ + j - k` for some `v ∉ A`.
    ResidualInBound { v: Vertex, d1: i64, required: i64 },
    /// `d_p^+(v) > k` for some `v ∉ A`.
    OutdegreeAboveK { v: Vertex, outdegree: String, k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EdgeValues { u, v, p_uv, p_vu } => {
                write!(
                    f,
                    "edge {u}-{v} has invalid values p({u},{v})={p_uv}, p({v},{u})={p_vu}"
                )
            }
            Violation::NonIntegralOriented { v, potential } => {
                write!(f, "oriented vertex {v} has non-integral potential {potential}")
            }
            Violation::NotIndependent { level, u, v } => {
                write!(f, "level set A_{level} contains adjacent vertices {u} and {v}")
            }
            Violation::OrphanEdge { u, v } => {
                write!(f, "oriented edge {u}-{v} has no endpoint in a frozen level set")
            }
            Violation::Misaligned { v, u } => {
                write!(f, "edge {v}->{u} of the base orientation is not oriented out of {v}")
            }
            Violation::NonIntegralBelowLevel { v, potential } => {
                write!(
                    f,
                    "vertex {v} has non-integral potential {potential} at or below the level"
                )
            }
            Violation::LevelMismatch { v, level, potential } => {
                write!(f, "vertex {v} has level {level:?} but potential {potential}")
            }
            Violation::ResidualInBound { v, d1, required } => {
                write!(f, "vertex {v} has d1 = {d1} < {required}")
            }
            Violation::OutdegreeAboveK { v, outdegree, k } => {
                write!(f, "vertex {v} outside the level sets has outdegree {outdegree} > {k}")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PfoError {
    #[error("not j-proper: {0}")]
    NotJProper(Violation),
    #[error("vertex {v} has positive gap {gap}")]
    PositiveGap { v: Vertex, gap: String },
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct PartialOrientation<'g> {
    graph: &'g Graph,
    /// `p(u,v)` for edge `(u,v)` with `u < v`.
    forward: Vec<Rational>,
    /// `p(v,u)`.
    backward: Vec<Rational>,
    level: Vec<Option<i64>>,
    j: i64,
}

impl fmt::Debug for PartialOrientation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

impl<'g> PartialOrientation<'g> {
    /// All edges unoriented, no level sets.
    pub fn new(graph: &'g Graph, j: i64) -> Self {
        let m = graph.edge_count();
        PartialOrientation {
            graph,
            forward: vec![Rational::one(); m],
            backward: vec![Rational::one(); m],
            level: vec![None; graph.vertex_count()],
            j,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn j(&self) -> i64 {
        self.j
    }

    pub fn set_j(&mut self, j: i64) {
        self.j = j;
    }

    /// `p(from, other endpoint of e)`.
    pub fn value(&self, e: EdgeId, from: Vertex) -> &Rational {
        let (u, _) = self.graph.endpoints(e);
        if from == u {
            &self.forward[e]
        } else {
            &self.backward[e]
        }
    }

    /// `p(u, v)`; panics if `uv` is not an edge.
    pub fn p(&self, u: Vertex, v: Vertex) -> &Rational {
        let e = self.graph.edge_id(u, v).expect("p(u,v) on a non-edge");
        self.value(e, u)
    }

    /// Sets `p(from, ·) = value` and `p(·, from) = 1 - value`.
    pub fn set_value(&mut self, e: EdgeId, from: Vertex, value: Rational) {
        let rest = Rational::one() - &value;
        let (u, _) = self.graph.endpoints(e);
        if from == u {
            self.forward[e] = value;
            self.backward[e] = rest;
        } else {
            self.backward[e] = value;
            self.forward[e] = rest;
        }
    }

    /// Orients `e` out of `tail`.
    pub fn orient(&mut self, e: EdgeId, tail: Vertex) {
        self.set_value(e, tail, Rational::one());
    }

    /// Resets `e` to the unoriented state.
    pub fn unorient(&mut self, e: EdgeId) {
        self.forward[e] = Rational::one();
        self.backward[e] = Rational::one();
    }

    pub fn edge_state(&self, e: EdgeId) -> Option<EdgeState> {
        let (u, v) = self.graph.endpoints(e);
        let (a, b) = (&self.forward[e], &self.backward[e]);
        if a.is_one() && b.is_one() {
            Some(EdgeState::Unoriented)
        } else if a.is_one() && b.is_zero() {
            Some(EdgeState::Oriented { tail: u })
        } else if a.is_zero() && b.is_one() {
            Some(EdgeState::Oriented { tail: v })
        } else if rational::is_strictly_between_zero_and_one(a)
            && rational::is_strictly_between_zero_and_one(b)
            && (a + b).is_one()
        {
            Some(EdgeState::Fractional)
        } else {
            None
        }
    }

    pub fn is_unoriented(&self, e: EdgeId) -> bool {
        self.edge_state(e) == Some(EdgeState::Unoriented)
    }

    pub fn is_fractional(&self, e: EdgeId) -> bool {
        self.edge_state(e) == Some(EdgeState::Fractional)
    }

    /// `d_p(v) = Σ_u p(v,u)`.
    pub fn potential(&self, v: Vertex) -> Rational {
        self.graph
            .incident(v)
            .iter()
            .fold(Rational::zero(), |acc, &(_, e)| acc + self.value(e, v))
    }

    /// `d_p^+(v) = Σ_u (1 - p(u,v))`.
    pub fn oriented_outdegree(&self, v: Vertex) -> Rational {
        self.graph.incident(v).iter().fold(Rational::zero(), |acc, &(u, e)| {
            acc + (Rational::one() - self.value(e, u))
        })
    }

    /// A vertex is oriented when none of its edges is unoriented.
    pub fn is_oriented_vertex(&self, v: Vertex) -> bool {
        self.graph.incident(v).iter().all(|&(_, e)| !self.is_unoriented(e))
    }

    /// Number of unoriented edges at `v` that enter `v` in the base
    /// orientation (`d_1(v)`).
    pub fn residual_in_count(&self, base: &BaseOrientation, v: Vertex) -> i64 {
        self.graph
            .incident(v)
            .iter()
            .filter(|&&(_, e)| self.is_unoriented(e) && !base.is_out(v, e))
            .count() as i64
    }

    pub fn level(&self, v: Vertex) -> Option<i64> {
        self.level[v]
    }

    pub fn set_level(&mut self, v: Vertex, m: Option<i64>) {
        self.level[v] = m;
    }

    /// Members of `A_m`, ascending.
    pub fn level_set(&self, m: i64) -> Vec<Vertex> {
        self.graph.vertices().filter(|&v| self.level[v] == Some(m)).collect()
    }

    /// Is `v` in `A = ∪_{m > j} A_m`?
    pub fn in_frozen(&self, v: Vertex) -> bool {
        self.level[v].is_some_and(|m| m > self.j)
    }

    /// `d_p(v) - j`, for `v` outside the frozen sets.
    pub fn gap(&self, v: Vertex) -> Option<Rational> {
        (!self.in_frozen(v)).then(|| self.potential(v) - int(self.j))
    }

    /// `Gap(i)` for each class of `part` (index `i - 1`); `None` when every
    /// vertex of the class is frozen.
    pub fn part_gaps(&self, part: &VertexPartition) -> Vec<Option<Rational>> {
        let mut gaps: Vec<Option<Rational>> = vec![None; part.r()];
        for v in self.graph.vertices() {
            if let Some(g) = self.gap(v) {
                let slot = &mut gaps[part.class_of(v) - 1];
                if slot.as_ref().is_none_or(|cur| g > *cur) {
                    *slot = Some(g);
                }
            }
        }
        gaps
    }

    pub fn check_edge_states(&self) -> Result<(), Violation> {
        for e in 0..self.graph.edge_count() {
            if self.edge_state(e).is_none() {
                let (u, v) = self.graph.endpoints(e);
                return Err(Violation::EdgeValues {
                    u,
                    v,
                    p_uv: rational::display(&self.forward[e]),
                    p_vu: rational::display(&self.backward[e]),
                });
            }
        }
        Ok(())
    }

    /// Checks the `j`-proper conditions against level `j` (which may differ
    /// from the stored level): integral potentials on oriented vertices,
    /// independent level sets, every oriented edge touching a frozen set,
    /// alignment with the base orientation, and with `strong` integrality of
    /// every potential at most `j`. Level-set bookkeeping is checked as well.
    pub fn check_j_proper(&self, base: &BaseOrientation, j: i64, strong: bool) -> Result<(), Violation> {
        self.check_edge_states()?;
        let g = self.graph;
        let frozen = |v: Vertex| self.level[v].is_some_and(|m| m > j);
        let potentials: Vec<Rational> = g.vertices().map(|v| self.potential(v)).collect();
        for v in g.vertices() {
            let oriented = self.is_oriented_vertex(v);
            let pot = &potentials[v];
            if oriented && !pot.is_integer() {
                return Err(Violation::NonIntegralOriented {
                    v,
                    potential: rational::display(pot),
                });
            }
            let member_ok = match self.level[v] {
                Some(m) if m > j => oriented && *pot == int(m),
                Some(_) => false,
                // An oriented vertex with potential above j belongs in A.
                None => !(oriented && *pot > int(j)),
            };
            if !member_ok {
                return Err(Violation::LevelMismatch {
                    v,
                    level: self.level[v],
                    potential: rational::display(pot),
                });
            }
            if strong && *pot <= int(j) && !pot.is_integer() {
                return Err(Violation::NonIntegralBelowLevel {
                    v,
                    potential: rational::display(pot),
                });
            }
        }
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if frozen(u) && frozen(v) && self.level[u] == self.level[v] {
                return Err(Violation::NotIndependent {
                    level: self.level[u].unwrap(),
                    u,
                    v,
                });
            }
            if !self.is_unoriented(e) && !frozen(u) && !frozen(v) {
                return Err(Violation::OrphanEdge { u, v });
            }
            for (a, b) in [(u, v), (v, u)] {
                if frozen(a) && !frozen(b) && base.is_out(a, e) {
                    let aligned = self.value(e, a).is_one() && self.value(e, b).is_zero();
                    if !aligned {
                        return Err(Violation::Misaligned { v: a, u: b });
                    }
                }
            }
        }
        Ok(())
    }

    /// For every `v ∉ A`: `d_p^+(v) <= k` and `d_1(v) >= ⌈gap(v)⌉ + j - k`.
    pub fn check_residual_bound(&self, base: &BaseOrientation) -> Result<(), Violation> {
        let k = base.k();
        for v in self.graph.vertices() {
            let Some(gap) = self.gap(v) else { continue };
            let out = self.oriented_outdegree(v);
            if out > int(k as i64) {
                return Err(Violation::OutdegreeAboveK {
                    v,
                    outdegree: rational::display(&out),
                    k,
                });
            }
            let d1 = self.residual_in_count(base, v);
            let required = ceil_i64(&gap) + self.j - k as i64;
            if d1 < required {
                return Err(Violation::ResidualInBound { v, d1, required });
            }
        }
        Ok(())
    }

    /// Makes the orientation strongly `j`-proper. The input must be
    /// `j`-proper; see [`PartialOrientation::round_potentials_below`] for the
    /// procedure itself.
    pub fn strongify(&mut self, base: &BaseOrientation, j: i64) -> Result<(), PfoError> {
        self.check_j_proper(base, j, false).map_err(PfoError::NotJProper)?;
        self.round_potentials_below(j);
        Ok(())
    }

    /// Shifts fractional edge values until every potential below `j` is
    /// integral, without touching unoriented edges.
    ///
    /// From the lowest vertex `v` with a non-integral potential below `j`, a
    /// walk follows fractional edges (lowest neighbor first, never straight
    /// back) through vertices of integral potential. It stops at a vertex of
    /// non-integral potential, giving a path, or on a repeated vertex, giving
    /// a cycle. Along a path, `ε` is added to `p(u_s, u_{s+1})` so `v` rises
    /// towards its ceiling and the far end drops towards its floor; interior
    /// potentials are unchanged. Along a cycle nothing but the edge values
    /// move. `ε` is the largest shift keeping edges in `[0,1]` and the
    /// endpoints inside their integer cells, so every step either fixes an
    /// edge value at 0 or 1 or makes an endpoint integral.
    ///
    /// Integral potentials never change, potentials above `j` never rise, and
    /// potentials below `j` end at their floor or ceiling.
    pub fn round_potentials_below(&mut self, j: i64) {
        let bound = int(j);
        loop {
            let start = self.graph.vertices().find(|&v| {
                let p = self.potential(v);
                p < bound && !p.is_integer()
            });
            let Some(v) = start else { break };
            let walk = self.fractional_walk(v, true);
            self.push_along(&walk);
        }
    }

    /// Walk of fractional edges from `v` as described above. Returns the
    /// vertex sequence; for a cycle the first and last entries coincide and
    /// `v` may not be on it.
    fn fractional_walk(&self, v: Vertex, stop_at_fraction: bool) -> Walk {
        let mut path = vec![v];
        let mut position = vec![usize::MAX; self.graph.vertex_count()];
        position[v] = 0;
        let mut prev_edge = usize::MAX;
        let mut cur = v;
        loop {
            let (next, e) = self
                .graph
                .incident(cur)
                .iter()
                .copied()
                .find(|&(_, e)| e != prev_edge && self.is_fractional(e))
                .expect("vertex on a fractional walk has another fractional edge");
            if position[next] != usize::MAX {
                let mut cycle = path[position[next]..].to_vec();
                cycle.push(next);
                return Walk::Cycle(cycle);
            }
            position[next] = path.len();
            path.push(next);
            if stop_at_fraction && !self.potential(next).is_integer() {
                return Walk::Path(path);
            }
            prev_edge = e;
            cur = next;
        }
    }

    fn push_along(&mut self, walk: &Walk) {
        let (seq, ends) = match walk {
            Walk::Path(p) => (p, true),
            Walk::Cycle(c) => (c, false),
        };
        let mut eps: Option<Rational> = None;
        let mut tighten = |x: Rational| {
            if eps.as_ref().is_none_or(|cur| x < *cur) {
                eps = Some(x);
            }
        };
        for w in seq.windows(2) {
            tighten(Rational::one() - self.p(w[0], w[1]));
        }
        if ends {
            let first = self.potential(seq[0]);
            tighten(first.ceil() - &first);
            let last = self.potential(seq[seq.len() - 1]);
            tighten(&last - last.floor());
        }
        let eps = eps.expect("walk has at least one edge");
        debug_assert!(eps.is_positive());
        for w in seq.windows(2) {
            let e = self.graph.edge_id(w[0], w[1]).unwrap();
            let updated = self.p(w[0], w[1]) + &eps;
            self.set_value(e, w[0], updated);
        }
    }

    /// Turns a `j`-proper orientation whose unfrozen vertices all have gap at
    /// most zero into a proper orientation with `d_q(v) <= ⌈d_p(v)⌉`.
    ///
    /// After rounding potentials below `j`, levels are filled downwards: at
    /// level `m`, each unfrozen vertex with potential exactly `m` (ascending
    /// id) joins `A_m` and orients its unoriented edges outward, which pushes
    /// its unfrozen neighbors below `m`. Once every vertex is frozen, the
    /// remaining fractional edges form a subgraph without degree-one vertices;
    /// shifting values around its cycles makes them integral without changing
    /// any potential.
    pub fn finalize(mut self, base: &BaseOrientation) -> Result<IntegralOrientation, PfoError> {
        let j = self.j;
        self.check_j_proper(base, j, false).map_err(PfoError::NotJProper)?;
        for v in self.graph.vertices() {
            if let Some(gap) = self.gap(v) {
                if gap.is_positive() {
                    return Err(PfoError::PositiveGap {
                        v,
                        gap: rational::display(&gap),
                    });
                }
            }
        }
        self.round_potentials_below(j);
        let g = self.graph;
        let mut m = j;
        while m >= 0 {
            for v in g.vertices() {
                if self.level[v].is_some() || self.potential(v) != int(m) {
                    continue;
                }
                for &(_, e) in g.incident(v) {
                    if self.is_unoriented(e) {
                        self.orient(e, v);
                    }
                }
                self.level[v] = Some(m);
            }
            m -= 1;
            self.j = m;
        }
        if let Some(v) = g.vertices().find(|&v| self.level[v].is_none()) {
            return Err(PfoError::Internal(format!(
                "vertex {v} never reached its level (potential {})",
                rational::display(&self.potential(v))
            )));
        }
        self.cancel_fractional_cycles();
        let tails = (0..g.edge_count())
            .map(|e| match self.edge_state(e) {
                Some(EdgeState::Oriented { tail }) => Ok(tail),
                other => Err(PfoError::Internal(format!("edge {e} left in state {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        IntegralOrientation::from_tails(g, tails).map_err(|e| PfoError::Internal(e.to_string()))
    }

    /// Removes fractional edges by cycle shifts. Requires every potential to
    /// be integral, which guarantees each vertex has zero or at least two
    /// fractional edges.
    pub fn cancel_fractional_cycles(&mut self) {
        while let Some(e) = (0..self.graph.edge_count()).find(|&e| self.is_fractional(e)) {
            let (u, _) = self.graph.endpoints(e);
            let walk = self.fractional_walk(u, false);
            self.push_along(&walk);
        }
    }

    /// Text dump: one `u v p(u,v) p(v,u)` line per edge, then the level sets
    /// from the highest level down.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "j {}", self.j);
        for (e, &(u, v)) in self.graph.edges().iter().enumerate() {
            let _ = writeln!(
                out,
                "{} {} {} {}",
                u,
                v,
                rational::display(&self.forward[e]),
                rational::display(&self.backward[e])
            );
        }
        let mut levels: Vec<i64> = self.level.iter().flatten().copied().collect();
        levels.sort_unstable_by(|a, b| b.cmp(a));
        levels.dedup();
        for m in levels {
            let members: Vec<String> = self.level_set(m).iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "A_{} {}", m, members.join(" "));
        }
        out
    }
}

enum Walk {
    Path(Vec<Vertex>),
    Cycle(Vec<Vertex>),
}
