//! The two phases that fill level sets: the initial leveling, which needs no
//! fractional edges, and the gap-closing round, which freezes one level and
//! pushes the gap of a chosen part to zero.

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::degeneracy::BaseOrientation;
use crate::graph::{Vertex, VertexPartition};
use crate::indset::{select_exact, select_exchange, IndsetProblem, SelectError};
use crate::pfo::{PartialOrientation, PfoError, Violation};
use crate::rational::{self, ceil_i64, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Requires `d_1(v) >= (i+1)⌈gap(v)⌉` on the focus part.
    Lemma,
    /// Requires `j >= i⌈gap(v)⌉ + k` on the focus part, which implies the
    /// lemma condition through the residual bound.
    Corollary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Initial,
    Close,
}

/// A bound a schedule promises for the state after a round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    /// The round's `delta_bound`.
    DeltaAtMost {
        #[serde(serialize_with = "rational::serialize")]
        bound: Rational,
    },
    /// `Gap(part)` after the round (an empty part passes).
    GapAtMost {
        part: usize,
        #[serde(serialize_with = "rational::serialize")]
        bound: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundSpec {
    /// Level filled by the round.
    pub j: i64,
    pub focus: usize,
    pub protected: Vec<usize>,
    pub mode: Mode,
    pub claims: Vec<Claim>,
}

impl RoundSpec {
    pub fn new(j: i64, focus: usize, protected: Vec<usize>, mode: Mode) -> Self {
        RoundSpec {
            j,
            focus,
            protected,
            mode,
            claims: Vec::new(),
        }
    }

    pub fn claim(mut self, c: Claim) -> Self {
        self.claims.push(c);
        self
    }

    /// Number of protected parts.
    pub fn i(&self) -> usize {
        self.protected.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Selector {
    #[default]
    Exchange,
    Exact,
}

/// One inequality evaluated during a round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub vertex: Option<Vertex>,
    pub inequality: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl Check {
    fn le(vertex: Option<Vertex>, inequality: &str, lhs: &Rational, rhs: &Rational) -> Check {
        Check {
            vertex,
            inequality: inequality.to_string(),
            lhs: rational::display(lhs),
            rhs: rational::display(rhs),
            pass: lhs <= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundReport {
    pub phase: Phase,
    /// Level filled.
    pub j: i64,
    pub focus: Option<usize>,
    pub protected: Vec<usize>,
    pub mode: Option<Mode>,
    /// Members of the new level set.
    pub level_set: Vec<Vertex>,
    /// Largest `δ_i` (focus) or `δ_0` (other unprotected parts) over the
    /// selected vertices, from `d_1` at the start of the round.
    #[serde(serialize_with = "rational::serialize")]
    pub delta_bound: Rational,
    /// Largest `gap/d_1'` actually written onto an edge.
    #[serde(serialize_with = "rational::serialize")]
    pub realized_delta: Rational,
    #[serde(serialize_with = "rational::serialize_opt_vec")]
    pub previous_part_gaps: Vec<Option<Rational>>,
    #[serde(serialize_with = "rational::serialize_opt_vec")]
    pub part_gaps: Vec<Option<Rational>>,
    /// Largest per-vertex gap increase in each part, over vertices still
    /// outside the level sets.
    #[serde(serialize_with = "rational::serialize_opt_vec")]
    pub growth: Vec<Option<Rational>>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RoundError {
    #[error("l = {l} is below r + k = {r} + {k}")]
    LevelTooLow { l: i64, r: usize, k: usize },
    #[error("round expects level {expected}, orientation is at {found}")]
    WrongLevel { expected: i64, found: i64 },
    #[error("invalid round: {0}")]
    BadSpec(String),
    #[error("not j-proper at the start of the round: {0}")]
    NotJProper(Violation),
    #[error("precondition failed: {}", describe(.0))]
    Precondition(Vec<Check>),
    #[error("postcondition failed: {}", describe(.0))]
    Postcondition(Vec<Check>),
    #[error(transparent)]
    Pfo(#[from] PfoError),
    #[error(transparent)]
    Select(#[from] SelectError),
}

fn describe(checks: &[Check]) -> String {
    checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| match c.vertex {
            Some(v) => format!("vertex {v}: {} ({} vs {})", c.inequality, c.lhs, c.rhs),
            None => format!("{} ({} vs {})", c.inequality, c.lhs, c.rhs),
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Fills `A_l, A_{l-1}, ..., A_{l-r+1}` without fractional edges.
///
/// At threshold `T = l - i + 1` let `X` be the unfrozen vertices with
/// potential at least `T`. `A_T` takes `X ∩ V_i` and then, in ascending order,
/// every other member of `X` without a neighbor already taken. Each member
/// keeps its base out-edges, adds further out-edges by ascending neighbor
/// until its outdegree is `T`, and receives the rest. Those received edges
/// are base in-edges, so neighbors stay aligned.
///
/// Returns an `(l - r)`-proper orientation and one report per level.
pub fn initial_levels<'g>(
    part: &VertexPartition,
    base: &BaseOrientation,
    pfo: PartialOrientation<'g>,
    l: i64,
) -> Result<(PartialOrientation<'g>, Vec<RoundReport>), RoundError> {
    let mut pfo = pfo;
    let g = pfo.graph();
    let (r, k) = (part.r(), base.k());
    if l < (r + k) as i64 {
        return Err(RoundError::LevelTooLow { l, r, k });
    }
    pfo.set_j(l);
    let mut reports = Vec::with_capacity(r);
    for i in 1..=r {
        let t = l - i as i64 + 1;
        let previous_part_gaps = pfo.part_gaps(part);
        let x: Vec<Vertex> = g
            .vertices()
            .filter(|&v| !pfo.in_frozen(v) && pfo.potential(v) >= int(t))
            .collect();
        let mut taken = vec![false; g.vertex_count()];
        for &v in &x {
            if part.class_of(v) == i {
                taken[v] = true;
            }
        }
        for &v in &x {
            if !taken[v] && !g.neighbors(v).any(|u| taken[u]) {
                taken[v] = true;
            }
        }
        let members: Vec<Vertex> = x.iter().copied().filter(|&v| taken[v]).collect();
        for &v in &members {
            let target = t;
            let mut out = pfo.oriented_outdegree(v);
            for &(_, e) in g.incident(v) {
                if pfo.is_unoriented(e) && base.is_out(v, e) {
                    pfo.orient(e, v);
                    out += Rational::one();
                }
            }
            for &(u, e) in g.incident(v) {
                if !pfo.is_unoriented(e) {
                    continue;
                }
                if out < int(target) {
                    pfo.orient(e, v);
                    out += Rational::one();
                } else {
                    debug_assert!(!base.is_out(v, e));
                    pfo.orient(e, u);
                }
            }
            if out != int(target) {
                return Err(RoundError::Pfo(PfoError::Internal(format!(
                    "vertex {v} reached outdegree {} instead of {target}",
                    rational::display(&out)
                ))));
            }
            pfo.set_level(v, Some(t));
        }
        pfo.set_j(t - 1);
        let part_gaps = pfo.part_gaps(part);
        let mut checks = Vec::new();
        if i == r {
            for (idx, gap) in part_gaps.iter().enumerate() {
                if let Some(gap) = gap {
                    let bound = int((r - idx - 1) as i64);
                    checks.push(Check::le(
                        None,
                        &format!("Gap({}) <= r - {}", idx + 1, idx + 1),
                        gap,
                        &bound,
                    ));
                }
            }
        }
        if checks.iter().any(|c| !c.pass) {
            return Err(RoundError::Postcondition(checks));
        }
        reports.push(RoundReport {
            phase: Phase::Initial,
            j: t,
            focus: Some(i),
            protected: Vec::new(),
            mode: None,
            level_set: members,
            delta_bound: Rational::zero(),
            realized_delta: Rational::zero(),
            growth: vec![None; r],
            previous_part_gaps,
            part_gaps,
            checks,
        });
    }
    Ok((pfo, reports))
}

/// One gap-closing round with the default exchange selector.
pub fn close_round<'g>(
    pfo: PartialOrientation<'g>,
    part: &VertexPartition,
    base: &BaseOrientation,
    spec: &RoundSpec,
) -> Result<(PartialOrientation<'g>, RoundReport), RoundError> {
    close_round_with(pfo, part, base, spec, Selector::Exchange)
}

/// Freezes `A_j` and closes the gap of the focus part.
///
/// Candidates are the unfrozen, not yet oriented vertices with nonnegative
/// gap; oriented vertices with gap zero join the level set directly. The
/// selected set `A` is weighted `⌈gap⌉` on the focus part and one on the
/// protected parts. Then:
///
/// 1. each protected part receives its Hall subgraph, oriented from `A` into
///    the part's unselected candidates;
/// 2. selected protected vertices orient all their remaining edges outward;
/// 3. other selected vertices orient their base out-edges outward and spread
///    their gap evenly over the `d_1'` base in-edges left, as
///    `p(a,u) = 1 - gap(a)/d_1'(a)`.
///
/// Each member of `A_j` ends with potential exactly `j`. The level then
/// drops to `j - 1` and potentials below it are rounded.
pub fn close_round_with<'g>(
    pfo: PartialOrientation<'g>,
    part: &VertexPartition,
    base: &BaseOrientation,
    spec: &RoundSpec,
    selector: Selector,
) -> Result<(PartialOrientation<'g>, RoundReport), RoundError> {
    let mut pfo = pfo;
    let g = pfo.graph();
    let j = spec.j;
    let k = base.k() as i64;
    let r = part.r();
    validate_spec(spec, r)?;
    if pfo.j() != j {
        return Err(RoundError::WrongLevel {
            expected: j,
            found: pfo.j(),
        });
    }
    pfo.check_j_proper(base, j, false).map_err(RoundError::NotJProper)?;
    let previous_part_gaps = pfo.part_gaps(part);
    pfo.round_potentials_below(j);
    pfo.check_residual_bound(base).map_err(RoundError::NotJProper)?;

    let i = spec.i() as i64;
    let protected = |v: Vertex| spec.protected.contains(&part.class_of(v));
    let focus = |v: Vertex| part.class_of(v) == spec.focus;
    let gap: Vec<Option<Rational>> = g.vertices().map(|v| pfo.gap(v)).collect();
    let d1: Vec<i64> = g.vertices().map(|v| pfo.residual_in_count(base, v)).collect();

    let mut checks = vec![Check::le(None, "k <= j", &int(k), &int(j))];
    let mut seed = Vec::new();
    let mut candidates = Vec::new();
    for v in g.vertices() {
        let Some(gv) = &gap[v] else { continue };
        if protected(v) {
            checks.push(Check::le(Some(v), "gap <= 0 on protected parts", gv, &Rational::zero()));
        }
        if gv.is_negative() {
            continue;
        }
        if pfo.is_oriented_vertex(v) {
            if gv.is_zero() {
                seed.push(v);
            }
            continue;
        }
        candidates.push(v);
        if focus(v) {
            let c = ceil_i64(gv);
            let lemma = Check::le(Some(v), "(i+1)*ceil(gap) <= d1", &int((i + 1) * c), &int(d1[v]));
            if spec.mode == Mode::Corollary {
                checks.push(Check::le(Some(v), "i*ceil(gap) + k <= j", &int(i * c + k), &int(j)));
                let mut implied = lemma;
                implied.inequality.push_str(" (implied)");
                checks.push(implied);
            } else {
                checks.push(lemma);
            }
        }
    }
    if checks.iter().any(|c| !c.pass) {
        return Err(RoundError::Precondition(
            checks.into_iter().filter(|c| !c.pass).collect(),
        ));
    }

    let weight: Vec<u64> = g
        .vertices()
        .map(|v| match &gap[v] {
            Some(gv) if focus(v) => ceil_i64(gv).max(0) as u64,
            Some(_) if protected(v) => 1,
            _ => 0,
        })
        .collect();
    let problem = IndsetProblem {
        graph: g,
        candidates,
        weight,
        class_of: part.classes(),
        focus: spec.focus,
        protected: spec.protected.clone(),
    };
    let selection = match selector {
        Selector::Exchange => select_exchange(&problem)?,
        Selector::Exact => select_exact(&problem)?,
    };

    for assignment in &selection.hall {
        for &(a, x) in &assignment.arcs {
            let e = g.edge_id(a, x).expect("Hall arc is an edge");
            debug_assert!(pfo.is_unoriented(e));
            pfo.orient(e, a);
        }
    }
    let mut delta_bound = Rational::zero();
    let mut realized_delta = Rational::zero();
    for &a in &selection.set {
        let ga = gap[a].clone().expect("candidate is unfrozen");
        if protected(a) {
            for &(_, e) in g.incident(a) {
                if pfo.is_unoriented(e) {
                    pfo.orient(e, a);
                }
            }
            continue;
        }
        for &(_, e) in g.incident(a) {
            if pfo.is_unoriented(e) && base.is_out(a, e) {
                pfo.orient(e, a);
            }
        }
        let rest: Vec<_> = g
            .incident(a)
            .iter()
            .filter(|&&(_, e)| pfo.is_unoriented(e))
            .map(|&(_, e)| e)
            .collect();
        if ga.is_zero() {
            for e in rest {
                pfo.orient(e, a);
            }
            continue;
        }
        let used = if focus(a) { i * ceil_i64(&ga) } else { 0 };
        delta_bound = delta_bound.max(&ga / int(d1[a] - used));
        if rest.is_empty() {
            return Err(RoundError::Pfo(PfoError::Internal(format!(
                "selected vertex {a} has positive gap and no residual in-edges"
            ))));
        }
        let share = &ga / int(rest.len() as i64);
        realized_delta = realized_delta.max(share.clone());
        let value = Rational::one() - share;
        for e in rest {
            if value.is_zero() {
                let (u, v) = g.endpoints(e);
                pfo.orient(e, if u == a { v } else { u });
            } else {
                pfo.set_value(e, a, value.clone());
            }
        }
    }

    let mut level_set: Vec<Vertex> = selection.set.iter().chain(&seed).copied().collect();
    level_set.sort_unstable();
    for &v in &level_set {
        pfo.set_level(v, Some(j));
    }
    pfo.set_j(j - 1);
    pfo.round_potentials_below(j - 1);

    let part_gaps = pfo.part_gaps(part);
    let mut growth: Vec<Option<Rational>> = vec![None; r];
    let mut post = Vec::new();
    for v in g.vertices() {
        let (Some(before), Some(after)) = (&gap[v], pfo.gap(v)) else {
            continue;
        };
        let delta = &after - before;
        let slot = &mut growth[part.class_of(v) - 1];
        if slot.as_ref().is_none_or(|cur| delta > *cur) {
            *slot = Some(delta.clone());
        }
        if after.is_positive() {
            post.push(Check::le(Some(v), "gap growth <= delta_bound", &delta, &delta_bound));
        }
    }
    for s in std::iter::once(spec.focus).chain(spec.protected.iter().copied()) {
        if let Some(gs) = &part_gaps[s - 1] {
            post.push(Check::le(None, &format!("Gap({s}) <= 0"), gs, &Rational::zero()));
        }
    }
    for claim in &spec.claims {
        match claim {
            Claim::DeltaAtMost { bound } => post.push(Check::le(None, "delta_bound <= claim", &delta_bound, bound)),
            Claim::GapAtMost { part: s, bound } => {
                if let Some(gs) = &part_gaps[s - 1] {
                    post.push(Check::le(None, &format!("Gap({s}) <= claim"), gs, bound));
                }
            }
        }
    }
    if post.iter().any(|c| !c.pass) {
        return Err(RoundError::Postcondition(
            post.into_iter().filter(|c| !c.pass).collect(),
        ));
    }
    checks.extend(post);

    let report = RoundReport {
        phase: Phase::Close,
        j,
        focus: Some(spec.focus),
        protected: spec.protected.clone(),
        mode: Some(spec.mode),
        level_set,
        delta_bound,
        realized_delta,
        previous_part_gaps,
        part_gaps,
        growth,
        checks,
    };
    Ok((pfo, report))
}

fn validate_spec(spec: &RoundSpec, r: usize) -> Result<(), RoundError> {
    let in_range = |s: usize| (1..=r).contains(&s);
    if !in_range(spec.focus) || spec.protected.iter().any(|&s| !in_range(s)) {
        return Err(RoundError::BadSpec(format!("parts must lie in 1..={r}")));
    }
    if spec.protected.contains(&spec.focus) {
        return Err(RoundError::BadSpec("focus part is protected".into()));
    }
    let mut sorted = spec.protected.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != spec.protected.len() {
        return Err(RoundError::BadSpec("protected parts repeat".into()));
    }
    Ok(())
}
