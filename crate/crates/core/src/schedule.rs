//! Round schedules and the end-to-end pipeline.
//!
//! A schedule fixes the number of parts `r`, the base orientation bound `k`,
//! the top level `l` and the list of gap-closing rounds run after the initial
//! leveling. Every round of every schedule must satisfy its preconditions on
//! any graph with a proper `r`-coloring and a `k`-orientation; the pipeline
//! re-checks them anyway and fails loudly if one does not hold.

use serde::Serialize;
use thiserror::Error;

use crate::coloring::{greedy_partition, two_coloring};
use crate::degeneracy::{build_k_orientation, min_orientation_k, InfeasibilityWitness};
use crate::gap::{close_round_with, initial_levels, Claim, Mode, RoundError, RoundReport, RoundSpec, Selector};
use crate::graph::{
    verify_proper_orientation, Graph, GraphError, IntegralOrientation, VerificationReport, VertexPartition,
};
use crate::pfo::{PartialOrientation, PfoError, Violation};
use crate::rational::{int, inverse_power, ratio};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Bipartite,
    Rpartite,
    Planar4,
    Colorable3,
    Outerplanar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScheduleParams {
    pub family: Family,
    pub r: usize,
    pub k: usize,
    pub l: i64,
    /// Only set for the `r`-partite schedule.
    pub t: Option<u64>,
    pub rounds: Vec<RoundSpec>,
}

impl ScheduleParams {
    /// Levels filled in total: `r` initial levels plus one per round.
    pub fn level_count(&self) -> usize {
        self.r + self.rounds.len()
    }

    pub fn guaranteed_bound(&self) -> i64 {
        self.l
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("schedule needs {0}")]
    Unsupported(String),
}

fn all_nonpositive(mut spec: RoundSpec, r: usize) -> RoundSpec {
    for part in 1..=r {
        spec = spec.claim(Claim::GapAtMost { part, bound: int(0) });
    }
    spec
}

/// Two parts, `l = k + 3`: after the two initial levels one round closes
/// `V_1` while protecting `V_2`.
pub fn schedule_bipartite(k: usize) -> Result<ScheduleParams, ScheduleError> {
    if k < 1 {
        return Err(ScheduleError::Unsupported("k >= 1".into()));
    }
    let l = k as i64 + 3;
    Ok(ScheduleParams {
        family: Family::Bipartite,
        r: 2,
        k,
        l,
        t: None,
        rounds: vec![all_nonpositive(RoundSpec::new(l - 2, 1, vec![2], Mode::Corollary), 2)],
    })
}

/// Smallest `t >= 1` with `t^(t+1) >= r - 1`.
pub fn rpartite_t(r: usize) -> u64 {
    let target = r.saturating_sub(1) as u128;
    (1u64..)
        .find(|&t| {
            let mut p: u128 = 1;
            for _ in 0..=t {
                p = p.saturating_mul(t as u128);
            }
            p >= target
        })
        .expect("t^(t+1) is unbounded")
}

/// `l = k + 3r(t+1)`. First `rt` rounds close the parts cyclically with no
/// protection; each raises the other gaps by at most `t^-⌈(m+1)/r⌉` in round
/// `m`. Then `r` rounds close `V_1, ..., V_r` in turn, round `i` protecting
/// the `i` parts already closed, with growth at most `t^-(t+1)`.
pub fn schedule_rpartite(r: usize, k: usize) -> Result<ScheduleParams, ScheduleError> {
    if r < 2 {
        return Err(ScheduleError::Unsupported("r >= 2".into()));
    }
    let t = rpartite_t(r);
    let rr = r as i64;
    let ti = t as i64;
    let l = k as i64 + 3 * rr * (ti + 1);
    let mut rounds = Vec::new();
    for m in 0..r * t as usize {
        let exponent = (m / r + 1) as u32;
        rounds.push(
            RoundSpec::new(l - rr - m as i64, m % r + 1, Vec::new(), Mode::Corollary).claim(Claim::DeltaAtMost {
                bound: inverse_power(ti, exponent),
            }),
        );
    }
    for i in 0..r {
        let mut spec = RoundSpec::new(l - rr * (ti + 1) - i as i64, i + 1, (1..=i).collect(), Mode::Corollary).claim(
            Claim::DeltaAtMost {
                bound: inverse_power(ti, (t + 1) as u32),
            },
        );
        if i + 1 == r {
            spec = all_nonpositive(spec, r);
        }
        rounds.push(spec);
    }
    Ok(ScheduleParams {
        family: Family::Rpartite,
        r,
        k,
        l,
        t: Some(t),
        rounds,
    })
}

/// Four parts, `k = 3`, `l = 14`, four lemma-mode rounds.
///
/// The claimed chain: after round one the round's growth is at most `3/7`,
/// `Gap(2) <= 2 + 3/7` and `Gap(3) <= 1 + 3/7`; after round two
/// `Gap(3) <= 1 + 3/7 + 17/21`; after round three `Gap(4) <= 1`; after round
/// four every gap is nonpositive.
pub fn schedule_planar4() -> ScheduleParams {
    let k = 3;
    let l = 14;
    let rounds = vec![
        RoundSpec::new(10, 1, vec![4], Mode::Lemma)
            .claim(Claim::DeltaAtMost { bound: ratio(3, 7) })
            .claim(Claim::GapAtMost {
                part: 2,
                bound: int(2) + ratio(3, 7),
            })
            .claim(Claim::GapAtMost {
                part: 3,
                bound: int(1) + ratio(3, 7),
            }),
        RoundSpec::new(9, 2, vec![1, 4], Mode::Lemma)
            .claim(Claim::DeltaAtMost { bound: ratio(17, 21) })
            .claim(Claim::GapAtMost {
                part: 3,
                bound: int(1) + ratio(3, 7) + ratio(17, 21),
            }),
        RoundSpec::new(8, 3, vec![1, 2], Mode::Lemma).claim(Claim::GapAtMost { part: 4, bound: int(1) }),
        all_nonpositive(RoundSpec::new(7, 4, vec![1, 2, 3], Mode::Lemma), 4),
    ];
    ScheduleParams {
        family: Family::Planar4,
        r: 4,
        k,
        l,
        t: None,
        rounds,
    }
}

/// Three parts, `l = k + 8`, for `k` in `{2, 3}`. Round one closes `V_1`
/// protecting `V_3` with growth at most `2/5` (so `Gap(2) <= 1 + 2/5`);
/// round two closes `V_2` protecting `V_1` and `V_3`.
pub fn schedule_3colorable(k: usize) -> Result<ScheduleParams, ScheduleError> {
    if !(2..=3).contains(&k) {
        return Err(ScheduleError::Unsupported("k in {2, 3}".into()));
    }
    let l = k as i64 + 8;
    let rounds = vec![
        RoundSpec::new(l - 3, 1, vec![3], Mode::Lemma)
            .claim(Claim::DeltaAtMost { bound: ratio(2, 5) })
            .claim(Claim::GapAtMost {
                part: 2,
                bound: int(1) + ratio(2, 5),
            }),
        all_nonpositive(RoundSpec::new(l - 4, 2, vec![1, 3], Mode::Lemma), 3),
    ];
    Ok(ScheduleParams {
        family: Family::Colorable3,
        r: 3,
        k,
        l,
        t: None,
        rounds,
    })
}

/// The 3-colorable schedule at `k = 2`.
pub fn schedule_outerplanar() -> ScheduleParams {
    let mut s = schedule_3colorable(2).expect("k = 2 is supported");
    s.family = Family::Outerplanar;
    s
}

/// Picks a partition and schedule for `g`: the bipartite schedule when `g`
/// is 2-colorable, otherwise the `r`-partite schedule on a greedy coloring.
/// `k` is the smallest feasible orientation bound.
pub fn auto_schedule(g: &Graph) -> (VertexPartition, ScheduleParams) {
    let k = min_orientation_k(g);
    if let Some(part) = two_coloring(g) {
        let sched = schedule_bipartite(k.max(1)).expect("k >= 1");
        return (part, sched);
    }
    let part = greedy_partition(g);
    let sched = schedule_rpartite(part.r(), k).expect("non-bipartite graphs need r >= 3");
    (part, sched)
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineResult {
    #[serde(skip)]
    pub orientation: IntegralOrientation,
    pub achieved_max: usize,
    pub guaranteed_bound: i64,
    pub round_log: Vec<RoundReport>,
    pub verification: VerificationReport,
    /// Number of invariant checks run between rounds, all of which passed.
    pub invariant_checks: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("partition has {found} parts, schedule expects {expected}")]
    PartitionMismatch { expected: usize, found: usize },
    #[error("no {}-orientation: {} vertices span {} edges", .0.k, .0.vertex_set.len(), .0.edge_count)]
    Infeasible(InfeasibilityWitness),
    #[error("round {round}: {error}")]
    Round { round: usize, error: RoundError },
    #[error("after round {round}: invariant violated: {violation}")]
    Invariant { round: usize, violation: Violation },
    #[error(transparent)]
    Finalize(#[from] PfoError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("final orientation {0}")]
    Verification(String),
}

impl PipelineError {
    /// Whether the failure is a violated precondition (as opposed to an
    /// internal error).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            PipelineError::PartitionMismatch { .. }
                | PipelineError::Infeasible(_)
                | PipelineError::Round {
                    error: RoundError::Precondition(_) | RoundError::LevelTooLow { .. },
                    ..
                }
        )
    }
}

pub fn run_pipeline(
    g: &Graph,
    part: &VertexPartition,
    sched: &ScheduleParams,
) -> Result<PipelineResult, PipelineError> {
    run_pipeline_with(g, part, sched, Selector::Exchange)
}

/// Base orientation, initial leveling, the scheduled rounds and the final
/// rounding, with the structural invariants checked after every level.
pub fn run_pipeline_with(
    g: &Graph,
    part: &VertexPartition,
    sched: &ScheduleParams,
    selector: Selector,
) -> Result<PipelineResult, PipelineError> {
    if part.r() != sched.r {
        return Err(PipelineError::PartitionMismatch {
            expected: sched.r,
            found: part.r(),
        });
    }
    let base = build_k_orientation(g, sched.k).map_err(PipelineError::Infeasible)?;
    let mut checks = 0;
    let mut check = |pfo: &PartialOrientation<'_>, round: usize| -> Result<(), PipelineError> {
        let invariant = |violation| PipelineError::Invariant { round, violation };
        pfo.check_j_proper(&base, pfo.j(), true).map_err(invariant)?;
        pfo.check_residual_bound(&base).map_err(invariant)?;
        checks += 1;
        Ok(())
    };

    let (mut pfo, mut log) = initial_levels(part, &base, PartialOrientation::new(g, sched.l), sched.l)
        .map_err(|error| PipelineError::Round { round: 0, error })?;
    check(&pfo, 0)?;
    for (idx, spec) in sched.rounds.iter().enumerate() {
        let round = idx + 1;
        let (next, report) = close_round_with(pfo, part, &base, spec, selector)
            .map_err(|error| PipelineError::Round { round, error })?;
        pfo = next;
        check(&pfo, round)?;
        log.push(report);
    }
    let orientation = pfo.finalize(&base)?;
    let verification = verify_proper_orientation(g, &orientation, sched.l.max(0) as usize)?;
    if !verification.is_proper {
        return Err(PipelineError::Verification("is not proper".into()));
    }
    if !verification.bound_respected {
        return Err(PipelineError::Verification(format!(
            "exceeds l = {} with outdegree {}",
            sched.l, verification.max_outdegree
        )));
    }
    Ok(PipelineResult {
        achieved_max: orientation.max_outdegree(),
        guaranteed_bound: sched.l,
        orientation,
        round_log: log,
        verification,
        invariant_checks: checks,
    })
}

#[derive(Serialize)]
struct LogRecord<'a> {
    round: usize,
    #[serde(flatten)]
    report: &'a RoundReport,
}

/// The round log as newline-delimited JSON, one record per level.
pub fn log_ndjson(log: &[RoundReport]) -> String {
    let mut out = String::new();
    for (round, report) in log.iter().enumerate() {
        out.push_str(&serde_json::to_string(&LogRecord { round, report }).expect("report serializes"));
        out.push('\n');
    }
    out
}
