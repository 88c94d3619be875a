//! Proper orientations with bounded maximum outdegree.
//!
//! Given a graph with a proper `r`-coloring and a `k`-orientation, the
//! pipeline in [`schedule`] produces an orientation in which adjacent
//! vertices have different outdegrees and every outdegree is at most a bound
//! `l` that depends only on `r` and `k`. It works by freezing independent
//! level sets one level at a time on a [`pfo::PartialOrientation`], using
//! exact rational edge values.
//!
//! ```
//! use proper_orient::generators::random_tree;
//! use proper_orient::schedule::{auto_schedule, run_pipeline};
//!
//! let g = random_tree(200, 42);
//! let (part, sched) = auto_schedule(&g);
//! let res = run_pipeline(&g, &part, &sched).unwrap();
//! assert!(res.achieved_max <= 4);
//! ```
//!
//! [`oracle`] has exact brute-force counterparts for small graphs and
//! [`generators`] the graph families used in testing.

pub mod cli;
pub mod coloring;
pub mod degeneracy;
pub mod formats;
pub mod gap;
pub mod generators;
pub mod graph;
pub mod hall;
pub mod indset;
pub mod oracle;
pub mod pfo;
pub mod rational;
pub mod schedule;

pub use graph::{verify_proper_orientation, Graph, IntegralOrientation, VertexPartition};
pub use schedule::{run_pipeline, PipelineResult, ScheduleParams};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/proper-orientations.md")]
    pub struct ProperOrientations;
    #[doc = include_str!("../../../book/src/k-orientations.md")]
    pub struct KOrientations;
    #[doc = include_str!("../../../book/src/partial-orientations.md")]
    pub struct PartialOrientations;
    #[doc = include_str!("../../../book/src/hall.md")]
    pub struct Hall;
    #[doc = include_str!("../../../book/src/rounds.md")]
    pub struct Rounds;
    #[doc = include_str!("../../../book/src/schedules.md")]
    pub struct Schedules;
    #[doc = include_str!("../../../book/src/generators.md")]
    pub struct Generators;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
}
