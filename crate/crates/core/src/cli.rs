//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or format error, 2 failed precondition or
//! failed verification, 3 input beyond an oracle's budget.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coloring::{greedy_partition, two_coloring};
use crate::degeneracy::min_orientation_k;
use crate::formats::{
    parse_graph, parse_orientation, parse_partition, write_graph, write_orientation, write_partition,
};
use crate::gap::{RoundReport, Selector};
use crate::generators::{gen_family, FamilyParams};
use crate::graph::{verify_proper_orientation, Graph, VertexPartition};
use crate::oracle::{exact_mad, exact_proper_chromatic, exact_proper_chromatic_tree, OracleBudget, OracleError};
use crate::rational;
use crate::schedule::{
    auto_schedule, log_ndjson, run_pipeline_with, schedule_3colorable, schedule_bipartite, schedule_outerplanar,
    schedule_planar4, schedule_rpartite, Family, ScheduleParams,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FORMAT: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "proper-orient",
    version,
    about = "Proper orientations with bounded outdegree"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print a line per level to stderr (`orient` only).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleChoice {
    Auto,
    Bipartite,
    Rpartite,
    Planar4,
    Colorable3,
    Outerplanar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelectorChoice {
    Exchange,
    Exact,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a proper orientation with the chosen schedule.
    Orient {
        graph: PathBuf,
        /// Partition file (`v c` lines); defaults to a 2-coloring for the
        /// bipartite schedule and a greedy coloring otherwise.
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        schedule: ScheduleChoice,
        /// Base orientation bound; defaults to the smallest feasible value
        /// the schedule accepts.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "exchange")]
        selector: SelectorChoice,
        /// Orientation output (stdout when absent).
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// JSON report output; printed to stdout when `-o` is given.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Newline-delimited JSON round log.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Check an orientation for properness and an optional bound.
    Verify {
        graph: PathBuf,
        orientation: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Exact maximum average degree, or with `--min-k` the smallest `k`
    /// admitting a `k`-orientation.
    Mad {
        graph: PathBuf,
        #[arg(long)]
        min_k: bool,
    },
    /// Exact proper orientation number of a small graph or any tree.
    Exact {
        graph: PathBuf,
        /// Optimal orientation output.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Write a generated graph.
    Gen {
        /// Family name, e.g. `tightness`, `grid`, `random_bipartite`.
        name: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long)]
        partition_out: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(EXIT_FORMAT, format!("{}: {e}", path.display())))
}

fn write_to(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| fail(EXIT_FORMAT, format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| fail(EXIT_FORMAT, format!("stdout: {e}"))),
    }
}

fn load_graph(path: &Path, err: &mut dyn Write) -> Result<Graph, Failure> {
    let parsed = parse_graph(&read(path)?).map_err(|e| fail(EXIT_FORMAT, format!("{}: {e}", path.display())))?;
    if parsed.duplicates > 0 {
        let _ = writeln!(err, "warning: {} duplicate edge lines ignored", parsed.duplicates);
    }
    Ok(parsed.graph)
}

#[derive(Serialize)]
struct Report<'a> {
    schema: u32,
    family: Family,
    r: usize,
    k: usize,
    l: i64,
    t: Option<u64>,
    achieved_max: usize,
    guaranteed_bound: i64,
    invariant_checks: usize,
    rounds: &'a [RoundReport],
}

fn choose(
    g: &Graph,
    partition: Option<VertexPartition>,
    schedule: ScheduleChoice,
    k: Option<usize>,
) -> Result<(VertexPartition, ScheduleParams), Failure> {
    let precondition = |m: String| fail(EXIT_PRECONDITION, m);
    let min_k = || min_orientation_k(g);
    if schedule == ScheduleChoice::Auto && partition.is_none() && k.is_none() {
        return Ok(auto_schedule(g));
    }
    let default_part = |bipartite: bool| -> Result<VertexPartition, Failure> {
        if bipartite {
            two_coloring(g).ok_or_else(|| precondition("graph is not bipartite".into()))
        } else {
            Ok(greedy_partition(g))
        }
    };
    let (part, sched) = match schedule {
        ScheduleChoice::Auto => {
            let part = match partition {
                Some(p) => p,
                None => two_coloring(g).unwrap_or_else(|| greedy_partition(g)),
            };
            let k = k.unwrap_or_else(min_k);
            let sched = if part.r() <= 2 {
                schedule_bipartite(k.max(1))
            } else {
                schedule_rpartite(part.r(), k)
            }
            .map_err(|e| precondition(e.to_string()))?;
            (part, sched)
        }
        ScheduleChoice::Bipartite => {
            let part = match partition {
                Some(p) => p,
                None => default_part(true)?,
            };
            let sched =
                schedule_bipartite(k.unwrap_or_else(|| min_k().max(1))).map_err(|e| precondition(e.to_string()))?;
            (part, sched)
        }
        ScheduleChoice::Rpartite => {
            let part = match partition {
                Some(p) => p,
                None => default_part(false)?,
            };
            let sched =
                schedule_rpartite(part.r(), k.unwrap_or_else(min_k)).map_err(|e| precondition(e.to_string()))?;
            (part, sched)
        }
        ScheduleChoice::Planar4 => {
            if k.is_some_and(|k| k != 3) {
                return Err(precondition("the planar schedule fixes k = 3".into()));
            }
            (partition.map_or_else(|| default_part(false), Ok)?, schedule_planar4())
        }
        ScheduleChoice::Colorable3 => {
            let sched =
                schedule_3colorable(k.unwrap_or_else(|| min_k().max(2))).map_err(|e| precondition(e.to_string()))?;
            (partition.map_or_else(|| default_part(false), Ok)?, sched)
        }
        ScheduleChoice::Outerplanar => {
            if k.is_some_and(|k| k != 2) {
                return Err(precondition("the outerplanar schedule fixes k = 2".into()));
            }
            (
                partition.map_or_else(|| default_part(false), Ok)?,
                schedule_outerplanar(),
            )
        }
    };
    Ok((part, sched))
}

#[allow(clippy::too_many_arguments)]
fn cmd_orient(
    graph: &Path,
    partition: Option<&Path>,
    schedule: ScheduleChoice,
    k: Option<usize>,
    selector: SelectorChoice,
    output: Option<&Path>,
    report: Option<&Path>,
    log: Option<&Path>,
    verbose: u8,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let g = load_graph(graph, err)?;
    let part = match partition {
        Some(p) => {
            Some(parse_partition(&g, &read(p)?).map_err(|e| fail(EXIT_FORMAT, format!("{}: {e}", p.display())))?)
        }
        None => None,
    };
    let (part, sched) = choose(&g, part, schedule, k)?;
    let selector = match selector {
        SelectorChoice::Exchange => Selector::Exchange,
        SelectorChoice::Exact => Selector::Exact,
    };
    let result = run_pipeline_with(&g, &part, &sched, selector).map_err(|e| fail(EXIT_PRECONDITION, e.to_string()))?;
    if verbose > 0 {
        for (i, r) in result.round_log.iter().enumerate() {
            let _ = writeln!(
                err,
                "round {i}: j={} focus={:?} |A|={} delta_bound={}",
                r.j,
                r.focus,
                r.level_set.len(),
                rational::display(&r.delta_bound)
            );
        }
        let _ = writeln!(
            err,
            "max outdegree {} (bound {})",
            result.achieved_max, result.guaranteed_bound
        );
    }
    write_to(output, &write_orientation(&g, &result.orientation), out)?;
    let body = Report {
        schema: 1,
        family: sched.family,
        r: sched.r,
        k: sched.k,
        l: sched.l,
        t: sched.t,
        achieved_max: result.achieved_max,
        guaranteed_bound: result.guaranteed_bound,
        invariant_checks: result.invariant_checks,
        rounds: &result.round_log,
    };
    let mut json = serde_json::to_string_pretty(&body).expect("report serializes");
    json.push('\n');
    if report.is_some() || output.is_some() {
        write_to(report, &json, out)?;
    }
    if let Some(path) = log {
        write_to(Some(path), &log_ndjson(&result.round_log), out)?;
    }
    Ok(())
}

fn cmd_verify(
    graph: &Path,
    orientation: &Path,
    bound: Option<usize>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let g = load_graph(graph, err)?;
    let o = parse_orientation(&g, &read(orientation)?)
        .map_err(|e| fail(EXIT_FORMAT, format!("{}: {e}", orientation.display())))?;
    let report =
        verify_proper_orientation(&g, &o, bound.unwrap_or(usize::MAX)).map_err(|e| fail(EXIT_FORMAT, e.to_string()))?;
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    write_to(None, &json, out)?;
    if !report.is_proper {
        return Err(fail(
            EXIT_PRECONDITION,
            format!("{} improper edges", report.violations.len()),
        ));
    }
    if !report.bound_respected {
        return Err(fail(
            EXIT_PRECONDITION,
            format!("max outdegree {} exceeds the bound", report.max_outdegree),
        ));
    }
    Ok(())
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::OverBudget { .. } | OracleError::TimedOut => fail(EXIT_BUDGET, e.to_string()),
        OracleError::NotATree => fail(EXIT_FORMAT, e.to_string()),
    }
}

fn cmd_mad(graph: &Path, min_k: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let g = load_graph(graph, err)?;
    let text = if min_k {
        min_orientation_k(&g).to_string()
    } else {
        rational::display(&exact_mad(&g, &OracleBudget::mad_default()).map_err(oracle_failure)?)
    };
    write_to(None, &format!("{text}\n"), out)
}

fn cmd_exact(graph: &Path, output: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let g = load_graph(graph, err)?;
    let (value, o) = if g.is_tree() {
        exact_proper_chromatic_tree(&g)
    } else {
        exact_proper_chromatic(&g, &OracleBudget::default())
    }
    .map_err(oracle_failure)?;
    write_to(None, &format!("{value}\n"), out)?;
    if let Some(path) = output {
        write_to(Some(path), &write_orientation(&g, &o), out)?;
    }
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FORMAT } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Orient {
            graph,
            partition,
            schedule,
            k,
            selector,
            output,
            report,
            log,
        } => cmd_orient(
            graph,
            partition.as_deref(),
            *schedule,
            *k,
            *selector,
            output.as_deref(),
            report.as_deref(),
            log.as_deref(),
            cli.verbose,
            out,
            err,
        ),
        Command::Verify {
            graph,
            orientation,
            bound,
        } => cmd_verify(graph, orientation, *bound, out, err),
        Command::Mad { graph, min_k } => cmd_mad(graph, *min_k, out, err),
        Command::Exact { graph, output } => cmd_exact(graph, output.as_deref(), out, err),
        Command::Gen {
            name,
            k,
            n,
            m,
            rows,
            cols,
            seed,
            output,
            partition_out,
        } => {
            let params = FamilyParams {
                n: *n,
                m: *m,
                rows: *rows,
                cols: *cols,
                k: *k,
                seed: *seed,
            };
            gen_family(name, &params)
                .map_err(|e| fail(EXIT_FORMAT, e.to_string()))
                .and_then(|(g, part)| {
                    write_to(output.as_deref(), &write_graph(&g), out)?;
                    if let Some(path) = partition_out {
                        let part = part.unwrap_or_else(|| greedy_partition(&g));
                        write_to(Some(path), &write_partition(&g, &part), out)?;
                    }
                    Ok(())
                })
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
