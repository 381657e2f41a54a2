//! Command-line front end. Every subcommand prints one JSON document (or a
//! short text summary with `--format text`) and maps its outcome to an exit
//! code: 0 success, 1 the answer is no or none, 2 bad input, 3 budget
//! exhausted.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cliquecontract::route_via_clique_contraction;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hconn::{balanced_sizes, find_partition, route_hconnected, ConnectedPartition};
use crate::maxroute::{max_routability, Mode};
use crate::oracle::{max_agreements_exact, routing_number_exact, routing_time_exact, SearchBudget};
use crate::perm::Permutation;
use crate::reductions::{build_ccpp_instance, build_sat_instance, ccpp_solve_exact, CnfFormula};
use crate::schedule::{verify_schedule, Schedule};
use crate::treeroute::{route_tree, RootedTree};
use crate::twostep::routable_in;
use crate::{generate, io};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "matchroute", version, about = "Permutation routing where every step is a matching")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads for commands that can use them.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..), global = true)]
    pub threads: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Maximum number of search states.
    #[arg(long, default_value_t = 10_000_000)]
    pub max_states: usize,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub time_limit: f64,
    /// Maximum search depth.
    #[arg(long, default_value_t = 64)]
    pub max_depth: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Result<SearchBudget> {
        let limit = Duration::try_from_secs_f64(self.time_limit).map_err(|_| Error::input("time limit must be a non-negative number"))?;
        Ok(SearchBudget::default().with_states(self.max_states).with_time(limit).with_depth(self.max_depth))
    }
}

#[derive(Debug, Args)]
pub struct Instance {
    /// Graph file: `n m` then one `u v` line per edge.
    #[arg(long)]
    pub graph: PathBuf,
    /// Permutation file: `n` then the image of each vertex.
    #[arg(long)]
    pub perm: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScheduleOut {
    /// Also write the schedule in the text format read by `verify`.
    #[arg(long)]
    pub schedule_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MaxMode {
    Exact,
    Greedy,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a schedule against a graph and permutation.
    Verify {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Exact routing time with a witness schedule.
    RtExact {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: ScheduleOut,
        /// Include the elapsed time, which makes the output run-dependent.
        #[arg(long)]
        timing: bool,
    },
    /// Exact routing number of a small graph.
    RoutingNumber {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Decide routing in at most two steps.
    Rt2 {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        out: ScheduleOut,
    },
    /// Route on a tree.
    RouteTree {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[command(flatten)]
        out: ScheduleOut,
    },
    /// Route on a graph split into connected blocks around ports.
    RouteHconn {
        #[command(flatten)]
        inst: Instance,
        /// Partition file, one block per line with its port first.
        #[arg(long, conflicts_with = "ports")]
        partition: Option<PathBuf>,
        /// Ports (comma separated); blocks of balanced sizes are searched for.
        #[arg(long)]
        ports: Option<String>,
        /// Compact the phases into each other.
        #[arg(long)]
        pipelined: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: ScheduleOut,
    },
    /// Route through a large clique.
    RouteKappa {
        #[command(flatten)]
        inst: Instance,
        /// Clique vertices (comma separated); a maximum clique by default.
        #[arg(long)]
        clique: Option<String>,
        #[command(flatten)]
        out: ScheduleOut,
    },
    /// Most pebbles placeable within `k` steps.
    Maxroute {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = MaxMode::Exact)]
        mode: MaxMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: ScheduleOut,
    },
    /// Most pebbles placeable within `k` steps, by state-space search.
    MaxAgree {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Build the three-step routing instance of a 3-CNF formula.
    ReduceSat {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long, default_value_t = 1)]
        chain_len: usize,
        /// Writes `<out>.graph`, `<out>.perm` and `<out>.provenance.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the colored partition instance of a 3-CNF formula.
    ReduceCcpp {
        #[arg(long)]
        cnf: PathBuf,
        /// Writes `<out>.graph`, `<out>.colors` and `<out>.provenance.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Find a colored connected partition with blocks of at most `t` vertices.
    CcppSolve {
        #[arg(long)]
        graph: PathBuf,
        /// Coloring file: one `v color` line per vertex.
        #[arg(long)]
        colors: PathBuf,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Generate a graph.
    Gen {
        #[arg(value_enum)]
        family: Family,
        /// Number of vertices (side sizes use --a/--b, cubes use --dim).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        dim: Option<u32>,
        /// Edge probability for random-connected.
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the graph file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Path,
    Cycle,
    Star,
    Complete,
    CompleteBipartite,
    Hypercube,
    RandomTree,
    RandomConnected,
}

/// What a command printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: i32,
    json: Value,
    text: String,
}

impl Report {
    fn ok(json: Value, text: impl Into<String>) -> Self {
        Report { code: EXIT_OK, json, text: text.into() }
    }

    fn no(json: Value, text: impl Into<String>) -> Self {
        Report { code: EXIT_NO, json, text: text.into() }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let stdout = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string(&r.json).expect("values serialize")),
                Format::Text => {
                    let mut t = r.text;
                    if !t.ends_with('\n') {
                        t.push('\n');
                    }
                    t
                }
            };
            Outcome { code: r.code, stdout, stderr: String::new() }
        }
        Err(e) => {
            let code = if e.is_budget() { EXIT_BUDGET } else { EXIT_INPUT };
            Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn load_graph(path: &Path) -> Result<Graph> {
    io::parse_graph(&read(path)?)
}

fn load(inst: &Instance) -> Result<(Graph, Permutation)> {
    let g = load_graph(&inst.graph)?;
    let pi = io::parse_permutation(&read(&inst.perm)?)?;
    if pi.len() != g.n() {
        return Err(Error::input(format!("permutation has {} entries, graph has {} vertices", pi.len(), g.n())));
    }
    Ok((g, pi))
}

fn steps_json(s: &Schedule) -> Value {
    Value::Array(s.steps().iter().map(|m| json!(m.pairs().iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>())).collect())
}

/// Checks an emitted schedule and writes it out if asked.
fn emit(g: &Graph, pi: &Permutation, s: &Schedule, out: &ScheduleOut) -> Result<()> {
    let report = verify_schedule(g, pi, s);
    if !report.valid {
        return Err(Error::input(format!("internal error: emitted schedule fails verification: {report:?}")));
    }
    if let Some(path) = &out.schedule_out {
        write(path, &io::format_schedule(s))?;
    }
    Ok(())
}

fn schedule_report(g: &Graph, pi: &Permutation, s: &Schedule, out: &ScheduleOut, extra: Value) -> Result<Report> {
    emit(g, pi, s, out)?;
    let mut json = json!({ "length": s.len(), "schedule": steps_json(s) });
    if let (Value::Object(m), Value::Object(e)) = (&mut json, extra) {
        m.extend(e);
    }
    Ok(Report::ok(json, io::format_schedule(s)))
}

fn vertex_list(text: &str, n: usize) -> Result<Vec<usize>> {
    let vs = io::parse_vertex_list(text)?;
    if let Some(v) = vs.iter().find(|&&v| v >= n) {
        return Err(Error::input(format!("vertex {v} out of range for n = {n}")));
    }
    Ok(vs)
}

fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Verify { inst, schedule } => {
            let (g, pi) = load(inst)?;
            let s = io::parse_schedule(&read(schedule)?)?;
            let r = verify_schedule(&g, &pi, &s);
            let text = if r.valid { "valid".to_string() } else { format!("invalid: {}", r.reason.clone().unwrap_or_else(|| format!("misplaced pebbles {:?}", r.misplaced))) };
            let json = serde_json::to_value(&r).expect("report serializes");
            Ok(if r.valid { Report::ok(json, text) } else { Report::no(json, text) })
        }
        Command::RtExact { inst, budget, out, timing } => {
            let (g, pi) = load(inst)?;
            let r = routing_time_exact(&g, &pi, budget.budget()?)?;
            emit(&g, &pi, &r.witness, out)?;
            let mut json = json!({ "value": r.value, "witness": steps_json(&r.witness), "states_visited": r.states_visited });
            if *timing {
                json["elapsed"] = json!(r.elapsed.as_secs_f64());
            }
            Ok(Report::ok(json, r.value.to_string()))
        }
        Command::RoutingNumber { graph, budget } => {
            let g = load_graph(graph)?;
            let v = routing_number_exact(&g, budget.budget()?)?;
            Ok(Report::ok(json!({ "routing_number": v }), v.to_string()))
        }
        Command::Rt2 { inst, out } => {
            let (g, pi) = load(inst)?;
            match routable_in(&g, &pi) {
                Some((k, s)) => {
                    emit(&g, &pi, &s, out)?;
                    Ok(Report::ok(json!({ "routable_in": k, "schedule": steps_json(&s) }), k.to_string()))
                }
                None => Ok(Report::no(json!({ "routable_in": null }), "none")),
            }
        }
        Command::RouteTree { inst, root, out } => {
            let (g, pi) = load(inst)?;
            if *root >= g.n() {
                return Err(Error::input(format!("root {root} out of range")));
            }
            let t = RootedTree::new(&g, *root)?;
            let s = route_tree(&t, &pi);
            schedule_report(&g, &pi, &s, out, json!({}))
        }
        Command::RouteHconn { inst, partition, ports, pipelined, budget, out } => {
            let (g, pi) = load(inst)?;
            let part = match (partition, ports) {
                (Some(path), _) => ConnectedPartition::from_lines(&g, io::parse_partition(&read(path)?)?)?,
                (None, Some(list)) => {
                    let ports = vertex_list(list, g.n())?;
                    if ports.is_empty() {
                        return Err(Error::input("need at least one port"));
                    }
                    find_partition(&g, &balanced_sizes(g.n(), ports.len()), &ports, budget.budget()?)?
                }
                (None, None) => return Err(Error::input("give --partition or --ports")),
            };
            let r = route_hconnected(&g, &pi, &part, *pipelined)?;
            let extra = json!({
                "blocks": part.blocks(),
                "port_steps": r.port_steps,
                "phase_lengths": r.phase_lengths,
            });
            schedule_report(&g, &pi, &r.schedule, out, extra)
        }
        Command::RouteKappa { inst, clique, out } => {
            let (g, pi) = load(inst)?;
            let clique = clique.as_deref().map(|c| vertex_list(c, g.n())).transpose()?;
            let r = route_via_clique_contraction(&g, &pi, clique.as_deref())?;
            let extra = json!({ "clique": r.clique, "evacuated": r.evacuated, "planned_steps": r.planned_steps });
            schedule_report(&g, &pi, &r.schedule, out, extra)
        }
        Command::Maxroute { inst, k, mode, seed, budget, out } => {
            let (g, pi) = load(inst)?;
            let mode = match mode {
                MaxMode::Exact => Mode::Exact,
                MaxMode::Greedy => Mode::Greedy { seed: *seed },
            };
            let r = max_routability(&g, &pi, *k, mode, budget.budget()?)?;
            if let Some(path) = &out.schedule_out {
                write(path, &io::format_schedule(&r.schedule))?;
            }
            let json = json!({ "m": r.m, "schedule": steps_json(&r.schedule), "clique_graph_size": r.clique_graph_size });
            Ok(Report::ok(json, r.m.to_string()))
        }
        Command::MaxAgree { inst, k, budget } => {
            let (g, pi) = load(inst)?;
            let m = max_agreements_exact(&g, &pi, *k, budget.budget()?)?;
            Ok(Report::ok(json!({ "max_agreements": m }), m.to_string()))
        }
        Command::ReduceSat { cnf, chain_len, out } => {
            let f = CnfFormula::parse_dimacs(&read(cnf)?)?;
            let inst = build_sat_instance(&f, *chain_len)?;
            let files = [with_suffix(out, ".graph"), with_suffix(out, ".perm"), with_suffix(out, ".provenance.json")];
            write(&files[0], &io::format_graph(&inst.graph))?;
            write(&files[1], &io::format_permutation(&inst.perm))?;
            write(&files[2], &serde_json::to_string_pretty(&inst).expect("instance serializes"))?;
            let json = json!({
                "vertices": inst.graph.n(),
                "edges": inst.graph.m(),
                "chains": inst.chains.len(),
                "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            });
            let text = format!("{} vertices, {} edges", inst.graph.n(), inst.graph.m());
            Ok(Report::ok(json, text))
        }
        Command::ReduceCcpp { cnf, out } => {
            let f = CnfFormula::parse_dimacs(&read(cnf)?)?;
            let inst = build_ccpp_instance(&f);
            let files = [with_suffix(out, ".graph"), with_suffix(out, ".colors"), with_suffix(out, ".provenance.json")];
            write(&files[0], &io::format_graph(&inst.graph))?;
            write(&files[1], &io::format_colors(&inst.colors))?;
            write(&files[2], &serde_json::to_string_pretty(&inst).expect("instance serializes"))?;
            let classes = inst.colors.iter().collect::<std::collections::BTreeSet<_>>().len();
            let json = json!({
                "vertices": inst.graph.n(),
                "edges": inst.graph.m(),
                "colors": classes,
                "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            });
            let text = format!("{} vertices, {} edges, {} colors", inst.graph.n(), inst.graph.m(), classes);
            Ok(Report::ok(json, text))
        }
        Command::CcppSolve { graph, colors, t, budget } => {
            let g = load_graph(graph)?;
            let colors = io::parse_colors(&read(colors)?, g.n())?;
            match ccpp_solve_exact(&g, &colors, *t, budget.budget()?)? {
                Some(blocks) => {
                    let largest = blocks.iter().map(Vec::len).max().unwrap_or(0);
                    let json = json!({ "feasible": true, "largest_block": largest, "blocks": blocks });
                    Ok(Report::ok(json, io::format_partition(&blocks)))
                }
                None => Ok(Report::no(json!({ "feasible": false }), "none")),
            }
        }
        Command::Gen { family, n, a, b, dim, p, seed, out } => {
            let need = |x: Option<usize>, name: &str| match x {
                Some(v) if v >= 1 => Ok(v),
                Some(_) => Err(Error::input(format!("--{name} must be at least 1"))),
                None => Err(Error::input(format!("--{name} is required for this family"))),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let g = match family {
                Family::Path => generate::path(need(*n, "n")?),
                Family::Cycle => match need(*n, "n")? {
                    n if n >= 3 => generate::cycle(n),
                    _ => return Err(Error::input("a cycle needs at least 3 vertices")),
                },
                Family::Star => generate::star(need(*n, "n")?),
                Family::Complete => generate::complete(need(*n, "n")?),
                Family::CompleteBipartite => generate::complete_bipartite(need(*a, "a")?, need(*b, "b")?),
                Family::Hypercube => {
                    let d = dim.ok_or_else(|| Error::input("--dim is required for hypercube"))?;
                    if d > 20 {
                        return Err(Error::input("hypercube dimension above 20"));
                    }
                    generate::hypercube(d)
                }
                Family::RandomTree => generate::random_tree(need(*n, "n")?, &mut rng),
                Family::RandomConnected => {
                    if !(0.0..=1.0).contains(p) {
                        return Err(Error::input("--p must lie in [0, 1]"));
                    }
                    generate::random_connected(need(*n, "n")?, *p, &mut rng)
                }
            };
            let text = io::format_graph(&g);
            if let Some(path) = out {
                write(path, &text)?;
            }
            Ok(Report::ok(json!({ "n": g.n(), "m": g.m(), "edges": g.edges() }), text))
        }
    }
}
