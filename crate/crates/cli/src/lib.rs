//! The `qroute` command line: topology generation, routing, exhaustive
//! verification and benchmark sweeps over the constrained-routing engine.
//!
//! Conventions shared by all subcommands:
//! - deterministic results (status, objectives, paths, CSV) go to stdout;
//!   statistics, warnings and errors go to stderr;
//! - exit codes are a total function of the outcome category: 0 success
//!   (a route was found — possibly a timeout incumbent — or verification
//!   matched, or files were written), 1 error (bad arguments, unreadable or
//!   invalid input, an instance too large to verify exhaustively), 2 no
//!   route (proved unsatisfiable, or verification mismatched), 3 timeout
//!   with nothing to show for it (no incumbent, or verification left
//!   inconclusive).

pub mod files;
pub mod report;

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use qroute_bench::{run_plan, summarize, to_csv, BenchApp, BenchPlan, EndpointPolicy};
use qroute_core::{
    build_model, fat_tree, fat_tree_endpoints, grid, grid_diagonal_endpoints, oracle_enumerate,
    run_app, solve, BranchOrder, FatTreeSpec, Flow, FlowSpec, GridSpec, NetworkGraph, OracleError,
    OracleOutcome, RoutingApp, SolveOutcome, SolveStatus, SolverConfig,
};

pub const EXIT_OK: i32 = 0;
/// Bad arguments, unreadable or invalid input files, or an instance too
/// large for exhaustive verification.
pub const EXIT_ERROR: i32 = 1;
/// The instance was proved to have no solution, or verification found a
/// disagreement.
pub const EXIT_NO_ROUTE: i32 = 2;
/// The time budget ran out before anything could be reported.
pub const EXIT_NO_INCUMBENT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qroute",
    version,
    about = "Constrained-optimal routing over directed flow networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a topology file (and optionally a flow file).
    Gen(GenArgs),
    /// Solve a routing problem and print the routes.
    Route(RouteArgs),
    /// Solve and cross-check against exhaustive enumeration.
    Verify(VerifyArgs),
    /// Run a benchmark sweep and emit CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AppKind {
    /// Least-cost path.
    Lcp,
    /// Least-cost path over links meeting each flow's capacity limit.
    Lccc,
    /// Maximum residual capacity.
    Mrc,
}

impl AppKind {
    fn to_core(self) -> RoutingApp {
        match self {
            AppKind::Lcp => RoutingApp::LeastCostPath,
            AppKind::Lccc => RoutingApp::LeastCostPathCapacity,
            AppKind::Mrc => RoutingApp::MaxResidualCapacity,
        }
    }

    fn to_bench(self) -> BenchApp {
        match self {
            AppKind::Lcp => BenchApp::LeastCostPath,
            AppKind::Lccc => BenchApp::LeastCostPathCapacity,
            AppKind::Mrc => BenchApp::MaxResidualCapacity,
        }
    }
}

impl fmt::Display for AppKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AppKind::Lcp => "lcp",
            AppKind::Lccc => "lccc",
            AppKind::Mrc => "mrc",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchOrderArg {
    /// Extend partial paths outward from each flow's source (default).
    Frontier,
    /// Plain row order.
    Row,
}

impl BranchOrderArg {
    fn to_core(self) -> BranchOrder {
        match self {
            BranchOrderArg::Frontier => BranchOrder::SourceAdjacentFirst,
            BranchOrderArg::Row => BranchOrder::RowOrder,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Labelled lines: status, objective, one line per flow.
    Text,
    /// One self-contained JSON object per flow.
    JsonLines,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub topology: GenTopology,
}

#[derive(Debug, Subcommand)]
pub enum GenTopology {
    /// Square grid with bidirectional nearest-neighbour links.
    Grid {
        /// Side length; the grid has order² nodes.
        #[arg(long)]
        order: u32,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Three-layer fat-tree with hosts under the edge switches.
    FatTree {
        /// Switch arity k (even); gives 5k²/4 switches and k³/4 hosts.
        #[arg(long)]
        arity: u32,
        #[command(flatten)]
        common: GenCommon,
    },
}

#[derive(Debug, Args)]
pub struct GenCommon {
    /// Capacity of every link.
    #[arg(long, default_value_t = 1000)]
    pub capacity: i64,
    /// Cost of every link.
    #[arg(long, default_value_t = 1)]
    pub cost: i64,
    /// Graph file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write a flow file with this many flows between the two
    /// canonical far-apart nodes (grid corners / first and last host).
    #[arg(long)]
    pub flows_out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub flow_count: usize,
    /// Demand of each generated flow.
    #[arg(long, default_value_t = 10)]
    pub demand: i64,
    /// Per-flow capacity limit column for the generated flows.
    #[arg(long)]
    pub limit: Option<i64>,
}

#[derive(Debug, Args)]
pub struct RouteArgs {
    /// Which routing problem to solve.
    #[arg(value_enum)]
    pub app: AppKind,
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub flows: PathBuf,
    /// Wall-clock budget in milliseconds; omitted means run to completion.
    #[arg(long)]
    pub time_limit_ms: Option<u64>,
    #[arg(long, value_enum, default_value_t = BranchOrderArg::Frontier)]
    pub branch_order: BranchOrderArg,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub app: AppKind,
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub flows: PathBuf,
    /// Wall-clock budget for the solver side (the oracle always runs to
    /// completion).
    #[arg(long)]
    pub time_limit_ms: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// CSV output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![AppKind::Lcp, AppKind::Lccc, AppKind::Mrc])]
    pub apps: Vec<AppKind>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![4u32, 6, 8])]
    pub grid_orders: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![2u32, 4])]
    pub fat_tree_arities: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1usize, 2])]
    pub flow_counts: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub repetitions: u32,
    #[arg(long, default_value_t = 10)]
    pub demand: i64,
    #[arg(long, default_value_t = 1000)]
    pub capacity: i64,
    #[arg(long, default_value_t = 1)]
    pub cost: i64,
    /// Per-flow capacity limit used by the lccc app.
    #[arg(long, default_value_t = 10)]
    pub limit: i64,
    /// Per-solve budget in milliseconds.
    #[arg(long, default_value_t = 10_000)]
    pub time_limit_ms: u64,
    /// Remove the per-solve budget entirely.
    #[arg(long)]
    pub no_time_limit: bool,
    /// Draw distinct per-flow endpoints from this seed instead of routing
    /// every flow across the shared diagonal.
    #[arg(long, value_name = "SEED")]
    pub random_endpoints: Option<u64>,
    /// Solve cells concurrently. Per-solve times remain valid; total wall
    /// time drops at the cost of some scheduler noise.
    #[arg(long)]
    pub parallel: bool,
    /// Print per-cell median times to stderr after the CSV.
    #[arg(long)]
    pub summary: bool,
}

/// Executes a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Gen(args) => cmd_gen(&args),
        Command::Route(args) => cmd_route(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Bench(args) => cmd_bench(&args),
    }
}

fn fail(message: impl fmt::Display) -> i32 {
    eprintln!("error: {message}");
    EXIT_ERROR
}

fn load_inputs(graph: &Path, flows: &Path) -> Result<(NetworkGraph, FlowSpec), i32> {
    let graph_text = std::fs::read_to_string(graph)
        .map_err(|e| fail(format_args!("cannot read {}: {e}", graph.display())))?;
    let graph = files::parse_graph(&graph_text)
        .map_err(|e| fail(format_args!("{}: {e}", graph.display())))?;
    let flow_text = std::fs::read_to_string(flows)
        .map_err(|e| fail(format_args!("cannot read {}: {e}", flows.display())))?;
    let flows = files::parse_flows(&flow_text)
        .map_err(|e| fail(format_args!("{}: {e}", flows.display())))?;
    Ok((graph, flows))
}

fn cmd_gen(args: &GenArgs) -> i32 {
    let (graph, endpoints, common) = match &args.topology {
        GenTopology::Grid { order, common } => {
            let spec = GridSpec { order: *order, capacity: common.capacity, cost: common.cost };
            let graph = match grid(&spec) {
                Ok(g) => g,
                Err(e) => return fail(e),
            };
            let endpoints = if common.flows_out.is_some() {
                match grid_diagonal_endpoints(&spec) {
                    Ok(pair) => Some(pair),
                    Err(e) => return fail(e),
                }
            } else {
                None
            };
            (graph, endpoints, common)
        }
        GenTopology::FatTree { arity, common } => {
            let spec = FatTreeSpec { k: *arity, capacity: common.capacity, cost: common.cost };
            let graph = match fat_tree(&spec) {
                Ok((g, _roles)) => g,
                Err(e) => return fail(e),
            };
            let endpoints = if common.flows_out.is_some() {
                match fat_tree_endpoints(&spec) {
                    Ok(pair) => Some(pair),
                    Err(e) => return fail(e),
                }
            } else {
                None
            };
            (graph, endpoints, common)
        }
    };

    if let Err(e) = std::fs::write(&common.out, files::write_graph(&graph)) {
        return fail(format_args!("cannot write {}: {e}", common.out.display()));
    }
    println!(
        "wrote {}: {} nodes, {} links",
        common.out.display(),
        graph.n_nodes(),
        graph.n_links()
    );

    if let Some(flows_out) = &common.flows_out {
        let (source, sink) = endpoints.expect("endpoints computed when flows are requested");
        if common.flow_count == 0 {
            return fail("--flow-count must be at least 1");
        }
        let flow_list = vec![Flow::new(source.0, sink.0, common.demand); common.flow_count];
        let spec = match common.limit {
            Some(limit) => FlowSpec::with_limits(flow_list, vec![limit; common.flow_count]),
            None => FlowSpec::new(flow_list),
        };
        let spec = match spec {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        if let Err(e) = std::fs::write(flows_out, files::write_flows(&spec)) {
            return fail(format_args!("cannot write {}: {e}", flows_out.display()));
        }
        println!("wrote {}: {} flows", flows_out.display(), spec.n_flows());
    }
    EXIT_OK
}

fn cmd_route(args: &RouteArgs) -> i32 {
    let (graph, flows) = match load_inputs(&args.graph, &args.flows) {
        Ok(pair) => pair,
        Err(code) => return code,
    };
    let config = SolverConfig {
        time_limit_ms: args.time_limit_ms,
        branch_order: args.branch_order.to_core(),
    };
    let result = match run_app(args.app.to_core(), &graph, &flows, &config) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    match args.format {
        OutputFormat::Text => print!("{}", report::render_text(&result)),
        OutputFormat::JsonLines => print!("{}", report::render_json_lines(&result)),
    }
    eprint!("{}", report::render_stats(&result));
    match result.status {
        SolveStatus::Optimal | SolveStatus::Satisfiable => EXIT_OK,
        SolveStatus::Unsatisfiable => EXIT_NO_ROUTE,
        // A timeout still counts as a found route if an incumbent exists.
        SolveStatus::Timeout if result.paths.is_some() => EXIT_OK,
        SolveStatus::Timeout => EXIT_NO_INCUMBENT,
    }
}

fn solver_line(outcome: &SolveOutcome) -> String {
    match &outcome.objective_value {
        Some(objective) => {
            format!("solver: {}, objective {}", report::status_name(outcome.status), objective)
        }
        None => format!("solver: {}", report::status_name(outcome.status)),
    }
}

fn oracle_line(oracle: &OracleOutcome) -> String {
    let best = oracle
        .best
        .as_ref()
        .and_then(|b| b.objective_value.as_ref())
        .map(|o| format!(", best objective {o}"))
        .unwrap_or_default();
    format!("oracle: {} satisfying assignments{best}", oracle.satisfying_count)
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let (graph, flows) = match load_inputs(&args.graph, &args.flows) {
        Ok(pair) => pair,
        Err(code) => return code,
    };
    let model = match build_model(args.app.to_core(), &graph, &flows) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    let config = SolverConfig { time_limit_ms: args.time_limit_ms, ..SolverConfig::default() };
    let outcome = match solve(&model, &config) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    println!("{}", solver_line(&outcome));

    let oracle = match oracle_enumerate(&model) {
        Ok(o) => o,
        Err(OracleError::TooLarge { bits, max }) => {
            println!(
                "oracle: skipped, {bits} membership bits exceed the enumeration limit of {max}"
            );
            println!("verdict: INCONCLUSIVE");
            return EXIT_ERROR;
        }
        Err(e) => return fail(e),
    };
    println!("{}", oracle_line(&oracle));

    if outcome.status == SolveStatus::Timeout {
        println!("verdict: INCONCLUSIVE");
        return EXIT_NO_INCUMBENT;
    }
    let agree = match outcome.status {
        SolveStatus::Unsatisfiable => oracle.satisfying_count == 0,
        SolveStatus::Satisfiable => oracle.satisfying_count > 0,
        SolveStatus::Optimal => {
            oracle.satisfying_count > 0
                && outcome.objective_value == oracle.best.as_ref().and_then(|b| b.objective_value)
        }
        SolveStatus::Timeout => unreachable!("handled above"),
    };
    if agree {
        println!("verdict: MATCH");
        EXIT_OK
    } else {
        println!("verdict: MISMATCH");
        EXIT_NO_ROUTE
    }
}

fn cmd_bench(args: &BenchArgs) -> i32 {
    let plan = BenchPlan {
        apps: args.apps.iter().map(|a| a.to_bench()).collect(),
        grid_orders: args.grid_orders.clone(),
        fat_tree_arities: args.fat_tree_arities.clone(),
        flow_counts: args.flow_counts.clone(),
        repetitions: args.repetitions,
        demand: args.demand,
        capacity: args.capacity,
        cost: args.cost,
        limit: args.limit,
        time_limit_ms: if args.no_time_limit { None } else { Some(args.time_limit_ms) },
        endpoints: match args.random_endpoints {
            Some(seed) => EndpointPolicy::Random { seed },
            None => EndpointPolicy::SharedDiagonal,
        },
        parallel: args.parallel,
    };
    let records = match run_plan(&plan) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let csv = to_csv(&records);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &csv) {
                return fail(format_args!("cannot write {}: {e}", path.display()));
            }
            eprintln!("wrote {}: {} records", path.display(), records.len());
        }
        None => print!("{csv}"),
    }
    if args.summary {
        for cell in summarize(&records) {
            let median = match cell.median_solve_time_ms {
                Some(ms) => format!("median {ms} ms"),
                None => "median n/a".to_string(),
            };
            eprintln!(
                "{} {} nodes={} flows={}: {} ({} completed, {} timeouts)",
                cell.app,
                cell.topology,
                cell.n_nodes,
                cell.n_flows,
                median,
                cell.completed,
                cell.timeouts
            );
        }
    }
    EXIT_OK
}
