//! Desk-scale benchmark harness: runs the routing applications across
//! parameterized topology sweeps, checks closed-form canary objectives, and
//! renders records as CSV or per-cell summaries.

use std::fmt;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use qroute_core::{
    fat_tree, fat_tree_endpoints, grid, grid_diagonal_endpoints, least_cost_path,
    least_cost_path_capacity, max_residual_capacity, AppError, FatTreeSpec, Flow, FlowSpec,
    GridSpec, ModelError, NetworkGraph, NodeId, NodeRole, Rational, RouteResult, SolveStatus,
    SolverConfig, TopologyError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchApp {
    LeastCostPath,
    LeastCostPathCapacity,
    MaxResidualCapacity,
}

impl BenchApp {
    pub const ALL: [BenchApp; 3] =
        [BenchApp::LeastCostPath, BenchApp::LeastCostPathCapacity, BenchApp::MaxResidualCapacity];
}

impl fmt::Display for BenchApp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchApp::LeastCostPath => "lcp",
            BenchApp::LeastCostPathCapacity => "lccc",
            BenchApp::MaxResidualCapacity => "mrc",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchTopology {
    Grid,
    FatTree,
}

impl fmt::Display for BenchTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchTopology::Grid => "grid",
            BenchTopology::FatTree => "fat-tree",
        })
    }
}

/// How flow endpoints are chosen within each topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointPolicy {
    /// Every flow runs between the two canonical far-apart nodes (grid
    /// corners, first and last fat-tree host). The default; it makes the
    /// canary objectives predictable.
    SharedDiagonal,
    /// Distinct per-flow endpoints drawn from a seeded generator (hosts
    /// only, on fat-trees). Reproducible for a given seed.
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchPlan {
    pub apps: Vec<BenchApp>,
    /// Grid side lengths to sweep (each yields an order×order grid).
    pub grid_orders: Vec<u32>,
    /// Fat-tree arities to sweep (must be even).
    pub fat_tree_arities: Vec<u32>,
    pub flow_counts: Vec<usize>,
    /// Timed repetitions per cell; the solver is deterministic, so these
    /// only measure wall-clock noise.
    pub repetitions: u32,
    pub demand: i64,
    pub capacity: i64,
    pub cost: i64,
    /// Per-flow capacity limit used by the capacity-constrained app.
    pub limit: i64,
    pub time_limit_ms: Option<u64>,
    pub endpoints: EndpointPolicy,
    /// Run cells concurrently (one thread per app/flow-count/topology
    /// combination). Off by default: sequential runs keep wall-clock noise
    /// down. Per-solve times stay valid either way — each solve is timed
    /// inside the solver — and record order is identical in both modes.
    pub parallel: bool,
}

impl Default for BenchPlan {
    fn default() -> BenchPlan {
        BenchPlan {
            apps: BenchApp::ALL.to_vec(),
            grid_orders: vec![4, 6, 8],
            fat_tree_arities: vec![2, 4],
            flow_counts: vec![1, 2],
            repetitions: 5,
            demand: 10,
            capacity: 1000,
            cost: 1,
            limit: 10,
            time_limit_ms: Some(10_000),
            endpoints: EndpointPolicy::SharedDiagonal,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub app: BenchApp,
    pub topology: BenchTopology,
    pub n_nodes: usize,
    pub n_links: usize,
    pub n_flows: usize,
    pub repetition: u32,
    pub status: SolveStatus,
    pub objective: Option<Rational>,
    pub solve_time_ms: u64,
    pub nodes_explored: u64,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("benchmark plan has no {0}")]
    EmptyPlan(&'static str),
    #[error("repetitions must be at least 1")]
    NoRepetitions,
    #[error("flow count must be at least 1")]
    ZeroFlows,
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    App(#[from] AppError),
    #[error(
        "canary violated for {app} on {topology} ({n_nodes} nodes, {n_flows} flows): \
         expected objective {expected}, solver reported {got}"
    )]
    CanaryViolation {
        app: BenchApp,
        topology: BenchTopology,
        n_nodes: usize,
        n_flows: usize,
        expected: Rational,
        got: Rational,
    },
}

/// Closed-form optimal objective for cells where one is known:
/// least-cost-path on a grid with shared diagonal endpoints costs
/// 2·(order−1)·cost per flow, and single-flow max-residual-capacity always
/// attains capacity − demand.
pub fn expected_objective(
    app: BenchApp,
    topology: BenchTopology,
    order: u32,
    n_flows: usize,
    plan: &BenchPlan,
) -> Option<Rational> {
    if plan.endpoints != EndpointPolicy::SharedDiagonal {
        return None;
    }
    match (app, topology) {
        (BenchApp::LeastCostPath, BenchTopology::Grid) => {
            let per_flow = 2 * i64::from(order - 1) * plan.cost;
            Some(Rational::from_int(per_flow * n_flows as i64))
        }
        (BenchApp::MaxResidualCapacity, _) if n_flows == 1 => {
            Some(Rational::from_int(plan.capacity - plan.demand))
        }
        _ => None,
    }
}

struct Cell {
    topology: BenchTopology,
    order: u32,
    graph: NetworkGraph,
    endpoints: (NodeId, NodeId),
    /// Node pool for random endpoint draws (hosts on fat-trees).
    pool: Vec<NodeId>,
}

fn build_cells(plan: &BenchPlan) -> Result<Vec<Cell>, BenchError> {
    let mut cells = Vec::new();
    for &order in &plan.grid_orders {
        let spec = GridSpec { order, capacity: plan.capacity, cost: plan.cost };
        let graph = grid(&spec)?;
        let endpoints = grid_diagonal_endpoints(&spec)?;
        let pool = (1..=graph.n_nodes()).map(NodeId).collect();
        cells.push(Cell { topology: BenchTopology::Grid, order, graph, endpoints, pool });
    }
    for &k in &plan.fat_tree_arities {
        let spec = FatTreeSpec { k, capacity: plan.capacity, cost: plan.cost };
        let (graph, roles) = fat_tree(&spec)?;
        let endpoints = fat_tree_endpoints(&spec)?;
        let pool = roles
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == NodeRole::Host)
            .map(|(i, _)| NodeId(i as u32 + 1))
            .collect();
        cells.push(Cell { topology: BenchTopology::FatTree, order: k, graph, endpoints, pool });
    }
    Ok(cells)
}

fn cell_flows(
    plan: &BenchPlan,
    cell: &Cell,
    n_flows: usize,
    for_capacity_app: bool,
) -> Result<FlowSpec, BenchError> {
    let mut flows = Vec::with_capacity(n_flows);
    match plan.endpoints {
        EndpointPolicy::SharedDiagonal => {
            let (s, d) = cell.endpoints;
            for _ in 0..n_flows {
                flows.push(Flow::new(s.0, d.0, plan.demand));
            }
        }
        EndpointPolicy::Random { seed } => {
            // Seed per cell so cells are independent of sweep order.
            let cell_seed = seed
                ^ (cell.order as u64) << 32
                ^ match cell.topology {
                    BenchTopology::Grid => 0,
                    BenchTopology::FatTree => 1 << 16,
                }
                ^ n_flows as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(cell_seed);
            for _ in 0..n_flows {
                loop {
                    let s = cell.pool[rng.gen_range(0..cell.pool.len())];
                    let d = cell.pool[rng.gen_range(0..cell.pool.len())];
                    if s != d {
                        flows.push(Flow::new(s.0, d.0, plan.demand));
                        break;
                    }
                }
            }
        }
    }
    Ok(if for_capacity_app {
        FlowSpec::with_limits(flows, vec![plan.limit; n_flows])?
    } else {
        FlowSpec::new(flows)?
    })
}

fn run_app(
    app: BenchApp,
    graph: &NetworkGraph,
    flows: &FlowSpec,
    config: &SolverConfig,
) -> Result<RouteResult, AppError> {
    match app {
        BenchApp::LeastCostPath => least_cost_path(graph, flows, config),
        BenchApp::LeastCostPathCapacity => least_cost_path_capacity(graph, flows, config),
        BenchApp::MaxResidualCapacity => max_residual_capacity(graph, flows, config),
    }
}

/// One (topology cell, flow count, app) combination with its inputs built.
struct WorkUnit<'a> {
    cell: &'a Cell,
    n_flows: usize,
    app: BenchApp,
    flows: FlowSpec,
    canary: Option<Rational>,
}

fn run_unit(
    unit: &WorkUnit<'_>,
    repetitions: u32,
    config: &SolverConfig,
) -> Result<Vec<BenchRecord>, BenchError> {
    let mut records = Vec::with_capacity(repetitions as usize);
    for repetition in 1..=repetitions {
        let result = run_app(unit.app, &unit.cell.graph, &unit.flows, config)?;
        if result.status == SolveStatus::Optimal {
            if let (Some(expected), Some(got)) = (unit.canary, result.objective_value) {
                if expected != got {
                    return Err(BenchError::CanaryViolation {
                        app: unit.app,
                        topology: unit.cell.topology,
                        n_nodes: unit.cell.graph.n_nodes() as usize,
                        n_flows: unit.n_flows,
                        expected,
                        got,
                    });
                }
            }
        }
        records.push(BenchRecord {
            app: unit.app,
            topology: unit.cell.topology,
            n_nodes: unit.cell.graph.n_nodes() as usize,
            n_links: unit.cell.graph.n_links(),
            n_flows: unit.n_flows,
            repetition,
            status: result.status,
            objective: result.objective_value,
            solve_time_ms: result.stats.wall_time_ms,
            nodes_explored: result.stats.nodes_explored,
        });
    }
    Ok(records)
}

/// Runs the full sweep. Each cell is solved `repetitions` times; canary
/// cells must report their closed-form optimum or the run aborts.
pub fn run_plan(plan: &BenchPlan) -> Result<Vec<BenchRecord>, BenchError> {
    if plan.apps.is_empty() {
        return Err(BenchError::EmptyPlan("apps"));
    }
    if plan.grid_orders.is_empty() && plan.fat_tree_arities.is_empty() {
        return Err(BenchError::EmptyPlan("topologies"));
    }
    if plan.flow_counts.is_empty() {
        return Err(BenchError::EmptyPlan("flow counts"));
    }
    if plan.repetitions == 0 {
        return Err(BenchError::NoRepetitions);
    }
    if plan.flow_counts.contains(&0) {
        return Err(BenchError::ZeroFlows);
    }

    let cells = build_cells(plan)?;
    let config = SolverConfig { time_limit_ms: plan.time_limit_ms, ..SolverConfig::default() };
    let mut units = Vec::new();
    for cell in &cells {
        for &n_flows in &plan.flow_counts {
            for &app in &plan.apps {
                units.push(WorkUnit {
                    cell,
                    n_flows,
                    app,
                    flows: cell_flows(plan, cell, n_flows, app == BenchApp::LeastCostPathCapacity)?,
                    canary: expected_objective(app, cell.topology, cell.order, n_flows, plan),
                });
            }
        }
    }

    // Records are reassembled in unit order, so both modes produce the
    // same sequence (up to wall-clock readings).
    let outcomes: Vec<Result<Vec<BenchRecord>, BenchError>> = if plan.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = units
                .iter()
                .map(|unit| scope.spawn(move || run_unit(unit, plan.repetitions, &config)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("benchmark thread panicked")).collect()
        })
    } else {
        units.iter().map(|unit| run_unit(unit, plan.repetitions, &config)).collect()
    };

    let mut records = Vec::new();
    for outcome in outcomes {
        records.extend(outcome?);
    }
    Ok(records)
}

pub const CSV_HEADER: &str =
    "app,topology,n_nodes,n_links,n_flows,repetition,status,objective,solve_time_ms,nodes_explored";

fn status_name(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Satisfiable => "satisfiable",
        SolveStatus::Unsatisfiable => "unsatisfiable",
        SolveStatus::Timeout => "timeout",
    }
}

/// Writes records as CSV, header first. No field needs quoting.
pub fn write_csv<W: Write>(records: &[BenchRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        let objective = r.objective.map(|o| o.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.app,
            r.topology,
            r.n_nodes,
            r.n_links,
            r.n_flows,
            r.repetition,
            status_name(r.status),
            objective,
            r.solve_time_ms,
            r.nodes_explored
        )?;
    }
    Ok(())
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is ascii")
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub app: BenchApp,
    pub topology: BenchTopology,
    pub n_nodes: usize,
    pub n_flows: usize,
    /// Median wall time across completed (non-timeout) repetitions.
    pub median_solve_time_ms: Option<f64>,
    pub completed: usize,
    pub timeouts: usize,
}

/// Per-cell medians in first-appearance order; timeout repetitions are
/// excluded from the median but counted.
pub fn summarize(records: &[BenchRecord]) -> Vec<BenchSummary> {
    let mut cells: Vec<(BenchApp, BenchTopology, usize, usize)> = Vec::new();
    for r in records {
        let key = (r.app, r.topology, r.n_nodes, r.n_flows);
        if !cells.contains(&key) {
            cells.push(key);
        }
    }
    cells
        .into_iter()
        .map(|(app, topology, n_nodes, n_flows)| {
            let mut times: Vec<u64> = Vec::new();
            let mut timeouts = 0usize;
            for r in records {
                if (r.app, r.topology, r.n_nodes, r.n_flows) != (app, topology, n_nodes, n_flows) {
                    continue;
                }
                if r.status == SolveStatus::Timeout {
                    timeouts += 1;
                } else {
                    times.push(r.solve_time_ms);
                }
            }
            times.sort_unstable();
            let median = if times.is_empty() {
                None
            } else if times.len() % 2 == 1 {
                Some(times[times.len() / 2] as f64)
            } else {
                let hi = times.len() / 2;
                Some((times[hi - 1] + times[hi]) as f64 / 2.0)
            };
            BenchSummary {
                app,
                topology,
                n_nodes,
                n_flows,
                median_solve_time_ms: median,
                completed: times.len(),
                timeouts,
            }
        })
        .collect()
}
