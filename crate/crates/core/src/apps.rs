//! Routing applications built on the constraint model and solver.
//!
//! Each application assembles the appropriate predicates over a graph and a
//! flow specification, solves, and decodes the membership matrix into one
//! node path per flow. Solutions may legitimately contain arc-disjoint
//! cycles alongside each flow's path (they satisfy flow conservation);
//! extraction drops them and reports a warning rather than failing.

use thiserror::Error;

use crate::graph::{LinkId, NetworkGraph, NodeId};
use crate::model::{ConstraintModel, Family, FlowSpec, ModelError, ObjectiveExpr, Sense};
use crate::rational::Rational;
use crate::solver::{solve, SolveError, SolveStats, SolveStatus, SolverConfig};

/// A decoded route: `nodes` from source to sink, `links` the arcs between
/// consecutive nodes, `cost` their summed link costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutePath {
    pub nodes: Vec<NodeId>,
    pub links: Vec<LinkId>,
    pub cost: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RouteWarning {
    /// Flow `flow` (1-based) carried arc-disjoint cycles that were dropped
    /// during path extraction.
    CycleDiscarded { flow: usize },
}

impl std::fmt::Display for RouteWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RouteWarning::CycleDiscarded { flow } => {
                write!(f, "flow {flow}: discarded arc-disjoint cycle(s) not on the path")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteResult {
    pub status: SolveStatus,
    pub objective_value: Option<Rational>,
    /// One path per flow when a solution (including a timeout incumbent)
    /// exists.
    pub paths: Option<Vec<RoutePath>>,
    pub warnings: Vec<RouteWarning>,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("membership covers {got} links, the graph has {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("membership is not flow-conserving at node {node}: divergence {divergence}, expected {expected}")]
    NotConserving { node: NodeId, divergence: i64, expected: i64 },
    #[error("path walk stuck at node {node} before reaching the sink")]
    Stuck { node: NodeId },
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error("at least one flow is required")]
    NoFlows,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
}

/// Decodes one flow's membership column into a source-to-sink path.
///
/// The column must be flow-conserving. The walk follows used arcs from the
/// source, excising any loop it closes and consuming each arc at most once;
/// conservation guarantees it reaches the sink. Returns the path and whether
/// any used arcs (excised or detached cycles) were left off it.
pub fn extract_path(
    graph: &NetworkGraph,
    used: &[bool],
    source: NodeId,
    sink: NodeId,
) -> Result<(RoutePath, bool), ExtractError> {
    if used.len() != graph.n_links() {
        return Err(ExtractError::LengthMismatch { got: used.len(), expected: graph.n_links() });
    }
    for node in 1..=graph.n_nodes() {
        let node = NodeId(node);
        let out: i64 = graph.out_links(node).iter().filter(|&&l| used[l as usize]).count() as i64;
        let inn: i64 = graph.in_links(node).iter().filter(|&&l| used[l as usize]).count() as i64;
        let expected = if node == source {
            1
        } else if node == sink {
            -1
        } else {
            0
        };
        if out - inn != expected {
            return Err(ExtractError::NotConserving { node, divergence: out - inn, expected });
        }
    }

    let mut consumed = vec![false; graph.n_links()];
    let mut nodes = vec![source];
    let mut links: Vec<LinkId> = Vec::new();
    let mut cur = source;
    while cur != sink {
        let next = graph
            .out_links(cur)
            .iter()
            .copied()
            .find(|&l| used[l as usize] && !consumed[l as usize]);
        let l = match next {
            Some(l) => l,
            // Unreachable for conserving columns; kept as a defensive error.
            None => return Err(ExtractError::Stuck { node: cur }),
        };
        consumed[l as usize] = true;
        let end = graph.links()[l as usize].end;
        if let Some(pos) = nodes.iter().position(|&n| n == end) {
            // Closed a loop back onto the walk: drop the loop portion.
            nodes.truncate(pos + 1);
            links.truncate(pos);
        } else {
            nodes.push(end);
            links.push(LinkId(l + 1));
        }
        cur = end;
    }
    let used_count = used.iter().filter(|&&u| u).count();
    let dropped = used_count != links.len();
    let cost = links.iter().map(|l| graph.link(*l).cost).sum();
    Ok((RoutePath { nodes, links, cost }, dropped))
}

/// The ready-made routing problems, named for dispatch (CLI, benchmarks).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoutingApp {
    LeastCostPath,
    LeastCostPathCapacity,
    MaxResidualCapacity,
}

/// Assembles the constraint model that [`run_app`] solves for `app`,
/// without solving it. Useful for inspecting constraints or handing the
/// exact same model to the enumeration oracle.
pub fn build_model(
    app: RoutingApp,
    graph: &NetworkGraph,
    flows: &FlowSpec,
) -> Result<ConstraintModel, AppError> {
    let mut model = new_model(graph, flows)?;
    model.network_path()?;
    match app {
        RoutingApp::LeastCostPath => {
            model.path_cost()?;
            model.set_objective(Sense::Minimize, cost_objective(flows))?;
        }
        RoutingApp::LeastCostPathCapacity => {
            model.path_capacity_constraint()?;
            model.path_cost()?;
            model.set_objective(Sense::Minimize, cost_objective(flows))?;
        }
        RoutingApp::MaxResidualCapacity => {
            model.require_residuals_nonnegative()?;
            model.set_objective(Sense::Maximize, ObjectiveExpr::Min(Family::Residuals))?;
        }
    }
    Ok(model)
}

/// Builds and solves the model for `app`, decoding one path per flow.
pub fn run_app(
    app: RoutingApp,
    graph: &NetworkGraph,
    flows: &FlowSpec,
    config: &SolverConfig,
) -> Result<RouteResult, AppError> {
    run(build_model(app, graph, flows)?, config)
}

/// Cheapest route per flow by total link cost; capacities are ignored.
pub fn least_cost_path(
    graph: &NetworkGraph,
    flows: &FlowSpec,
    config: &SolverConfig,
) -> Result<RouteResult, AppError> {
    run_app(RoutingApp::LeastCostPath, graph, flows, config)
}

/// Cheapest route per flow over links whose capacity meets the flow's
/// limit; a limit of zero leaves that flow unrestricted.
pub fn least_cost_path_capacity(
    graph: &NetworkGraph,
    flows: &FlowSpec,
    config: &SolverConfig,
) -> Result<RouteResult, AppError> {
    run_app(RoutingApp::LeastCostPathCapacity, graph, flows, config)
}

/// Routes maximizing the smallest residual capacity across all links, with
/// every residual required to stay non-negative.
pub fn max_residual_capacity(
    graph: &NetworkGraph,
    flows: &FlowSpec,
    config: &SolverConfig,
) -> Result<RouteResult, AppError> {
    run_app(RoutingApp::MaxResidualCapacity, graph, flows, config)
}

fn new_model(graph: &NetworkGraph, flows: &FlowSpec) -> Result<ConstraintModel, AppError> {
    if flows.n_flows() == 0 {
        return Err(AppError::NoFlows);
    }
    Ok(ConstraintModel::new(graph.clone(), flows.clone())?)
}

fn cost_objective(flows: &FlowSpec) -> ObjectiveExpr {
    if flows.n_flows() == 1 {
        ObjectiveExpr::Var(Family::Cost, 1)
    } else {
        ObjectiveExpr::Sum(Family::Cost)
    }
}

fn run(model: ConstraintModel, config: &SolverConfig) -> Result<RouteResult, AppError> {
    let outcome = solve(&model, config)?;
    let mut warnings = Vec::new();
    let paths = match &outcome.lfm {
        Some(lfm) => {
            let mut paths = Vec::with_capacity(model.n_flows());
            for (j, flow) in model.flow_spec().flows().iter().enumerate() {
                let used: Vec<bool> = (0..model.n_links()).map(|l| lfm.get(l, j)).collect();
                let (path, dropped) = extract_path(model.graph(), &used, flow.source, flow.sink)?;
                if dropped {
                    warnings.push(RouteWarning::CycleDiscarded { flow: j + 1 });
                }
                paths.push(path);
            }
            Some(paths)
        }
        None => None,
    };
    Ok(RouteResult {
        status: outcome.status,
        objective_value: outcome.objective_value,
        paths,
        warnings,
        stats: outcome.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Flow;
    use crate::topology::{grid, GridSpec};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Test-side Dijkstra over link costs, independent of the solver.
    fn dijkstra_cost(graph: &NetworkGraph, source: NodeId, sink: NodeId) -> Option<i64> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let n = graph.n_nodes() as usize;
        let mut dist = vec![i64::MAX; n];
        dist[source.index()] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0i64, source.0)));
        while let Some(Reverse((d, node))) = heap.pop() {
            let node = NodeId(node);
            if d > dist[node.index()] {
                continue;
            }
            for &l in graph.out_links(node) {
                let link = &graph.links()[l as usize];
                let cand = d + link.cost;
                if cand < dist[link.end.index()] {
                    dist[link.end.index()] = cand;
                    heap.push(Reverse((cand, link.end.0)));
                }
            }
        }
        (dist[sink.index()] != i64::MAX).then_some(dist[sink.index()])
    }

    fn unit_flows(source: u32, sink: u32) -> FlowSpec {
        FlowSpec::new(vec![Flow::new(source, sink, 10)]).unwrap()
    }

    #[test]
    fn grid_corner_to_corner_costs_match_dijkstra() {
        for order in [2u32, 6] {
            let g = grid(&GridSpec { order, capacity: 1000, cost: 1 }).unwrap();
            let sink = order * order;
            let result =
                least_cost_path(&g, &unit_flows(1, sink), &SolverConfig::default()).unwrap();
            assert_eq!(result.status, SolveStatus::Optimal);
            let expected = 2 * i64::from(order - 1);
            assert_eq!(result.objective_value, Some(Rational::from_int(expected)));
            assert_eq!(dijkstra_cost(&g, NodeId(1), NodeId(sink)), Some(expected));
            let paths = result.paths.unwrap();
            assert_eq!(paths.len(), 1);
            let path = &paths[0];
            assert_eq!(path.nodes.first(), Some(&NodeId(1)));
            assert_eq!(path.nodes.last(), Some(&NodeId(sink)));
            assert_eq!(path.cost, expected);
            assert_eq!(path.links.len(), path.nodes.len() - 1);
            assert!(result.warnings.is_empty());
        }
    }

    #[test]
    fn capacity_limit_filters_the_cheap_route() {
        // Chain 1-2-3 costs 2 but its links hold only 5 units; the direct
        // arc costs 9 and holds 100.
        let g = NetworkGraph::from_undirected(3, &[(1, 2, 5, 1), (2, 3, 5, 1), (1, 3, 100, 9)])
            .unwrap();
        let unrestricted = FlowSpec::with_limits(vec![Flow::new(1, 3, 10)], vec![0]).unwrap();
        let result = least_cost_path_capacity(&g, &unrestricted, &SolverConfig::default()).unwrap();
        assert_eq!(result.objective_value, Some(Rational::from_int(2)));

        let limited = FlowSpec::with_limits(vec![Flow::new(1, 3, 10)], vec![10]).unwrap();
        let result = least_cost_path_capacity(&g, &limited, &SolverConfig::default()).unwrap();
        assert_eq!(result.status, SolveStatus::Optimal);
        assert_eq!(result.objective_value, Some(Rational::from_int(9)));
        let path = &result.paths.unwrap()[0];
        assert_eq!(path.nodes, vec![NodeId(1), NodeId(3)]);
    }

    #[test]
    fn infeasible_limit_is_unsatisfiable() {
        let g = NetworkGraph::from_undirected(2, &[(1, 2, 5, 1)]).unwrap();
        let flows = FlowSpec::with_limits(vec![Flow::new(1, 2, 10)], vec![10]).unwrap();
        let result = least_cost_path_capacity(&g, &flows, &SolverConfig::default()).unwrap();
        assert_eq!(result.status, SolveStatus::Unsatisfiable);
        assert!(result.paths.is_none());
        assert!(result.objective_value.is_none());
    }

    #[test]
    fn diamond_flows_take_disjoint_routes() {
        // Two routes 1-2-4 and 1-3-4; two flows of 10 must split to keep
        // the smallest residual at 990.
        let g = NetworkGraph::from_undirected(
            4,
            &[(1, 2, 1000, 1), (1, 3, 1000, 1), (2, 4, 1000, 1), (3, 4, 1000, 1)],
        )
        .unwrap();
        let flows = FlowSpec::new(vec![Flow::new(1, 4, 10), Flow::new(1, 4, 10)]).unwrap();
        let result = max_residual_capacity(&g, &flows, &SolverConfig::default()).unwrap();
        assert_eq!(result.status, SolveStatus::Optimal);
        assert_eq!(result.objective_value, Some(Rational::from_int(990)));
        let paths = result.paths.unwrap();
        let middles: Vec<NodeId> = paths.iter().map(|p| p.nodes[1]).collect();
        assert_ne!(middles[0], middles[1], "routes must not share a middle node");
    }

    #[test]
    fn no_flows_is_rejected() {
        let g = NetworkGraph::from_undirected(2, &[(1, 2, 5, 1)]).unwrap();
        let flows = FlowSpec::new(vec![]).unwrap();
        assert!(matches!(
            least_cost_path(&g, &flows, &SolverConfig::default()),
            Err(AppError::NoFlows)
        ));
    }

    #[test]
    fn extraction_drops_detached_cycles() {
        // Used arcs: the path 1->3 plus the detached cycle 2->4->2.
        let g = NetworkGraph::new(
            4,
            vec![
                crate::graph::Link::new(1, 3, 10, 1),
                crate::graph::Link::new(2, 4, 10, 1),
                crate::graph::Link::new(4, 2, 10, 1),
            ],
        )
        .unwrap();
        let used = vec![true, true, true];
        let (path, dropped) = extract_path(&g, &used, NodeId(1), NodeId(3)).unwrap();
        assert!(dropped);
        assert_eq!(path.nodes, vec![NodeId(1), NodeId(3)]);
        assert_eq!(path.cost, 1);
    }

    #[test]
    fn extraction_excises_loops_through_the_walk() {
        // Arcs (1,2), (2,1), (1,3): the walk visits 2, returns to 1, and
        // the loop is excised before continuing to 3.
        let g = NetworkGraph::new(
            3,
            vec![
                crate::graph::Link::new(1, 2, 10, 1),
                crate::graph::Link::new(1, 3, 10, 5),
                crate::graph::Link::new(2, 1, 10, 1),
            ],
        )
        .unwrap();
        let used = vec![true, true, true];
        let (path, dropped) = extract_path(&g, &used, NodeId(1), NodeId(3)).unwrap();
        assert!(dropped);
        assert_eq!(path.nodes, vec![NodeId(1), NodeId(3)]);
        assert_eq!(path.cost, 5);
    }

    #[test]
    fn non_conserving_membership_is_rejected() {
        let g = NetworkGraph::new(
            3,
            vec![crate::graph::Link::new(1, 2, 10, 1), crate::graph::Link::new(2, 3, 10, 1)],
        )
        .unwrap();
        // Only the arc 2->3 is used; node 1 has divergence 0, not +1.
        let used = vec![false, true];
        match extract_path(&g, &used, NodeId(1), NodeId(3)) {
            Err(ExtractError::NotConserving { node, divergence, expected }) => {
                assert_eq!(node, NodeId(1));
                assert_eq!(divergence, 0);
                assert_eq!(expected, 1);
            }
            other => panic!("expected NotConserving, got {other:?}"),
        }
    }

    #[test]
    fn wrong_membership_length_is_rejected() {
        let g = NetworkGraph::new(2, vec![crate::graph::Link::new(1, 2, 10, 1)]).unwrap();
        match extract_path(&g, &[true, false], NodeId(1), NodeId(2)) {
            Err(ExtractError::LengthMismatch { got, expected }) => {
                assert_eq!((got, expected), (2, 1));
            }
            other => panic!("expected LengthMismatch, got {other:?}"),
        }
    }

    #[test]
    fn unlimited_capacity_route_equals_plain_least_cost() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let n_nodes = rng.gen_range(3..=6u32);
            let mut edges = Vec::new();
            for v in 2..=n_nodes {
                let u = rng.gen_range(1..v);
                edges.push((u, v, rng.gen_range(1..=50i64), rng.gen_range(1..=9i64)));
            }
            let g = NetworkGraph::from_undirected(n_nodes, &edges).unwrap();
            let plain = FlowSpec::new(vec![Flow::new(1, n_nodes, 10)]).unwrap();
            let unlimited =
                FlowSpec::with_limits(vec![Flow::new(1, n_nodes, 10)], vec![0]).unwrap();
            let a = least_cost_path(&g, &plain, &SolverConfig::default()).unwrap();
            let b = least_cost_path_capacity(&g, &unlimited, &SolverConfig::default()).unwrap();
            assert_eq!(a.status, b.status);
            assert_eq!(a.objective_value, b.objective_value);
        }
    }

    /// All simple paths between two nodes, as link-index sets.
    fn simple_paths(graph: &NetworkGraph, source: NodeId, sink: NodeId) -> Vec<Vec<usize>> {
        fn go(
            graph: &NetworkGraph,
            cur: NodeId,
            sink: NodeId,
            visited: &mut Vec<bool>,
            trail: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if cur == sink {
                out.push(trail.clone());
                return;
            }
            for &l in graph.out_links(cur) {
                let end = graph.links()[l as usize].end;
                if !visited[end.index()] {
                    visited[end.index()] = true;
                    trail.push(l as usize);
                    go(graph, end, sink, visited, trail, out);
                    trail.pop();
                    visited[end.index()] = false;
                }
            }
        }
        let mut visited = vec![false; graph.n_nodes() as usize];
        visited[source.index()] = true;
        let mut out = Vec::new();
        go(graph, source, sink, &mut visited, &mut Vec::new(), &mut out);
        out
    }

    /// Brute-force best min-residual over tuples of simple paths. Cycles
    /// never help this objective (they only consume extra capacity), so
    /// simple paths suffice as a reference.
    fn brute_force_mrc(graph: &NetworkGraph, flows: &FlowSpec) -> Option<i64> {
        let per_flow: Vec<Vec<Vec<usize>>> =
            flows.flows().iter().map(|f| simple_paths(graph, f.source, f.sink)).collect();
        if per_flow.iter().any(|p| p.is_empty()) {
            return None;
        }
        let max_cap = graph.links().iter().map(|l| l.capacity).max().unwrap_or(0);
        let sentinel = max_cap + 1;
        let mut best: Option<i64> = None;
        let mut pick = vec![0usize; per_flow.len()];
        loop {
            let mut load = vec![0i64; graph.n_links()];
            for (j, &p) in pick.iter().enumerate() {
                for &l in &per_flow[j][p] {
                    load[l] += flows.flows()[j].demand;
                }
            }
            let feasible = (0..graph.n_links())
                .all(|l| load[l] == 0 || graph.links()[l].capacity - load[l] >= 0);
            if feasible {
                let min_res =
                    (0..graph.n_links())
                        .map(|l| {
                            if load[l] == 0 {
                                sentinel
                            } else {
                                graph.links()[l].capacity - load[l]
                            }
                        })
                        .min()
                        .unwrap_or(sentinel);
                best = Some(best.map_or(min_res, |b: i64| b.max(min_res)));
            }
            // Advance the mixed-radix picker.
            let mut i = 0;
            loop {
                if i == pick.len() {
                    return best;
                }
                pick[i] += 1;
                if pick[i] < per_flow[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn least_cost_matches_dijkstra(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n_nodes = rng.gen_range(3..=7u32);
            let mut edges = Vec::new();
            for v in 2..=n_nodes {
                let u = rng.gen_range(1..v);
                edges.push((u, v, 1000i64, rng.gen_range(1..=9i64)));
            }
            for _ in 0..rng.gen_range(0..=4) {
                let u = rng.gen_range(1..=n_nodes);
                let v = rng.gen_range(1..=n_nodes);
                let key = (u.min(v), u.max(v));
                if u != v && !edges.iter().any(|&(a, b, _, _)| (a.min(b), a.max(b)) == key) {
                    edges.push((u, v, 1000, rng.gen_range(1..=9)));
                }
            }
            let g = NetworkGraph::from_undirected(n_nodes, &edges).unwrap();
            let s = rng.gen_range(1..=n_nodes);
            let mut d = rng.gen_range(1..=n_nodes);
            if d == s { d = if s == 1 { 2 } else { s - 1 }; }
            let flows = FlowSpec::new(vec![Flow::new(s, d, 10)]).unwrap();
            let result = least_cost_path(&g, &flows, &SolverConfig::default()).unwrap();
            let expected = dijkstra_cost(&g, NodeId(s), NodeId(d)).expect("spine connects all");
            prop_assert_eq!(result.status, SolveStatus::Optimal);
            prop_assert_eq!(result.objective_value, Some(Rational::from_int(expected)));
            // The reported path must itself cost what the objective says.
            let paths = result.paths.unwrap();
            prop_assert_eq!(paths[0].cost, expected);
        }

        #[test]
        fn max_residual_matches_brute_force(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9));
            let n_nodes = rng.gen_range(3..=5u32);
            let mut edges = Vec::new();
            for v in 2..=n_nodes {
                let u = rng.gen_range(1..v);
                edges.push((u, v, rng.gen_range(15..=40i64), 1i64));
            }
            for _ in 0..rng.gen_range(0..=3) {
                let u = rng.gen_range(1..=n_nodes);
                let v = rng.gen_range(1..=n_nodes);
                let key = (u.min(v), u.max(v));
                if u != v && !edges.iter().any(|&(a, b, _, _)| (a.min(b), a.max(b)) == key) {
                    edges.push((u, v, rng.gen_range(15..=40), 1));
                }
            }
            let g = NetworkGraph::from_undirected(n_nodes, &edges).unwrap();
            let mut flows = Vec::new();
            for _ in 0..rng.gen_range(1..=2) {
                loop {
                    let s = rng.gen_range(1..=n_nodes);
                    let d = rng.gen_range(1..=n_nodes);
                    if s != d {
                        flows.push(Flow::new(s, d, rng.gen_range(1..=12)));
                        break;
                    }
                }
            }
            let flows = FlowSpec::new(flows).unwrap();
            let result = max_residual_capacity(&g, &flows, &SolverConfig::default()).unwrap();
            match brute_force_mrc(&g, &flows) {
                Some(best) => {
                    prop_assert_eq!(result.status, SolveStatus::Optimal);
                    prop_assert_eq!(result.objective_value, Some(Rational::from_int(best)));
                }
                None => prop_assert_eq!(result.status, SolveStatus::Unsatisfiable),
            }
        }

        #[test]
        fn extracted_paths_re_embed_as_conserving_memberships(seed in 0u64..300) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
            let n_nodes = rng.gen_range(3..=6u32);
            let mut edges = Vec::new();
            for v in 2..=n_nodes {
                let u = rng.gen_range(1..v);
                edges.push((u, v, 1000i64, rng.gen_range(1..=9i64)));
            }
            let g = NetworkGraph::from_undirected(n_nodes, &edges).unwrap();
            let flows = FlowSpec::new(vec![Flow::new(1, n_nodes, 10)]).unwrap();
            let result = least_cost_path(&g, &flows, &SolverConfig::default()).unwrap();
            let path = &result.paths.unwrap()[0];
            let mut used = vec![false; g.n_links()];
            for l in &path.links {
                used[l.index()] = true;
            }
            // Walking the path again must succeed without drops.
            let (again, dropped) = extract_path(&g, &used, NodeId(1), NodeId(n_nodes)).unwrap();
            prop_assert!(!dropped);
            prop_assert_eq!(&again.nodes, &path.nodes);
            // Consecutive path nodes must be joined by the listed links.
            for (i, l) in path.links.iter().enumerate() {
                let link = g.link(*l);
                prop_assert_eq!(link.start, path.nodes[i]);
                prop_assert_eq!(link.end, path.nodes[i + 1]);
            }
        }
    }
}
