//! Benchmark topology generators: square grids and adapted fat-trees.
//!
//! Both generators emit undirected edge lists expanded through
//! [`NetworkGraph::from_undirected`], so link ordering is canonical and a
//! given spec always reproduces the same graph. All links share one capacity
//! and one cost, matching the uniform-bandwidth evaluation setups these
//! topologies are used for.

use thiserror::Error;

use crate::graph::{GraphError, NetworkGraph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("grid order must be at least 1")]
    BadGridOrder,
    #[error("grid of order 1 has a single node and no diagonal endpoints")]
    GridTooSmallForEndpoints,
    #[error("fat-tree arity k must be even and at least 2, got {0}")]
    BadFatTreeArity(u32),
    #[error("negative capacity or cost in topology spec")]
    NegativeWeight,
}

/// An order-n square grid: n^2 nodes, nearest-neighbour links.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub order: u32,
    pub capacity: i64,
    pub cost: i64,
}

/// An adapted k-ary fat-tree; `k` must be even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FatTreeSpec {
    pub k: u32,
    pub capacity: i64,
    pub cost: i64,
}

/// Role of a node inside a generated fat-tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRole {
    Core,
    Aggregation,
    Edge,
    Host,
}

/// Generates the order-n grid. Nodes are numbered row-major from 1: node
/// `(r, c)` (0-based row and column) is `r*n + c + 1`. Each node links to its
/// horizontal and vertical neighbours, giving `2*n*(n-1)` undirected edges.
pub fn grid(spec: &GridSpec) -> Result<NetworkGraph, TopologyError> {
    if spec.order < 1 {
        return Err(TopologyError::BadGridOrder);
    }
    if spec.capacity < 0 || spec.cost < 0 {
        return Err(TopologyError::NegativeWeight);
    }
    let n = spec.order;
    let mut edges = Vec::with_capacity((2 * n * (n.saturating_sub(1))) as usize);
    for r in 0..n {
        for c in 0..n {
            let id = r * n + c + 1;
            if c + 1 < n {
                edges.push((id, id + 1, spec.capacity, spec.cost));
            }
            if r + 1 < n {
                edges.push((id, id + n, spec.capacity, spec.cost));
            }
        }
    }
    Ok(expand(n * n, &edges))
}

/// The opposite-corner endpoint pair of a grid: node 1 and node n^2.
/// An order-1 grid has no such pair.
pub fn grid_diagonal_endpoints(spec: &GridSpec) -> Result<(NodeId, NodeId), TopologyError> {
    if spec.order < 1 {
        return Err(TopologyError::BadGridOrder);
    }
    if spec.order == 1 {
        return Err(TopologyError::GridTooSmallForEndpoints);
    }
    Ok((NodeId(1), NodeId(spec.order * spec.order)))
}

/// Generates the adapted k-ary fat-tree and a role label per node.
///
/// Layout for even k:
/// * `(k/2)^2` core switches, nodes `1..=(k/2)^2`;
/// * `k` pods of `k` switches each — per pod, `k/2` aggregation switches
///   numbered before its `k/2` edge switches;
/// * `k^3/4` hosts numbered last, `k/2` per edge switch.
///
/// Wiring: every edge switch connects to every aggregation switch of its pod;
/// the j-th aggregation switch of each pod (j = 1..=k/2) connects to cores
/// `(j-1)*k/2 + 1 ..= j*k/2`; every host connects to its edge switch. Tier
/// link counts are `k^3/4` each (core-aggregation, aggregation-edge,
/// edge-host), `3k^3/4` undirected edges in total.
pub fn fat_tree(spec: &FatTreeSpec) -> Result<(NetworkGraph, Vec<NodeRole>), TopologyError> {
    if spec.k < 2 || !spec.k.is_multiple_of(2) {
        return Err(TopologyError::BadFatTreeArity(spec.k));
    }
    if spec.capacity < 0 || spec.cost < 0 {
        return Err(TopologyError::NegativeWeight);
    }
    let k = spec.k;
    let half = k / 2;
    let n_cores = half * half;
    let n_hosts = k * k * k / 4;
    let n_nodes = n_cores + k * k + n_hosts;

    let mut roles = Vec::with_capacity(n_nodes as usize);
    roles.resize(n_cores as usize, NodeRole::Core);
    for _ in 0..k {
        roles.extend(std::iter::repeat_n(NodeRole::Aggregation, half as usize));
        roles.extend(std::iter::repeat_n(NodeRole::Edge, half as usize));
    }
    roles.extend(std::iter::repeat_n(NodeRole::Host, n_hosts as usize));

    let agg_id = |pod: u32, j: u32| n_cores + pod * k + j + 1;
    let edge_id = |pod: u32, j: u32| n_cores + pod * k + half + j + 1;
    let host_base = n_cores + k * k;

    let mut edges = Vec::with_capacity((3 * n_hosts) as usize);
    for pod in 0..k {
        for j in 0..half {
            // Aggregation switch j of this pod up to its core group.
            for c in 0..half {
                edges.push((agg_id(pod, j), j * half + c + 1, spec.capacity, spec.cost));
            }
            // Full bipartite aggregation-edge mesh within the pod.
            for e in 0..half {
                edges.push((agg_id(pod, j), edge_id(pod, e), spec.capacity, spec.cost));
            }
        }
        // Hosts hang off edge switches, k/2 per switch, numbered in
        // edge-switch order across pods.
        for e in 0..half {
            let edge_index = pod * half + e;
            for h in 0..half {
                let host = host_base + edge_index * half + h + 1;
                edges.push((edge_id(pod, e), host, spec.capacity, spec.cost));
            }
        }
    }
    let graph = expand(n_nodes, &edges);
    debug_assert_eq!(graph.n_links(), (3 * n_hosts * 2) as usize);
    Ok((graph, roles))
}

/// The lowest- and highest-numbered hosts of a fat-tree, i.e. the first host
/// of the first pod and the last host of the last pod.
pub fn fat_tree_endpoints(spec: &FatTreeSpec) -> Result<(NodeId, NodeId), TopologyError> {
    if spec.k < 2 || !spec.k.is_multiple_of(2) {
        return Err(TopologyError::BadFatTreeArity(spec.k));
    }
    let k = spec.k;
    let first_host = (k / 2) * (k / 2) + k * k + 1;
    let n_hosts = k * k * k / 4;
    Ok((NodeId(first_host), NodeId(first_host + n_hosts - 1)))
}

fn expand(n_nodes: u32, edges: &[(u32, u32, i64, i64)]) -> NetworkGraph {
    // Generator wiring never produces duplicates or bad ids; treat any slip
    // as a bug rather than a recoverable error.
    match NetworkGraph::from_undirected(n_nodes, edges) {
        Ok(g) => g,
        Err(GraphError::Invalid(v)) => panic!("generator produced invalid links: {v:?}"),
        Err(e) => panic!("generator produced invalid links: {e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeId;

    fn grid_spec(order: u32) -> GridSpec {
        GridSpec { order, capacity: 1000, cost: 1 }
    }

    fn ft_spec(k: u32) -> FatTreeSpec {
        FatTreeSpec { k, capacity: 1000, cost: 1 }
    }

    #[test]
    fn grid_counts() {
        let g = grid(&grid_spec(6)).unwrap();
        assert_eq!(g.n_nodes(), 36);
        assert_eq!(g.n_links(), 120); // 2 * 2*6*5 directed

        let g = grid(&grid_spec(19)).unwrap();
        assert_eq!(g.n_nodes(), 361);
        assert_eq!(g.n_links(), 2 * 2 * 19 * 18);

        let g = grid(&grid_spec(1)).unwrap();
        assert_eq!(g.n_nodes(), 1);
        assert_eq!(g.n_links(), 0);
    }

    #[test]
    fn grid_wiring_is_row_major_nearest_neighbour() {
        let g = grid(&grid_spec(3)).unwrap();
        let m = g.adjacency_matrix();
        let adj = |a: u32, b: u32| m[(a - 1) as usize][(b - 1) as usize];
        // Centre node 5 touches 2, 4, 6, 8 and nothing else.
        for n in 1..=9u32 {
            assert_eq!(adj(5, n), [2, 4, 6, 8].contains(&n), "node 5 vs {n}");
        }
        // Corner 1 touches 2 and 4 only; no wraparound 3-1 or 7-1.
        for n in 1..=9u32 {
            assert_eq!(adj(1, n), [2, 4].contains(&n), "node 1 vs {n}");
        }
    }

    #[test]
    fn grid_degrees() {
        let order = 5;
        let g = grid(&grid_spec(order)).unwrap();
        let mut corners = 0;
        let mut edges = 0;
        let mut interior = 0;
        for u in 1..=g.n_nodes() {
            match g.out_links(NodeId(u)).len() {
                2 => corners += 1,
                3 => edges += 1,
                4 => interior += 1,
                d => panic!("unexpected degree {d}"),
            }
        }
        assert_eq!(corners, 4);
        assert_eq!(edges as u32, 4 * (order - 2));
        assert_eq!(interior as u32, (order - 2) * (order - 2));
    }

    #[test]
    fn grid_diagonal_endpoints_are_opposite_corners() {
        assert_eq!(grid_diagonal_endpoints(&grid_spec(6)).unwrap(), (NodeId(1), NodeId(36)));
        assert_eq!(grid_diagonal_endpoints(&grid_spec(2)).unwrap(), (NodeId(1), NodeId(4)));
        assert_eq!(
            grid_diagonal_endpoints(&grid_spec(1)),
            Err(TopologyError::GridTooSmallForEndpoints)
        );
    }

    #[test]
    fn fat_tree_k2_structure() {
        let (g, roles) = fat_tree(&ft_spec(2)).unwrap();
        assert_eq!(g.n_nodes(), 7);
        // 1 core, pod 1 = {agg 2, edge 3}, pod 2 = {agg 4, edge 5}, hosts 6, 7.
        assert_eq!(
            roles,
            vec![
                NodeRole::Core,
                NodeRole::Aggregation,
                NodeRole::Edge,
                NodeRole::Aggregation,
                NodeRole::Edge,
                NodeRole::Host,
                NodeRole::Host,
            ]
        );
        let m = g.adjacency_matrix();
        let adj = |a: u32, b: u32| m[(a - 1) as usize][(b - 1) as usize];
        assert!(adj(1, 2) && adj(1, 4), "core reaches both aggregation switches");
        assert!(adj(2, 3) && adj(4, 5), "aggregation reaches its pod's edge switch");
        assert!(adj(3, 6) && adj(5, 7), "hosts hang off edge switches");
        assert!(!adj(3, 5) && !adj(2, 4), "no intra-tier links");
        assert_eq!(g.n_links(), 12); // 3*k^3/4 = 6 undirected
        assert_eq!(fat_tree_endpoints(&ft_spec(2)).unwrap(), (NodeId(6), NodeId(7)));
    }

    #[test]
    fn fat_tree_counts_across_arities() {
        for k in [2u32, 4, 6, 8, 10] {
            let (g, roles) = fat_tree(&ft_spec(k)).unwrap();
            let switches = roles.iter().filter(|r| !matches!(r, NodeRole::Host)).count() as u32;
            let hosts = roles.iter().filter(|r| matches!(r, NodeRole::Host)).count() as u32;
            assert_eq!(switches, 5 * k * k / 4, "switch count at k={k}");
            assert_eq!(hosts, k * k * k / 4, "host count at k={k}");
            assert_eq!(g.n_nodes(), switches + hosts);
            assert_eq!(g.n_links() as u32, 2 * 3 * k * k * k / 4, "directed links at k={k}");
        }
        // Headline size: k=10 has 375 nodes and 750 undirected links.
        let (g, _) = fat_tree(&ft_spec(10)).unwrap();
        assert_eq!(g.n_nodes(), 375);
        assert_eq!(g.n_links(), 1500);
    }

    #[test]
    fn fat_tree_tier_link_counts() {
        for k in [2u32, 4, 6] {
            let (g, roles) = fat_tree(&ft_spec(k)).unwrap();
            let mut core_agg = 0u32;
            let mut agg_edge = 0u32;
            let mut edge_host = 0u32;
            for link in g.links() {
                // Count each undirected edge once via the lower-id direction.
                if link.start.0 > link.end.0 {
                    continue;
                }
                let a = roles[link.start.index()];
                let b = roles[link.end.index()];
                match (a, b) {
                    (NodeRole::Core, NodeRole::Aggregation)
                    | (NodeRole::Aggregation, NodeRole::Core) => core_agg += 1,
                    (NodeRole::Aggregation, NodeRole::Edge)
                    | (NodeRole::Edge, NodeRole::Aggregation) => agg_edge += 1,
                    (NodeRole::Edge, NodeRole::Host) | (NodeRole::Host, NodeRole::Edge) => {
                        edge_host += 1
                    }
                    other => panic!("unexpected tier pairing {other:?}"),
                }
            }
            let expected = k * k * k / 4;
            assert_eq!(core_agg, expected, "core-aggregation at k={k}");
            assert_eq!(agg_edge, expected, "aggregation-edge at k={k}");
            assert_eq!(edge_host, expected, "edge-host at k={k}");
        }
    }

    #[test]
    fn fat_tree_degrees_and_core_coverage() {
        let k = 4u32;
        let (g, roles) = fat_tree(&ft_spec(k)).unwrap();
        for (i, role) in roles.iter().enumerate() {
            let deg = g.out_links(NodeId(i as u32 + 1)).len() as u32;
            match role {
                NodeRole::Core | NodeRole::Aggregation | NodeRole::Edge => {
                    assert_eq!(deg, k, "switch {i} degree")
                }
                NodeRole::Host => assert_eq!(deg, 1, "host {i} degree"),
            }
        }
        // Every core must reach exactly one aggregation switch per pod.
        let n_cores = (k / 2) * (k / 2);
        for core in 1..=n_cores {
            let mut pods_reached = std::collections::HashSet::new();
            for &l in g.out_links(NodeId(core)) {
                let agg = g.links()[l as usize].end.0;
                let pod = (agg - 1 - n_cores) / k;
                assert!(pods_reached.insert(pod), "core {core} reaches pod {pod} twice");
            }
            assert_eq!(pods_reached.len() as u32, k, "core {core} pod coverage");
        }
    }

    #[test]
    fn fat_tree_endpoints_are_first_and_last_host() {
        assert_eq!(fat_tree_endpoints(&ft_spec(4)).unwrap(), (NodeId(21), NodeId(36)));
        let (_, roles) = fat_tree(&ft_spec(4)).unwrap();
        assert_eq!(roles[20], NodeRole::Host);
        assert_eq!(roles[35], NodeRole::Host);
        assert_eq!(roles.len(), 36);
    }

    #[test]
    fn odd_or_tiny_arity_is_rejected() {
        assert_eq!(fat_tree(&ft_spec(3)).unwrap_err(), TopologyError::BadFatTreeArity(3));
        assert_eq!(fat_tree(&ft_spec(0)).unwrap_err(), TopologyError::BadFatTreeArity(0));
        assert_eq!(fat_tree_endpoints(&ft_spec(5)).unwrap_err(), TopologyError::BadFatTreeArity(5));
    }

    #[test]
    fn generators_are_deterministic() {
        let a = grid(&grid_spec(7)).unwrap();
        let b = grid(&grid_spec(7)).unwrap();
        assert_eq!(a, b);
        let (ta, ra) = fat_tree(&ft_spec(6)).unwrap();
        let (tb, rb) = fat_tree(&ft_spec(6)).unwrap();
        assert_eq!(ta, tb);
        assert_eq!(ra, rb);
    }

    #[test]
    fn generated_weights_are_applied() {
        let g = grid(&GridSpec { order: 3, capacity: 250, cost: 7 }).unwrap();
        assert!(g.links().iter().all(|l| l.capacity == 250 && l.cost == 7));
        let (t, _) = fat_tree(&FatTreeSpec { k: 2, capacity: 40, cost: 3 }).unwrap();
        assert!(t.links().iter().all(|l| l.capacity == 40 && l.cost == 3));
    }
}
