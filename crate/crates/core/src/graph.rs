//! Directed flow networks as ordered link arrays.
//!
//! A network is a node count plus an ordered array of directed links (arcs).
//! The row order of that array is load-bearing: every per-link structure in
//! the engine — flow membership matrices, residual vectors, constraint rows —
//! is aligned with it, so two graphs with the same arcs in different order are
//! deliberately *not* interchangeable. Nodes are numbered 1..=n; link ids are
//! 1-based row indices.

use std::fmt;

use thiserror::Error;

/// A node identifier, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    /// Zero-based index for array lookups.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A link identifier: the 1-based row index into the graph's link array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkId(pub u32);

impl LinkId {
    /// Zero-based row index.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A directed link with a capacity and a traversal cost, both non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Link {
    pub start: NodeId,
    pub end: NodeId,
    pub capacity: i64,
    pub cost: i64,
}

impl Link {
    pub fn new(start: u32, end: u32, capacity: i64, cost: i64) -> Link {
        Link { start: NodeId(start), end: NodeId(end), capacity, cost }
    }
}

/// A single violation of the link-array invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphViolation {
    /// The arc (start, end) appears in more than one row.
    DuplicateArc {
        row: LinkId,
        start: NodeId,
        end: NodeId,
    },
    /// start == end.
    SelfLoop {
        row: LinkId,
        node: NodeId,
    },
    /// A node id outside 1..=n_nodes.
    NodeOutOfRange {
        row: LinkId,
        id: NodeId,
    },
    NegativeCapacity {
        row: LinkId,
        capacity: i64,
    },
    NegativeCost {
        row: LinkId,
        cost: i64,
    },
}

impl fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphViolation::DuplicateArc { row, start, end } => {
                write!(f, "row {row}: duplicate arc ({start}, {end})")
            }
            GraphViolation::SelfLoop { row, node } => {
                write!(f, "row {row}: self-loop at node {node}")
            }
            GraphViolation::NodeOutOfRange { row, id } => {
                write!(f, "row {row}: node id {id} out of range")
            }
            GraphViolation::NegativeCapacity { row, capacity } => {
                write!(f, "row {row}: negative capacity {capacity}")
            }
            GraphViolation::NegativeCost { row, cost } => {
                write!(f, "row {row}: negative cost {cost}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid link array: {}", format_violations(.0))]
    Invalid(Vec<GraphViolation>),
    #[error("duplicate undirected edge ({0}, {1})")]
    DuplicateUndirectedEdge(u32, u32),
    #[error("graph has {expected} links but flow vector has {actual} entries")]
    FlowLengthMismatch { expected: usize, actual: usize },
    #[error("negative flow {flow} on link {link}")]
    NegativeFlow { link: LinkId, flow: i64 },
}

fn format_violations(vs: &[GraphViolation]) -> String {
    let items: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    items.join("; ")
}

/// Checks the link-array invariants and returns every violation found.
/// An empty result means `NetworkGraph::new` would accept the input.
pub fn validate_links(n_nodes: u32, links: &[Link]) -> Vec<GraphViolation> {
    let mut violations = Vec::new();
    let mut seen: std::collections::HashSet<(u32, u32)> = std::collections::HashSet::new();
    for (i, link) in links.iter().enumerate() {
        let row = LinkId(i as u32 + 1);
        for id in [link.start, link.end] {
            if id.0 < 1 || id.0 > n_nodes {
                violations.push(GraphViolation::NodeOutOfRange { row, id });
            }
        }
        if link.start == link.end {
            violations.push(GraphViolation::SelfLoop { row, node: link.start });
        }
        if link.capacity < 0 {
            violations.push(GraphViolation::NegativeCapacity { row, capacity: link.capacity });
        }
        if link.cost < 0 {
            violations.push(GraphViolation::NegativeCost { row, cost: link.cost });
        }
        if !seen.insert((link.start.0, link.end.0)) {
            violations.push(GraphViolation::DuplicateArc { row, start: link.start, end: link.end });
        }
    }
    violations
}

/// An immutable directed network. Constructed only through validating
/// constructors, so every instance satisfies the link-array invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkGraph {
    n_nodes: u32,
    links: Vec<Link>,
    // Per-node lists of 0-based link row indices, precomputed once.
    out_links: Vec<Vec<u32>>,
    in_links: Vec<Vec<u32>>,
}

impl NetworkGraph {
    /// Builds a graph from a node count and link array, rejecting the input
    /// with the full violation list if any invariant fails.
    pub fn new(n_nodes: u32, links: Vec<Link>) -> Result<NetworkGraph, GraphError> {
        let violations = validate_links(n_nodes, &links);
        if !violations.is_empty() {
            return Err(GraphError::Invalid(violations));
        }
        let mut out_links = vec![Vec::new(); n_nodes as usize];
        let mut in_links = vec![Vec::new(); n_nodes as usize];
        for (i, link) in links.iter().enumerate() {
            out_links[link.start.index()].push(i as u32);
            in_links[link.end.index()].push(i as u32);
        }
        Ok(NetworkGraph { n_nodes, links, out_links, in_links })
    }

    /// Expands an undirected edge list into the canonical directed form: one
    /// arc per direction with the shared capacity and cost, rows grouped by
    /// start node ascending, then end node ascending. The ordering depends
    /// only on the edge *set*, so permuting the input changes nothing.
    pub fn from_undirected(
        n_nodes: u32,
        edges: &[(u32, u32, i64, i64)],
    ) -> Result<NetworkGraph, GraphError> {
        let mut seen: std::collections::HashSet<(u32, u32)> = std::collections::HashSet::new();
        for &(u, v, _, _) in edges {
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateUndirectedEdge(key.0, key.1));
            }
        }
        let mut links = Vec::with_capacity(edges.len() * 2);
        for &(u, v, capacity, cost) in edges {
            links.push(Link::new(u, v, capacity, cost));
            links.push(Link::new(v, u, capacity, cost));
        }
        links.sort_by_key(|l| (l.start.0, l.end.0));
        NetworkGraph::new(n_nodes, links)
    }

    pub fn n_nodes(&self) -> u32 {
        self.n_nodes
    }

    pub fn n_links(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id.index()]
    }

    /// 0-based row indices of arcs leaving `node`, in row order.
    pub fn out_links(&self, node: NodeId) -> &[u32] {
        &self.out_links[node.index()]
    }

    /// 0-based row indices of arcs entering `node`, in row order.
    pub fn in_links(&self, node: NodeId) -> &[u32] {
        &self.in_links[node.index()]
    }

    pub fn contains_node(&self, node: NodeId) -> bool {
        node.0 >= 1 && node.0 <= self.n_nodes
    }

    /// Net outflow minus inflow of `flows` at `node`. Summing this over all
    /// nodes always yields zero: every arc's flow leaves one node and enters
    /// another.
    pub fn divergence(&self, flows: &FlowVector, node: NodeId) -> i64 {
        let out: i64 = self.out_links(node).iter().map(|&i| flows.values()[i as usize]).sum();
        let inn: i64 = self.in_links(node).iter().map(|&i| flows.values()[i as usize]).sum();
        out - inn
    }

    /// Per-link `capacity - flow`. Entries may be negative; feasibility rules
    /// are the caller's concern.
    pub fn residual(&self, flows: &FlowVector) -> Vec<i64> {
        self.links.iter().zip(flows.values()).map(|(link, &f)| link.capacity - f).collect()
    }

    /// Boolean adjacency matrix: entry `[u][v]` (0-based) is true iff the arc
    /// (u+1, v+1) exists. Diagonal is always false since self-loops are
    /// rejected at construction.
    pub fn adjacency_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.n_nodes as usize;
        let mut m = vec![vec![false; n]; n];
        for link in &self.links {
            m[link.start.index()][link.end.index()] = true;
        }
        m
    }
}

/// Per-link non-negative flow amounts, aligned with a graph's link array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowVector {
    values: Vec<i64>,
}

impl FlowVector {
    pub fn new(graph: &NetworkGraph, values: Vec<i64>) -> Result<FlowVector, GraphError> {
        if values.len() != graph.n_links() {
            return Err(GraphError::FlowLengthMismatch {
                expected: graph.n_links(),
                actual: values.len(),
            });
        }
        for (i, &f) in values.iter().enumerate() {
            if f < 0 {
                return Err(GraphError::NegativeFlow { link: LinkId(i as u32 + 1), flow: f });
            }
        }
        Ok(FlowVector { values })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}
