//! Constrained-optimal routing over directed flow networks.
//!
//! The crate models quality-of-service routing as constraint satisfaction
//! and optimization over a 0/1 link-flow membership matrix: each column
//! selects the links carrying one flow. Composable predicates contribute
//! linear constraints (flow conservation, capacity filtering, strict or
//! non-strict residual headroom) and derived quantity families (cost,
//! residual capacity, delay, congestion, utilisation) that objectives can
//! minimize, maximize, sum or take the minimum of. A deterministic
//! branch-and-bound solver with constraint propagation finds provably
//! optimal matrices, and the application layer decodes them into per-flow
//! node paths.
//!
//! Entry points:
//! - [`apps::least_cost_path`], [`apps::least_cost_path_capacity`] and
//!   [`apps::max_residual_capacity`] for the ready-made routing problems;
//! - [`model::ConstraintModel`] plus [`solver::solve`] for bespoke
//!   predicate combinations;
//! - [`topology`] for grid and fat-tree generators;
//! - [`oracle::oracle_enumerate`] for exhaustive verification of
//!   desk-scale models.

pub mod apps;
pub mod graph;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod solver;
pub mod topology;

pub use apps::{
    build_model, extract_path, least_cost_path, least_cost_path_capacity, max_residual_capacity,
    run_app, AppError, ExtractError, RoutePath, RouteResult, RouteWarning, RoutingApp,
};
pub use graph::{GraphError, GraphViolation, Link, LinkId, NetworkGraph, NodeId};
pub use model::{
    Affine, CmpOp, ConstraintModel, Family, Flow, FlowSpec, LinearConstraint, LinkFlowMembership,
    ModelError, ObjectiveExpr, RatioDef, Sense,
};
pub use oracle::{oracle_enumerate, OracleError, OracleOutcome, OracleSolution, MAX_ORACLE_BITS};
pub use rational::{Rational, RationalOverflow};
pub use solver::{
    propagate, solve, BranchOrder, PropagationResult, SolveError, SolveOutcome, SolveStats,
    SolveStatus, SolverConfig,
};
pub use topology::{
    fat_tree, fat_tree_endpoints, grid, grid_diagonal_endpoints, FatTreeSpec, GridSpec, NodeRole,
    TopologyError,
};
