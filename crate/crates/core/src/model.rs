//! Constraint models over link-flow membership variables.
//!
//! The decision object is the link-flow membership matrix (LFM): one binary
//! variable per (link row, flow column) saying whether that flow is routed
//! over that link. Constraint builders append linear constraints over these
//! binaries and register *derived* quantities — residuals, path costs, delay,
//! congestion, utilisation — as affine or ratio expressions that can be
//! evaluated exactly on any complete assignment.
//!
//! Conditional definitions ("MAX if the link carries no flow") are linearized
//! with one auxiliary `used` indicator per link, constrained to be exactly
//! the OR of its LFM row. Variable layout: LFM entries first in row-major
//! order (`link * n_flows + flow`), then the per-link used indicators.
//!
//! Builders are idempotent per model: applying one twice, directly or through
//! a nesting builder, appends nothing new. This keeps composed models (delay
//! implies strict residual positivity, which implies residual definitions)
//! identical to the same set applied by hand, in any order.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{LinkId, NetworkGraph, NodeId};
use crate::rational::{Rational, RationalOverflow};

/// One unit-demand flow request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flow {
    pub source: NodeId,
    pub sink: NodeId,
    /// Bandwidth demand, positive.
    pub demand: i64,
}

impl Flow {
    pub fn new(source: u32, sink: u32, demand: i64) -> Flow {
        Flow { source: NodeId(source), sink: NodeId(sink), demand }
    }
}

/// An ordered set of flows, optionally with per-flow bandwidth limits used by
/// the path capacity constraint (a limit of 0 filters nothing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowSpec {
    flows: Vec<Flow>,
    limits: Option<Vec<i64>>,
}

impl FlowSpec {
    pub fn new(flows: Vec<Flow>) -> Result<FlowSpec, ModelError> {
        Self::build(flows, None)
    }

    pub fn with_limits(flows: Vec<Flow>, limits: Vec<i64>) -> Result<FlowSpec, ModelError> {
        Self::build(flows, Some(limits))
    }

    fn build(flows: Vec<Flow>, limits: Option<Vec<i64>>) -> Result<FlowSpec, ModelError> {
        for (j, flow) in flows.iter().enumerate() {
            if flow.source == flow.sink {
                return Err(ModelError::SourceEqualsSink { flow: j + 1 });
            }
            if flow.demand <= 0 {
                return Err(ModelError::NonPositiveDemand { flow: j + 1, demand: flow.demand });
            }
        }
        if let Some(limits) = &limits {
            if limits.len() != flows.len() {
                return Err(ModelError::LimitsLengthMismatch {
                    flows: flows.len(),
                    limits: limits.len(),
                });
            }
            for (j, &limit) in limits.iter().enumerate() {
                if limit < 0 {
                    return Err(ModelError::NegativeLimit { flow: j + 1, limit });
                }
            }
        }
        Ok(FlowSpec { flows, limits })
    }

    pub fn flows(&self) -> &[Flow] {
        &self.flows
    }

    pub fn limits(&self) -> Option<&[i64]> {
        self.limits.as_deref()
    }

    pub fn n_flows(&self) -> usize {
        self.flows.len()
    }
}

/// A binary link-flow membership matrix: entry (i, j) is true iff flow j is
/// routed over link row i. Indices here are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinkFlowMembership {
    n_links: usize,
    n_flows: usize,
    bits: Vec<bool>,
}

impl LinkFlowMembership {
    pub fn new(
        n_links: usize,
        n_flows: usize,
        bits: Vec<bool>,
    ) -> Result<LinkFlowMembership, ModelError> {
        if bits.len() != n_links * n_flows {
            return Err(ModelError::MembershipShapeMismatch {
                expected: n_links * n_flows,
                actual: bits.len(),
            });
        }
        Ok(LinkFlowMembership { n_links, n_flows, bits })
    }

    pub fn n_links(&self) -> usize {
        self.n_links
    }

    pub fn n_flows(&self) -> usize {
        self.n_flows
    }

    pub fn get(&self, link: usize, flow: usize) -> bool {
        self.bits[link * self.n_flows + flow]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// The columns' membership for one flow, one entry per link row.
    pub fn column(&self, flow: usize) -> Vec<bool> {
        (0..self.n_links).map(|l| self.get(l, flow)).collect()
    }
}

/// Families of derived per-index quantities a model can register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Per-link remaining capacity, with the MAX sentinel on unused links.
    Residuals,
    /// Per-flow total path cost.
    Cost,
    /// Per-link delay term: 0 on unused links, else 1/residual.
    Delay,
    /// Per-link congestion: carried load over residual.
    Congestion,
    /// Per-link utilisation in percent of capacity.
    Utilisation,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::Residuals => "residuals",
            Family::Cost => "cost",
            Family::Delay => "delay",
            Family::Congestion => "congestion",
            Family::Utilisation => "utilisation",
        };
        f.write_str(name)
    }
}

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// What to optimize: a single family member (1-based index), the sum over a
/// family, or the minimum over a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveExpr {
    Var(Family, usize),
    Sum(Family),
    Min(Family),
}

/// Comparison operator of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ge,
}

/// `sum(coef * var) op rhs` over binary variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub terms: Vec<(usize, i64)>,
    pub op: CmpOp,
    pub rhs: i64,
}

impl LinearConstraint {
    pub fn holds(&self, assignment: &[bool]) -> bool {
        let sum: i64 = self.terms.iter().map(|&(v, c)| if assignment[v] { c } else { 0 }).sum();
        match self.op {
            CmpOp::Eq => sum == self.rhs,
            CmpOp::Ge => sum >= self.rhs,
        }
    }
}

/// `constant + sum(coef * var)` over binary variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub constant: i64,
    pub terms: Vec<(usize, i64)>,
}

impl Affine {
    pub fn eval(&self, assignment: &[bool]) -> i64 {
        self.constant
            + self.terms.iter().map(|&(v, c)| if assignment[v] { c } else { 0 }).sum::<i64>()
    }
}

/// A derived quantity as an exact ratio of affine expressions. Integer-valued
/// families use a constant denominator of 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioDef {
    pub num: Affine,
    pub den: Affine,
}

impl RatioDef {
    pub fn eval(&self, assignment: &[bool]) -> Result<Rational, RationalOverflow> {
        Rational::new(self.num.eval(assignment), self.den.eval(assignment))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("flow {flow}: source equals sink")]
    SourceEqualsSink { flow: usize },
    #[error("flow {flow}: demand {demand} must be positive")]
    NonPositiveDemand { flow: usize, demand: i64 },
    #[error("flow {flow}: negative limit {limit}")]
    NegativeLimit { flow: usize, limit: i64 },
    #[error("{flows} flows but {limits} limits")]
    LimitsLengthMismatch { flows: usize, limits: usize },
    #[error("flow {flow}: node {node} is not in the graph")]
    EndpointOutOfRange { flow: usize, node: NodeId },
    #[error("path capacity constraint requires per-flow limits")]
    LimitsMissing,
    #[error("link utilisation is undefined on zero-capacity link {link}")]
    ZeroCapacityLink { link: LinkId },
    #[error("membership matrix has {actual} entries, expected {expected}")]
    MembershipShapeMismatch { expected: usize, actual: usize },
    #[error("objective references unregistered family `{0}`")]
    FamilyNotRegistered(Family),
    #[error("family `{0}` has no members")]
    EmptyFamily(Family),
    #[error("family `{family}` has {arity} members, index {index} out of range")]
    MemberIndexOutOfRange { family: Family, index: usize, arity: usize },
    #[error("objective already set")]
    ObjectiveAlreadySet,
    #[error("model has no objective")]
    NoObjective,
    #[error("arithmetic overflow while evaluating model expression")]
    Overflow(#[from] RationalOverflow),
}

/// Identifiers for the applied-builder set backing idempotency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Builder {
    NetworkPath,
    PathCapacity,
    ResidualCapacity,
    LinkCapacity,
    PathCost,
    Delay,
    Congestion,
    LinkUtilisation,
    ResidualsNonNegative,
}

/// A constraint model under construction: a graph, a flow set, the binary
/// variable space, appended linear constraints, registered derived families
/// and at most one objective. Once handed to the solver it is only read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintModel {
    graph: NetworkGraph,
    flows: FlowSpec,
    constraints: Vec<LinearConstraint>,
    residuals: Option<Vec<RatioDef>>,
    costs: Option<Vec<RatioDef>>,
    delays: Option<Vec<RatioDef>>,
    congestions: Option<Vec<RatioDef>>,
    utilisations: Option<Vec<RatioDef>>,
    objective: Option<(Sense, ObjectiveExpr)>,
    applied: BTreeSet<Builder>,
    has_use_vars: bool,
    max_sentinel: Option<i64>,
}

impl ConstraintModel {
    pub fn new(graph: NetworkGraph, flows: FlowSpec) -> Result<ConstraintModel, ModelError> {
        for (j, flow) in flows.flows().iter().enumerate() {
            for node in [flow.source, flow.sink] {
                if !graph.contains_node(node) {
                    return Err(ModelError::EndpointOutOfRange { flow: j + 1, node });
                }
            }
        }
        Ok(ConstraintModel {
            graph,
            flows,
            constraints: Vec::new(),
            residuals: None,
            costs: None,
            delays: None,
            congestions: None,
            utilisations: None,
            objective: None,
            applied: BTreeSet::new(),
            has_use_vars: false,
            max_sentinel: None,
        })
    }

    pub fn graph(&self) -> &NetworkGraph {
        &self.graph
    }

    pub fn flow_spec(&self) -> &FlowSpec {
        &self.flows
    }

    pub fn n_links(&self) -> usize {
        self.graph.n_links()
    }

    pub fn n_flows(&self) -> usize {
        self.flows.n_flows()
    }

    /// Number of LFM binaries.
    pub fn n_lfm_vars(&self) -> usize {
        self.n_links() * self.n_flows()
    }

    /// Total binary variables, including used indicators if present.
    pub fn n_vars(&self) -> usize {
        self.n_lfm_vars() + if self.has_use_vars { self.n_links() } else { 0 }
    }

    /// Variable id of LFM entry (link row, flow column), 0-based.
    pub fn lfm_var(&self, link: usize, flow: usize) -> usize {
        debug_assert!(link < self.n_links() && flow < self.n_flows());
        link * self.n_flows() + flow
    }

    /// Variable id of a link's used indicator, if indicators exist.
    pub fn use_var(&self, link: usize) -> Option<usize> {
        self.has_use_vars.then(|| self.n_lfm_vars() + link)
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn family(&self, family: Family) -> Option<&[RatioDef]> {
        self.family_slot(family).as_deref()
    }

    pub fn objective(&self) -> Option<(Sense, ObjectiveExpr)> {
        self.objective
    }

    /// The sentinel residual assigned to unused links: one more than the
    /// largest link capacity. Present once residual definitions exist.
    pub fn max_sentinel(&self) -> Option<i64> {
        self.max_sentinel
    }

    pub fn has_network_path(&self) -> bool {
        self.applied.contains(&Builder::NetworkPath)
    }

    fn family_slot(&self, family: Family) -> &Option<Vec<RatioDef>> {
        match family {
            Family::Residuals => &self.residuals,
            Family::Cost => &self.costs,
            Family::Delay => &self.delays,
            Family::Congestion => &self.congestions,
            Family::Utilisation => &self.utilisations,
        }
    }

    // ----- constraint builders -------------------------------------------

    /// Unit flow conservation: for every node and flow, net outflow minus net
    /// inflow over the flow's column is +1 at the flow's source, -1 at its
    /// sink and 0 elsewhere. Every satisfying column is a source-to-sink path
    /// possibly plus flow-conserving cycles.
    pub fn network_path(&mut self) -> Result<(), ModelError> {
        if !self.applied.insert(Builder::NetworkPath) {
            return Ok(());
        }
        let n_flows = self.n_flows();
        for j in 0..n_flows {
            let flow = self.flows.flows()[j];
            for u in 1..=self.graph.n_nodes() {
                let node = NodeId(u);
                let mut terms = Vec::new();
                for &l in self.graph.out_links(node) {
                    terms.push((self.lfm_var(l as usize, j), 1));
                }
                for &l in self.graph.in_links(node) {
                    terms.push((self.lfm_var(l as usize, j), -1));
                }
                let rhs = if node == flow.source {
                    1
                } else if node == flow.sink {
                    -1
                } else {
                    0
                };
                self.constraints.push(LinearConstraint { terms, op: CmpOp::Eq, rhs });
            }
        }
        Ok(())
    }

    /// Forbids routing a flow over any link whose capacity is below the
    /// flow's limit, by fixing those LFM entries to zero. Requires limits.
    pub fn path_capacity_constraint(&mut self) -> Result<(), ModelError> {
        if self.applied.contains(&Builder::PathCapacity) {
            return Ok(());
        }
        let limits = self.flows.limits().ok_or(ModelError::LimitsMissing)?.to_vec();
        self.applied.insert(Builder::PathCapacity);
        for (l, link) in self.graph.links().iter().enumerate() {
            for (j, &limit) in limits.iter().enumerate() {
                if link.capacity < limit {
                    self.constraints.push(LinearConstraint {
                        terms: vec![(self.lfm_var(l, j), 1)],
                        op: CmpOp::Eq,
                        rhs: 0,
                    });
                }
            }
        }
        Ok(())
    }

    /// Registers per-link residual capacity: MAX on links carrying no flow,
    /// otherwise capacity minus the total demand routed over the link. MAX is
    /// one more than the largest capacity, so a sentinel always exceeds any
    /// genuine residual. Introduces the used indicators and their OR
    /// linearization; appends no other constraints.
    pub fn residual_capacity(&mut self) -> Result<(), ModelError> {
        if !self.applied.insert(Builder::ResidualCapacity) {
            return Ok(());
        }
        let max = self.graph.links().iter().map(|l| l.capacity).max().unwrap_or(0) + 1;
        self.max_sentinel = Some(max);
        self.has_use_vars = true;
        let n_flows = self.n_flows();
        for l in 0..self.n_links() {
            let u = self.use_var(l).expect("indicators just enabled");
            // used >= every row entry; used <= row sum. Together: exact OR.
            for j in 0..n_flows {
                self.constraints.push(LinearConstraint {
                    terms: vec![(u, 1), (self.lfm_var(l, j), -1)],
                    op: CmpOp::Ge,
                    rhs: 0,
                });
            }
            let mut le_terms: Vec<(usize, i64)> =
                (0..n_flows).map(|j| (self.lfm_var(l, j), 1)).collect();
            le_terms.push((u, -1));
            self.constraints.push(LinearConstraint { terms: le_terms, op: CmpOp::Ge, rhs: 0 });
        }
        let defs = (0..self.n_links())
            .map(|l| RatioDef {
                num: self.residual_affine(l),
                den: Affine { constant: 1, terms: vec![] },
            })
            .collect();
        self.residuals = Some(defs);
        Ok(())
    }

    /// Strict residual positivity: every link's residual must exceed zero,
    /// i.e. a link is either unused (sentinel residual) or keeps spare
    /// capacity after carrying its flows. Nests `residual_capacity`.
    pub fn link_capacity_constraint(&mut self) -> Result<(), ModelError> {
        self.residual_capacity()?;
        if !self.applied.insert(Builder::LinkCapacity) {
            return Ok(());
        }
        for l in 0..self.n_links() {
            let affine = self.residual_affine(l);
            self.constraints.push(LinearConstraint {
                terms: affine.terms,
                op: CmpOp::Ge,
                rhs: 1 - affine.constant,
            });
        }
        Ok(())
    }

    /// Non-strict residual feasibility: residuals may reach exactly zero.
    /// This is the feasibility form used when maximizing the minimum
    /// residual. Nests `residual_capacity`.
    pub fn require_residuals_nonnegative(&mut self) -> Result<(), ModelError> {
        self.residual_capacity()?;
        if !self.applied.insert(Builder::ResidualsNonNegative) {
            return Ok(());
        }
        for l in 0..self.n_links() {
            let affine = self.residual_affine(l);
            self.constraints.push(LinearConstraint {
                terms: affine.terms,
                op: CmpOp::Ge,
                rhs: -affine.constant,
            });
        }
        Ok(())
    }

    /// Registers per-flow path cost: the sum of link costs over the flow's
    /// column. Appends no constraints.
    pub fn path_cost(&mut self) -> Result<(), ModelError> {
        if !self.applied.insert(Builder::PathCost) {
            return Ok(());
        }
        let defs = (0..self.n_flows())
            .map(|j| RatioDef {
                num: Affine {
                    constant: 0,
                    terms: (0..self.n_links())
                        .map(|l| (self.lfm_var(l, j), self.graph.links()[l].cost))
                        .collect(),
                },
                den: Affine { constant: 1, terms: vec![] },
            })
            .collect();
        self.costs = Some(defs);
        Ok(())
    }

    /// Registers per-link delay terms: 0 for unused links, otherwise the
    /// reciprocal of the link's residual. Nests `link_capacity_constraint`,
    /// so residuals of used links are strictly positive and the reciprocal is
    /// well defined.
    pub fn delay(&mut self) -> Result<(), ModelError> {
        self.link_capacity_constraint()?;
        if !self.applied.insert(Builder::Delay) {
            return Ok(());
        }
        let defs = (0..self.n_links())
            .map(|l| RatioDef {
                num: Affine {
                    constant: 0,
                    terms: vec![(self.use_var(l).expect("residuals registered"), 1)],
                },
                den: self.residual_affine(l),
            })
            .collect();
        self.delays = Some(defs);
        Ok(())
    }

    /// Registers per-link congestion: carried load divided by residual
    /// (0 for unused links, since the load numerator vanishes). Nests
    /// `link_capacity_constraint`.
    pub fn congestion(&mut self) -> Result<(), ModelError> {
        self.link_capacity_constraint()?;
        if !self.applied.insert(Builder::Congestion) {
            return Ok(());
        }
        let defs = (0..self.n_links())
            .map(|l| RatioDef { num: self.load_affine(l), den: self.residual_affine(l) })
            .collect();
        self.congestions = Some(defs);
        Ok(())
    }

    /// Registers per-link utilisation: carried load as a percentage of
    /// capacity. Rejects graphs with zero-capacity links, where the ratio is
    /// undefined. Appends no constraints.
    pub fn link_utilisation(&mut self) -> Result<(), ModelError> {
        if self.applied.contains(&Builder::LinkUtilisation) {
            return Ok(());
        }
        for (l, link) in self.graph.links().iter().enumerate() {
            if link.capacity == 0 {
                return Err(ModelError::ZeroCapacityLink { link: LinkId(l as u32 + 1) });
            }
        }
        self.applied.insert(Builder::LinkUtilisation);
        let defs = (0..self.n_links())
            .map(|l| {
                let mut num = self.load_affine(l);
                for term in &mut num.terms {
                    term.1 *= 100;
                }
                RatioDef {
                    num,
                    den: Affine { constant: self.graph.links()[l].capacity, terms: vec![] },
                }
            })
            .collect();
        self.utilisations = Some(defs);
        Ok(())
    }

    /// Sets the objective. The referenced family must already be registered
    /// and non-empty; member indices are 1-based.
    pub fn set_objective(&mut self, sense: Sense, expr: ObjectiveExpr) -> Result<(), ModelError> {
        if self.objective.is_some() {
            return Err(ModelError::ObjectiveAlreadySet);
        }
        let family = match expr {
            ObjectiveExpr::Var(f, _) | ObjectiveExpr::Sum(f) | ObjectiveExpr::Min(f) => f,
        };
        let defs = self.family(family).ok_or(ModelError::FamilyNotRegistered(family))?;
        match expr {
            ObjectiveExpr::Var(f, index) => {
                if index < 1 || index > defs.len() {
                    return Err(ModelError::MemberIndexOutOfRange {
                        family: f,
                        index,
                        arity: defs.len(),
                    });
                }
            }
            ObjectiveExpr::Sum(f) | ObjectiveExpr::Min(f) => {
                if defs.is_empty() {
                    return Err(ModelError::EmptyFamily(f));
                }
            }
        }
        self.objective = Some((sense, expr));
        Ok(())
    }

    // ----- evaluation ----------------------------------------------------

    /// Extends an LFM into a full variable assignment, deriving each used
    /// indicator as the OR of its row.
    pub fn complete_assignment(&self, lfm: &LinkFlowMembership) -> Result<Vec<bool>, ModelError> {
        if lfm.n_links() != self.n_links() || lfm.n_flows() != self.n_flows() {
            return Err(ModelError::MembershipShapeMismatch {
                expected: self.n_lfm_vars(),
                actual: lfm.n_links() * lfm.n_flows(),
            });
        }
        let mut assignment = lfm.bits().to_vec();
        if self.has_use_vars {
            for l in 0..self.n_links() {
                assignment.push((0..self.n_flows()).any(|j| lfm.get(l, j)));
            }
        }
        Ok(assignment)
    }

    /// Direct check of every constraint against a complete assignment. This
    /// is plain expression evaluation, independent of the solver's
    /// propagation machinery.
    pub fn satisfies(&self, assignment: &[bool]) -> bool {
        debug_assert_eq!(assignment.len(), self.n_vars());
        self.constraints.iter().all(|c| c.holds(assignment))
    }

    /// Evaluates one registered family member (1-based) exactly.
    pub fn evaluate_member(
        &self,
        family: Family,
        index: usize,
        assignment: &[bool],
    ) -> Result<Rational, ModelError> {
        let defs = self.family(family).ok_or(ModelError::FamilyNotRegistered(family))?;
        if index < 1 || index > defs.len() {
            return Err(ModelError::MemberIndexOutOfRange { family, index, arity: defs.len() });
        }
        Ok(defs[index - 1].eval(assignment)?)
    }

    /// Evaluates the objective expression exactly on a complete assignment.
    pub fn evaluate_objective(&self, assignment: &[bool]) -> Result<Rational, ModelError> {
        let (_, expr) = self.objective.ok_or(ModelError::NoObjective)?;
        self.evaluate_expr(expr, assignment)
    }

    fn evaluate_expr(
        &self,
        expr: ObjectiveExpr,
        assignment: &[bool],
    ) -> Result<Rational, ModelError> {
        match expr {
            ObjectiveExpr::Var(family, index) => self.evaluate_member(family, index, assignment),
            ObjectiveExpr::Sum(family) => {
                let defs = self.family(family).ok_or(ModelError::FamilyNotRegistered(family))?;
                let mut total = Rational::zero();
                for def in defs {
                    total = total.checked_add(&def.eval(assignment)?)?;
                }
                Ok(total)
            }
            ObjectiveExpr::Min(family) => {
                let defs = self.family(family).ok_or(ModelError::FamilyNotRegistered(family))?;
                let mut best: Option<Rational> = None;
                for def in defs {
                    let v = def.eval(assignment)?;
                    best = Some(match best {
                        Some(b) if b <= v => b,
                        _ => v,
                    });
                }
                best.ok_or(ModelError::EmptyFamily(family))
            }
        }
    }

    // ----- expression assembly -------------------------------------------

    /// residual(l) = MAX + (capacity_l - MAX) * used_l - sum_j demand_j * x[l,j]
    /// which is MAX when unused and capacity minus carried load when used.
    fn residual_affine(&self, link: usize) -> Affine {
        let max = self.max_sentinel.expect("residual definitions registered");
        let capacity = self.graph.links()[link].capacity;
        let mut terms = vec![(self.use_var(link).expect("indicators enabled"), capacity - max)];
        for (j, flow) in self.flows.flows().iter().enumerate() {
            terms.push((self.lfm_var(link, j), -flow.demand));
        }
        Affine { constant: max, terms }
    }

    /// Total demand routed over a link: sum_j demand_j * x[l,j].
    fn load_affine(&self, link: usize) -> Affine {
        Affine {
            constant: 0,
            terms: self
                .flows
                .flows()
                .iter()
                .enumerate()
                .map(|(j, flow)| (self.lfm_var(link, j), flow.demand))
                .collect(),
        }
    }
}
