//! Deterministic branch-and-bound search over constraint models.
//!
//! The solver performs depth-first search on the binary variables with
//! bounds-consistency propagation over the linear constraints after every
//! decision. With an objective it keeps searching past solutions, pruning
//! any branch whose optimistic bound cannot *strictly* improve on the
//! incumbent, and proves optimality by exhaustion; without one it stops at
//! the first solution. There is no randomness anywhere: identical model and
//! configuration always produce the identical outcome, node count and
//! returned assignment.
//!
//! Branching follows the partially built path of each flow: among the
//! unassigned arcs leaving the flow's frontier node it first tries, at value
//! 1, the arc whose head is nearest the flow's sink (root-level shortest
//! distances; cost-weighted when minimizing cost, hop-weighted otherwise).
//! Off-frontier variables fall back to row order at value 0.
//!
//! Pruning rests on per-flow completion distances recomputed at every node:
//! a shortest source-to-sink distance where arcs currently fixed to 0 are
//! removed and arcs fixed to 1 ride free. Any satisfying completion of a
//! column decomposes into a source-sink path plus cycles; the path avoids
//! the excluded arcs and its not-yet-committed portion costs at least that
//! distance, so `committed + distance` lower-bounds every completion's cost
//! (admissible for cost minimization), and an infinite distance proves the
//! branch has no solution at all, which prunes satisfaction models too.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::NodeId;
use crate::model::{
    CmpOp, ConstraintModel, Family, LinearConstraint, LinkFlowMembership, ModelError,
    ObjectiveExpr, RatioDef, Sense,
};
use crate::rational::{Rational, RationalOverflow};

const UNREACHABLE: i64 = i64::MAX;

/// Variable selection strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchOrder {
    /// Extend each flow's partial path from its frontier first; fall back to
    /// row order. The default.
    #[default]
    SourceAdjacentFirst,
    /// Plain first-unassigned-variable in row order, trying 0 first.
    RowOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolverConfig {
    /// Wall-clock budget. `None` runs to completion.
    pub time_limit_ms: Option<u64>,
    pub branch_order: BranchOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Objective model solved and proved optimal.
    Optimal,
    /// Satisfaction model: a solution was found.
    Satisfiable,
    /// Proved infeasible.
    Unsatisfiable,
    /// Budget exhausted; the incumbent, if any, is returned.
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SolveStats {
    /// Branch decisions applied, counting both values of a variable.
    pub nodes_explored: u64,
    /// Assignments derived by constraint propagation.
    pub propagations: u64,
    /// Elapsed wall time; the single non-deterministic field.
    pub wall_time_ms: u64,
    /// Objective value of each successive incumbent, strictly improving.
    pub incumbent_objectives: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Present for optimal, satisfiable, and timeout-with-incumbent.
    pub lfm: Option<LinkFlowMembership>,
    /// The objective evaluated on `lfm`, when the model has an objective.
    pub objective_value: Option<Rational>,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("objective evaluation failed: {0}")]
    Evaluation(#[from] ModelError),
    #[error(transparent)]
    Overflow(#[from] RationalOverflow),
}

/// Result of propagating a set of fixed variables to fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropagationResult {
    /// Per-variable domains at fixpoint; `None` entries remain free.
    Fixpoint(Vec<Option<bool>>),
    Conflict,
}

/// Bounds-consistency propagation of `fixed` assignments over `constraints`,
/// exposed for direct inspection; the solver runs the same engine internally.
pub fn propagate(
    n_vars: usize,
    constraints: &[LinearConstraint],
    fixed: &[(usize, bool)],
) -> PropagationResult {
    let mut engine = Engine::new(n_vars, constraints);
    for &(var, value) in fixed {
        if !engine.assign(var, value) {
            return PropagationResult::Conflict;
        }
    }
    if engine.examine_all() && engine.run_queue() {
        PropagationResult::Fixpoint(engine.assignment)
    } else {
        PropagationResult::Conflict
    }
}

/// Solves `model` under `config`.
pub fn solve(model: &ConstraintModel, config: &SolverConfig) -> Result<SolveOutcome, SolveError> {
    let start = Instant::now();
    let deadline = config.time_limit_ms.map(|ms| start + Duration::from_millis(ms));
    let mut search = Search::new(model, config);
    let result = search.run(deadline)?;
    let mut outcome = result;
    outcome.stats.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(outcome)
}

// ----- propagation engine -------------------------------------------------

struct Engine<'a> {
    constraints: &'a [LinearConstraint],
    /// var -> indices of constraints mentioning it.
    watch: Vec<Vec<u32>>,
    assignment: Vec<Option<bool>>,
    trail: Vec<usize>,
    /// Next trail position to propagate from.
    qhead: usize,
    propagations: u64,
}

impl<'a> Engine<'a> {
    fn new(n_vars: usize, constraints: &'a [LinearConstraint]) -> Engine<'a> {
        let mut watch = vec![Vec::new(); n_vars];
        for (ci, c) in constraints.iter().enumerate() {
            for &(v, _) in &c.terms {
                watch[v].push(ci as u32);
            }
        }
        Engine {
            constraints,
            watch,
            assignment: vec![None; n_vars],
            trail: Vec::new(),
            qhead: 0,
            propagations: 0,
        }
    }

    /// Records an assignment; false if it contradicts an existing one.
    fn assign(&mut self, var: usize, value: bool) -> bool {
        match self.assignment[var] {
            Some(existing) => existing == value,
            None => {
                self.assignment[var] = Some(value);
                self.trail.push(var);
                true
            }
        }
    }

    /// Checks every constraint once; catches infeasibility that involves no
    /// assigned variable, such as an empty-sum equality with non-zero rhs.
    fn examine_all(&mut self) -> bool {
        for ci in 0..self.constraints.len() {
            if !self.examine(ci) {
                return false;
            }
        }
        true
    }

    /// Propagates queued assignments to fixpoint; false on conflict.
    fn run_queue(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let var = self.trail[self.qhead];
            self.qhead += 1;
            for k in 0..self.watch[var].len() {
                let ci = self.watch[var][k] as usize;
                if !self.examine(ci) {
                    return false;
                }
            }
        }
        true
    }

    /// Bounds-consistency check of one constraint: detects conflict, fixes
    /// any variable whose value would make the constraint unsatisfiable.
    fn examine(&mut self, ci: usize) -> bool {
        let constraints = self.constraints;
        loop {
            let c = &constraints[ci];
            let mut sum = 0i64;
            let mut pos = 0i64;
            let mut neg = 0i64;
            for &(v, coef) in &c.terms {
                match self.assignment[v] {
                    Some(true) => sum += coef,
                    Some(false) => {}
                    None => {
                        if coef > 0 {
                            pos += coef;
                        } else {
                            neg += coef;
                        }
                    }
                }
            }
            let lb = sum + neg;
            let ub = sum + pos;
            match c.op {
                CmpOp::Ge => {
                    if ub < c.rhs {
                        return false;
                    }
                    if lb >= c.rhs {
                        return true; // satisfied whatever the free vars do
                    }
                }
                CmpOp::Eq => {
                    if lb > c.rhs || ub < c.rhs {
                        return false;
                    }
                    if lb == c.rhs && ub == c.rhs {
                        return true;
                    }
                }
            }
            // Look for a variable with only one feasible value.
            let mut forced: Option<(usize, bool)> = None;
            for &(v, coef) in &c.terms {
                if self.assignment[v].is_some() {
                    continue;
                }
                let (cp, cn) = if coef > 0 { (coef, 0) } else { (0, coef) };
                let (lb1, ub1) = (lb - cn + coef, ub - cp + coef);
                let (lb0, ub0) = (lb - cn, ub - cp);
                let (bad1, bad0) = match c.op {
                    CmpOp::Ge => (ub1 < c.rhs, ub0 < c.rhs),
                    CmpOp::Eq => (lb1 > c.rhs || ub1 < c.rhs, lb0 > c.rhs || ub0 < c.rhs),
                };
                match (bad1, bad0) {
                    (true, true) => return false,
                    (true, false) => {
                        forced = Some((v, false));
                        break;
                    }
                    (false, true) => {
                        forced = Some((v, true));
                        break;
                    }
                    (false, false) => {}
                }
            }
            match forced {
                Some((v, value)) => {
                    if !self.assign(v, value) {
                        return false;
                    }
                    self.propagations += 1;
                    // Re-derive bounds with the new assignment before
                    // scanning for further forcings.
                }
                None => return true,
            }
        }
    }

    /// Undoes all assignments past `mark`.
    fn backtrack_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().expect("trail underflow");
            self.assignment[var] = None;
        }
        self.qhead = self.trail.len();
    }
}

// ----- search -------------------------------------------------------------

/// Per-flow shortest distances to the sink over arcs not excluded at the
/// root; a static table that only steers branch ordering.
struct FlowGuide {
    dist_to_sink: Vec<i64>,
}

#[derive(Debug, Clone, Copy)]
struct FrontierInfo {
    node: NodeId,
    /// The walk from the source over committed arcs reached the sink.
    complete: bool,
}

struct Decision {
    var: usize,
    first: bool,
    trail_mark: usize,
    flipped: bool,
}

struct Search<'a> {
    model: &'a ConstraintModel,
    config: &'a SolverConfig,
    engine: Engine<'a>,
    guides: Option<Vec<FlowGuide>>,
    /// The objective minimizes over the cost family, so completion
    /// distances double as admissible cost bounds.
    cost_weighted: bool,
    /// Node visit stamps for frontier walks, to avoid re-clearing.
    stamp: Vec<u32>,
    epoch: u32,
    /// Scratch buffers for per-node completion Dijkstras.
    dist_scratch: Vec<i64>,
    heap_scratch: BinaryHeap<Reverse<(i64, u32)>>,
    incumbent: Option<(Vec<bool>, Rational)>,
    stats: SolveStats,
}

impl<'a> Search<'a> {
    fn new(model: &'a ConstraintModel, config: &'a SolverConfig) -> Search<'a> {
        let cost_weighted = matches!(
            model.objective(),
            Some((
                Sense::Minimize,
                ObjectiveExpr::Var(Family::Cost, _)
                    | ObjectiveExpr::Sum(Family::Cost)
                    | ObjectiveExpr::Min(Family::Cost),
            ))
        );
        Search {
            model,
            config,
            engine: Engine::new(model.n_vars(), model.constraints()),
            guides: None,
            cost_weighted,
            stamp: vec![0; model.graph().n_nodes() as usize],
            epoch: 0,
            dist_scratch: Vec::new(),
            heap_scratch: BinaryHeap::new(),
            incumbent: None,
            stats: SolveStats::default(),
        }
    }

    fn run(&mut self, deadline: Option<Instant>) -> Result<SolveOutcome, SolveError> {
        let objective = self.model.objective();

        // Root propagation; an immediate conflict proves infeasibility.
        if !(self.engine.examine_all() && self.engine.run_queue()) {
            return Ok(self.finish(SolveStatus::Unsatisfiable));
        }
        if self.model.has_network_path() {
            self.guides = Some(self.build_guides());
        }

        let mut decisions: Vec<Decision> = Vec::new();
        let mut timed_out = false;

        'search: loop {
            if let Some(dl) = deadline {
                if Instant::now() >= dl {
                    timed_out = true;
                    break 'search;
                }
            }

            // The engine state is consistent here.
            let completions = self.compute_completions();
            let mut descend = !self.should_prune(completions.as_deref())?;

            if descend {
                let frontiers = self.compute_frontiers();
                match self.select_branch(frontiers.as_deref()) {
                    Some((var, value)) => {
                        decisions.push(Decision {
                            var,
                            first: value,
                            trail_mark: self.engine.trail.len(),
                            flipped: false,
                        });
                        self.stats.nodes_explored += 1;
                        if self.engine.assign(var, value) && self.engine.run_queue() {
                            continue 'search;
                        }
                        descend = false;
                    }
                    None => {
                        // Complete assignment.
                        let bools: Vec<bool> =
                            self.engine.assignment.iter().map(|a| a.expect("complete")).collect();
                        debug_assert!(self.model.satisfies(&bools));
                        match objective {
                            None => {
                                self.incumbent = Some((bools, Rational::zero()));
                                return Ok(self.finish(SolveStatus::Satisfiable));
                            }
                            Some((sense, _)) => {
                                let value = self.model.evaluate_objective(&bools)?;
                                let improves = match (&self.incumbent, sense) {
                                    (None, _) => true,
                                    (Some((_, inc)), Sense::Minimize) => value < *inc,
                                    (Some((_, inc)), Sense::Maximize) => value > *inc,
                                };
                                if improves {
                                    self.incumbent = Some((bools, value));
                                    self.stats.incumbent_objectives.push(value);
                                }
                                descend = false;
                            }
                        }
                    }
                }
            }

            if !descend {
                // Backtrack: flip the deepest unflipped decision, or pop.
                loop {
                    match decisions.pop() {
                        None => break 'search, // tree exhausted
                        Some(mut d) => {
                            self.engine.backtrack_to(d.trail_mark);
                            if !d.flipped {
                                d.flipped = true;
                                let var = d.var;
                                let value = !d.first;
                                decisions.push(d);
                                self.stats.nodes_explored += 1;
                                if self.engine.assign(var, value) && self.engine.run_queue() {
                                    continue 'search;
                                }
                                // Flip conflicted too: keep popping.
                            }
                        }
                    }
                }
            }
        }

        let status = if timed_out {
            SolveStatus::Timeout
        } else if self.incumbent.is_some() {
            SolveStatus::Optimal
        } else {
            SolveStatus::Unsatisfiable
        };
        Ok(self.finish(status))
    }

    fn finish(&mut self, status: SolveStatus) -> SolveOutcome {
        self.stats.propagations = self.engine.propagations;
        let has_objective = self.model.objective().is_some();
        let (lfm, objective_value) = match &self.incumbent {
            Some((bools, value)) => {
                let bits = bools[..self.model.n_lfm_vars()].to_vec();
                let lfm = LinkFlowMembership::new(self.model.n_links(), self.model.n_flows(), bits)
                    .expect("assignment matches model shape");
                (Some(lfm), has_objective.then_some(*value))
            }
            None => (None, None),
        };
        SolveOutcome { status, lfm, objective_value, stats: std::mem::take(&mut self.stats) }
    }

    /// Reverse shortest-path distances to each flow's sink over arcs not
    /// fixed to 0 by root propagation, cost- or hop-weighted to match the
    /// objective. Purely heuristic: only branch ordering reads these.
    fn build_guides(&self) -> Vec<FlowGuide> {
        let model = self.model;
        let graph = model.graph();
        let n = graph.n_nodes() as usize;
        let mut guides = Vec::with_capacity(model.n_flows());
        for (j, flow) in model.flow_spec().flows().iter().enumerate() {
            let mut dist = vec![UNREACHABLE; n];
            dist[flow.sink.index()] = 0;
            let mut heap: BinaryHeap<Reverse<(i64, u32)>> = BinaryHeap::new();
            heap.push(Reverse((0, flow.sink.0)));
            while let Some(Reverse((d, node))) = heap.pop() {
                let node = NodeId(node);
                if d > dist[node.index()] {
                    continue;
                }
                for &l in graph.in_links(node) {
                    let l = l as usize;
                    if self.engine.assignment[model.lfm_var(l, j)] == Some(false) {
                        continue; // excluded for this flow at the root
                    }
                    let link = &graph.links()[l];
                    let w = if self.cost_weighted { link.cost } else { 1 };
                    let cand = d + w;
                    if cand < dist[link.start.index()] {
                        dist[link.start.index()] = cand;
                        heap.push(Reverse((cand, link.start.0)));
                    }
                }
            }
            guides.push(FlowGuide { dist_to_sink: dist });
        }
        guides
    }

    /// Per-flow completion distance under the current partial assignment:
    /// shortest source-to-sink distance where arcs fixed to 0 for the flow
    /// are removed and arcs fixed to 1 cost nothing (their cost is already
    /// committed). `UNREACHABLE` entries prove the flow cannot complete on
    /// this branch. Distances are cost-weighted exactly when the objective
    /// minimizes cost; otherwise only finiteness is meaningful.
    fn compute_completions(&mut self) -> Option<Vec<i64>> {
        if !self.model.has_network_path() {
            return None;
        }
        let model = self.model;
        let graph = model.graph();
        let n = graph.n_nodes() as usize;
        let mut out = Vec::with_capacity(model.n_flows());
        for (j, flow) in model.flow_spec().flows().iter().enumerate() {
            let dist = &mut self.dist_scratch;
            let heap = &mut self.heap_scratch;
            dist.clear();
            dist.resize(n, UNREACHABLE);
            heap.clear();
            dist[flow.source.index()] = 0;
            heap.push(Reverse((0, flow.source.0)));
            while let Some(Reverse((d, node))) = heap.pop() {
                if node == flow.sink.0 {
                    break;
                }
                let node = NodeId(node);
                if d > dist[node.index()] {
                    continue;
                }
                for &l in graph.out_links(node) {
                    let l = l as usize;
                    let w = match self.engine.assignment[model.lfm_var(l, j)] {
                        Some(false) => continue,
                        Some(true) => 0,
                        None => {
                            if self.cost_weighted {
                                graph.links()[l].cost
                            } else {
                                1
                            }
                        }
                    };
                    let end = graph.links()[l].end;
                    let cand = d + w;
                    if cand < dist[end.index()] {
                        dist[end.index()] = cand;
                        heap.push(Reverse((cand, end.0)));
                    }
                }
            }
            out.push(dist[flow.sink.index()]);
        }
        Some(out)
    }

    /// Walks each flow's committed arcs from its source, yielding the
    /// frontier node branching extends from. Only meaningful for models
    /// with flow conservation.
    fn compute_frontiers(&mut self) -> Option<Vec<FrontierInfo>> {
        if !self.model.has_network_path() {
            return None;
        }
        let model = self.model;
        let graph = model.graph();
        let mut infos = Vec::with_capacity(model.n_flows());
        for (j, flow) in model.flow_spec().flows().iter().enumerate() {
            self.epoch = self.epoch.wrapping_add(1);
            let epoch = self.epoch;
            let mut cur = flow.source;
            self.stamp[cur.index()] = epoch;
            let mut complete = false;
            loop {
                if cur == flow.sink {
                    complete = true;
                    break;
                }
                let mut next = None;
                for &l in graph.out_links(cur) {
                    let l = l as usize;
                    if self.engine.assignment[model.lfm_var(l, j)] == Some(true) {
                        let end = graph.links()[l].end;
                        if self.stamp[end.index()] != epoch {
                            next = Some(end);
                            break;
                        }
                    }
                }
                match next {
                    Some(end) => {
                        self.stamp[end.index()] = epoch;
                        cur = end;
                    }
                    None => break,
                }
            }
            infos.push(FrontierInfo { node: cur, complete });
        }
        Some(infos)
    }

    /// True when the current branch provably cannot yield a strictly better
    /// solution (or any solution at all, via unreachability).
    fn should_prune(&self, completions: Option<&[i64]>) -> Result<bool, SolveError> {
        // A flow with no source-to-sink path through non-excluded arcs can
        // never complete, whatever the objective.
        if let Some(completions) = completions {
            if completions.contains(&UNREACHABLE) {
                return Ok(true);
            }
        }
        let (sense, expr) = match self.model.objective() {
            Some(o) => o,
            None => return Ok(false),
        };
        let incumbent = match &self.incumbent {
            Some((_, value)) => *value,
            None => return Ok(false),
        };
        let bound = match self.optimistic_bound(sense, expr, completions)? {
            Some(b) => b,
            None => return Ok(false),
        };
        Ok(match sense {
            // Only strict improvements are accepted, so an equal bound prunes.
            Sense::Minimize => bound >= incumbent,
            Sense::Maximize => bound <= incumbent,
        })
    }

    /// An admissible optimistic value of the objective over all completions
    /// of the current partial assignment: a lower bound when minimizing, an
    /// upper bound when maximizing. `None` means no usable bound.
    fn optimistic_bound(
        &self,
        sense: Sense,
        expr: ObjectiveExpr,
        completions: Option<&[i64]>,
    ) -> Result<Option<Rational>, SolveError> {
        let family = match expr {
            ObjectiveExpr::Var(f, _) | ObjectiveExpr::Sum(f) | ObjectiveExpr::Min(f) => f,
        };
        let defs = self.model.family(family).expect("objective family registered");
        let member = |index: usize| -> Result<Option<Rational>, SolveError> {
            self.member_bound(family, defs, index, sense, completions)
        };
        match expr {
            ObjectiveExpr::Var(_, index) => member(index - 1),
            ObjectiveExpr::Sum(_) => {
                let mut total = Rational::zero();
                for i in 0..defs.len() {
                    match member(i)? {
                        Some(b) => total = total.checked_add(&b)?,
                        None => return Ok(None),
                    }
                }
                Ok(Some(total))
            }
            ObjectiveExpr::Min(_) => {
                // min over per-member optimistic values bounds the min in
                // the same direction, for either sense.
                let mut best: Option<Rational> = None;
                for i in 0..defs.len() {
                    match member(i)? {
                        Some(b) => {
                            best = Some(match best {
                                Some(prev) if prev <= b => prev,
                                _ => b,
                            })
                        }
                        None => return Ok(None),
                    }
                }
                Ok(best)
            }
        }
    }

    fn member_bound(
        &self,
        family: Family,
        defs: &[RatioDef],
        index: usize,
        sense: Sense,
        completions: Option<&[i64]>,
    ) -> Result<Option<Rational>, SolveError> {
        let def = &defs[index];
        // Affine member over a positive constant denominator: exact interval.
        if def.den.terms.is_empty() && def.den.constant > 0 {
            let (lb, ub) = self.affine_interval(&def.num);
            let mut v = match sense {
                Sense::Minimize => lb,
                Sense::Maximize => ub,
            };
            // Cost members additionally admit the completion bound: the
            // flow's eventual path still has to reach the sink, and its
            // uncommitted portion costs at least the completion distance.
            // (The interval lower bound is exactly the committed cost,
            // since costs are non-negative.)
            if sense == Sense::Minimize && family == Family::Cost && self.cost_weighted {
                if let Some(completions) = completions {
                    let d = completions[index];
                    if d != UNREACHABLE {
                        v += d;
                    }
                }
            }
            return Ok(Some(Rational::new(v, def.den.constant)?));
        }
        // True ratio members (delay, congestion): non-negative by
        // construction, exact once every referenced variable is assigned.
        match sense {
            Sense::Minimize => {
                if self.ratio_decided(def) {
                    let bools: Vec<bool> =
                        self.engine.assignment.iter().map(|a| a.unwrap_or(false)).collect();
                    Ok(Some(def.eval(&bools)?))
                } else {
                    Ok(Some(Rational::zero()))
                }
            }
            Sense::Maximize => Ok(None),
        }
    }

    fn affine_interval(&self, affine: &crate::model::Affine) -> (i64, i64) {
        let mut lb = affine.constant;
        let mut ub = affine.constant;
        for &(v, coef) in &affine.terms {
            match self.engine.assignment[v] {
                Some(true) => {
                    lb += coef;
                    ub += coef;
                }
                Some(false) => {}
                None => {
                    if coef > 0 {
                        ub += coef;
                    } else {
                        lb += coef;
                    }
                }
            }
        }
        (lb, ub)
    }

    fn ratio_decided(&self, def: &RatioDef) -> bool {
        def.num
            .terms
            .iter()
            .chain(def.den.terms.iter())
            .all(|&(v, _)| self.engine.assignment[v].is_some())
    }

    /// Next decision: frontier arc at value 1 (nearest-to-sink first), else
    /// first unassigned variable at value 0.
    fn select_branch(&self, frontiers: Option<&[FrontierInfo]>) -> Option<(usize, bool)> {
        if self.config.branch_order == BranchOrder::SourceAdjacentFirst {
            if let Some(frontiers) = frontiers {
                let graph = self.model.graph();
                for (j, fr) in frontiers.iter().enumerate() {
                    if fr.complete {
                        continue;
                    }
                    let mut best: Option<((i64, u32), usize)> = None;
                    for &l in graph.out_links(fr.node) {
                        let var = self.model.lfm_var(l as usize, j);
                        if self.engine.assignment[var].is_none() {
                            let head = graph.links()[l as usize].end;
                            let h =
                                self.guides.as_ref().map_or(0, |g| g[j].dist_to_sink[head.index()]);
                            let key = (h, l);
                            if best.is_none_or(|(bk, _)| key < bk) {
                                best = Some((key, var));
                            }
                        }
                    }
                    if let Some((_, var)) = best {
                        return Some((var, true));
                    }
                }
            }
        }
        self.engine.assignment.iter().position(|a| a.is_none()).map(|var| (var, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Link, NetworkGraph};
    use crate::model::{Flow, FlowSpec};

    fn lcp_model(graph: NetworkGraph, flows: FlowSpec) -> ConstraintModel {
        let n_flows = flows.n_flows();
        let mut model = ConstraintModel::new(graph, flows).unwrap();
        model.network_path().unwrap();
        model.path_cost().unwrap();
        let expr = if n_flows == 1 {
            ObjectiveExpr::Var(Family::Cost, 1)
        } else {
            ObjectiveExpr::Sum(Family::Cost)
        };
        model.set_objective(Sense::Minimize, expr).unwrap();
        model
    }

    #[test]
    fn propagate_fixes_forced_variables() {
        // x0 + x1 = 1 with x0 fixed true forces x1 false.
        let constraints =
            vec![LinearConstraint { terms: vec![(0, 1), (1, 1)], op: CmpOp::Eq, rhs: 1 }];
        match propagate(2, &constraints, &[(0, true)]) {
            PropagationResult::Fixpoint(domains) => {
                assert_eq!(domains, vec![Some(true), Some(false)]);
            }
            PropagationResult::Conflict => panic!("unexpected conflict"),
        }
    }

    #[test]
    fn propagate_reports_unsatisfiable_sums() {
        // Three binaries cannot sum to five.
        let constraints =
            vec![LinearConstraint { terms: vec![(0, 1), (1, 1), (2, 1)], op: CmpOp::Eq, rhs: 5 }];
        assert_eq!(propagate(3, &constraints, &[]), PropagationResult::Conflict);
    }

    #[test]
    fn propagate_chains_through_constraints() {
        // x0 = 1, x0 + x1 = 1, x1 + x2 >= 1: forces x1 = 0 then x2 = 1.
        let constraints = vec![
            LinearConstraint { terms: vec![(0, 1)], op: CmpOp::Eq, rhs: 1 },
            LinearConstraint { terms: vec![(0, 1), (1, 1)], op: CmpOp::Eq, rhs: 1 },
            LinearConstraint { terms: vec![(1, 1), (2, 1)], op: CmpOp::Ge, rhs: 1 },
        ];
        match propagate(3, &constraints, &[]) {
            PropagationResult::Fixpoint(domains) => {
                assert_eq!(domains, vec![Some(true), Some(false), Some(true)]);
            }
            PropagationResult::Conflict => panic!("unexpected conflict"),
        }
    }

    #[test]
    fn satisfaction_model_stops_at_first_solution() {
        let graph =
            NetworkGraph::from_undirected(3, &[(1, 2, 1000, 1), (1, 3, 1000, 1), (2, 3, 1000, 1)])
                .unwrap();
        let flows = FlowSpec::new(vec![Flow::new(1, 3, 10)]).unwrap();
        let mut model = ConstraintModel::new(graph, flows).unwrap();
        model.network_path().unwrap();
        let outcome = solve(&model, &SolverConfig::default()).unwrap();
        assert_eq!(outcome.status, SolveStatus::Satisfiable);
        let lfm = outcome.lfm.expect("solution present");
        let a = model.complete_assignment(&lfm).unwrap();
        assert!(model.satisfies(&a));
        assert!(outcome.objective_value.is_none());
    }

    #[test]
    fn cheapest_triangle_route_is_found_and_proved() {
        // Direct arc costs 9; the two-hop route costs 2.
        let graph =
            NetworkGraph::from_undirected(3, &[(1, 2, 1000, 1), (1, 3, 1000, 9), (2, 3, 1000, 1)])
                .unwrap();
        let flows = FlowSpec::new(vec![Flow::new(1, 3, 10)]).unwrap();
        let model = lcp_model(graph, flows);
        let outcome = solve(&model, &SolverConfig::default()).unwrap();
        assert_eq!(outcome.status, SolveStatus::Optimal);
        assert_eq!(outcome.objective_value, Some(Rational::from_int(2)));
        let lfm = outcome.lfm.unwrap();
        let used: Vec<(u32, u32)> = model
            .graph()
            .links()
            .iter()
            .enumerate()
            .filter(|&(l, _)| lfm.get(l, 0))
            .map(|(_, link)| (link.start.0, link.end.0))
            .collect();
        assert_eq!(used, vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn saturated_link_is_unsatisfiable_under_strict_residuals() {
        let graph = NetworkGraph::new(2, vec![Link::new(1, 2, 10, 1)]).unwrap();
        let flows = FlowSpec::new(vec![Flow::new(1, 2, 10)]).unwrap();
        let mut model = ConstraintModel::new(graph, flows).unwrap();
        model.network_path().unwrap();
        model.link_capacity_constraint().unwrap();
        let outcome = solve(&model, &SolverConfig::default()).unwrap();
        assert_eq!(outcome.status, SolveStatus::Unsatisfiable);
        assert!(outcome.lfm.is_none());
    }

    #[test]
    fn disconnected_sink_is_proved_unsatisfiable_quickly() {
        // Two components: {1,2} and {3,4}.
        let graph = NetworkGraph::from_undirected(4, &[(1, 2, 10, 1), (3, 4, 10, 1)]).unwrap();
        let flows = FlowSpec::new(vec![Flow::new(1, 3, 1)]).unwrap();
        let model = lcp_model(graph, flows);
        let outcome = solve(&model, &SolverConfig::default()).unwrap();
        assert_eq!(outcome.status, SolveStatus::Unsatisfiable);
        // The unreachability prune fires at the root: no branching at all.
        assert_eq!(outcome.stats.nodes_explored, 0);
    }

    #[test]
    fn maximin_residual_on_tiny_fat_tree() {
        let (graph, _) = crate::topology::fat_tree(&crate::topology::FatTreeSpec {
            k: 2,
            capacity: 1000,
            cost: 1,
        })
        .unwrap();
        let flows = FlowSpec::new(vec![Flow::new(6, 7, 10)]).unwrap();
        let mut model = ConstraintModel::new(graph, flows).unwrap();
        model.network_path().unwrap();
        model.require_residuals_nonnegative().unwrap();
        model.set_objective(Sense::Maximize, ObjectiveExpr::Min(Family::Residuals)).unwrap();
        let outcome = solve(&model, &SolverConfig::default()).unwrap();
        assert_eq!(outcome.status, SolveStatus::Optimal);
        assert_eq!(outcome.objective_value, Some(Rational::from_int(990)));
        // The unique host-to-host route has six arcs.
        let lfm = outcome.lfm.unwrap();
        let used = (0..model.n_links()).filter(|&l| lfm.get(l, 0)).count();
        assert_eq!(used, 6);
    }

    #[test]
    fn incumbents_improve_strictly_and_end_at_the_optimum() {
        let graph =
            NetworkGraph::from_undirected(3, &[(1, 2, 1000, 1), (1, 3, 1000, 9), (2, 3, 1000, 1)])
                .unwrap();
        let flows = FlowSpec::new(vec![Flow::new(1, 3, 10)]).unwrap();
        let model = lcp_model(graph, flows);
        // Row-order branching finds the expensive direct route first.
        let config = SolverConfig { time_limit_ms: None, branch_order: BranchOrder::RowOrder };
        let outcome = solve(&model, &config).unwrap();
        assert_eq!(outcome.status, SolveStatus::Optimal);
        let incumbents = &outcome.stats.incumbent_objectives;
        assert!(!incumbents.is_empty());
        for pair in incumbents.windows(2) {
            assert!(pair[1] < pair[0], "incumbents must strictly improve");
        }
        assert_eq!(incumbents.last(), Some(&Rational::from_int(2)));
        assert_eq!(outcome.objective_value, Some(Rational::from_int(2)));
    }

    #[test]
    fn identical_inputs_give_identical_outcomes() {
        let graph =
            crate::topology::grid(&crate::topology::GridSpec { order: 4, capacity: 1000, cost: 1 })
                .unwrap();
        let flows = FlowSpec::new(vec![Flow::new(1, 16, 10)]).unwrap();
        let model = lcp_model(graph, flows);
        let a = solve(&model, &SolverConfig::default()).unwrap();
        let b = solve(&model, &SolverConfig::default()).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.lfm, b.lfm);
        assert_eq!(a.objective_value, b.objective_value);
        assert_eq!(a.stats.nodes_explored, b.stats.nodes_explored);
        assert_eq!(a.stats.propagations, b.stats.propagations);
        assert_eq!(a.stats.incumbent_objectives, b.stats.incumbent_objectives);
    }

    #[test]
    fn zero_budget_times_out_without_incumbent() {
        let graph =
            crate::topology::grid(&crate::topology::GridSpec { order: 5, capacity: 1000, cost: 1 })
                .unwrap();
        let flows = FlowSpec::new(vec![Flow::new(1, 25, 10)]).unwrap();
        let model = lcp_model(graph, flows);
        let config = SolverConfig { time_limit_ms: Some(0), ..SolverConfig::default() };
        let outcome = solve(&model, &config).unwrap();
        assert_eq!(outcome.status, SolveStatus::Timeout);
        assert!(outcome.lfm.is_none());
        assert!(outcome.objective_value.is_none());
    }

    #[test]
    fn both_branch_orders_agree_on_the_optimum() {
        let graph =
            crate::topology::grid(&crate::topology::GridSpec { order: 3, capacity: 1000, cost: 1 })
                .unwrap();
        let flows = FlowSpec::new(vec![Flow::new(1, 9, 10)]).unwrap();
        let model = lcp_model(graph, flows);
        let frontier = solve(&model, &SolverConfig::default()).unwrap();
        let row = solve(
            &model,
            &SolverConfig { time_limit_ms: None, branch_order: BranchOrder::RowOrder },
        )
        .unwrap();
        assert_eq!(frontier.status, SolveStatus::Optimal);
        assert_eq!(row.status, SolveStatus::Optimal);
        assert_eq!(frontier.objective_value, Some(Rational::from_int(4)));
        assert_eq!(row.objective_value, frontier.objective_value);
    }
}
