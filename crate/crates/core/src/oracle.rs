//! Exhaustive enumeration oracle for desk-scale models.
//!
//! The oracle enumerates every 0/1 membership matrix, derives the per-link
//! use indicators as the OR of each row (the only values the linearization
//! rows admit), checks every constraint by direct summation and evaluates
//! the objective on each satisfying assignment. It shares no search logic
//! with the branch-and-bound solver, which makes it a trustworthy referee
//! in tests: enumeration proceeds column by column so that a constraint is
//! checked as soon as all of its variables have values, but subtrees are
//! only ever skipped when such a fully-assigned constraint is violated, so
//! the visited set is exactly the satisfying set.

use thiserror::Error;

use crate::model::{
    CmpOp, ConstraintModel, LinearConstraint, LinkFlowMembership, ModelError, Sense,
};
use crate::rational::Rational;

/// Upper limit on membership bits; beyond this enumeration is hopeless.
pub const MAX_ORACLE_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSolution {
    pub lfm: LinkFlowMembership,
    /// Objective value when the model has an objective.
    pub objective_value: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOutcome {
    /// Number of satisfying membership assignments.
    pub satisfying_count: u64,
    /// Best solution under the objective (first in enumeration order among
    /// optima), or the first satisfying assignment without one.
    pub best: Option<OracleSolution>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("model has {bits} membership bits, the oracle enumerates at most {max}")]
    TooLarge { bits: usize, max: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Enumerates all membership assignments of `model`.
pub fn oracle_enumerate(model: &ConstraintModel) -> Result<OracleOutcome, OracleError> {
    let bits = model.n_lfm_vars();
    if bits > MAX_ORACLE_BITS {
        return Err(OracleError::TooLarge { bits, max: MAX_ORACLE_BITS });
    }
    let n_flows = model.n_flows();
    // Constraints become checkable once their last variable is assigned:
    // after a specific flow's column for pure-membership constraints, after
    // indicator derivation for the rest. Empty-sum constraints gate the
    // whole enumeration.
    let mut upfront: Vec<&LinearConstraint> = Vec::new();
    let mut after_column: Vec<Vec<&LinearConstraint>> = vec![Vec::new(); n_flows];
    let mut after_indicators: Vec<&LinearConstraint> = Vec::new();
    for c in model.constraints() {
        if c.terms.is_empty() {
            upfront.push(c);
        } else if c.terms.iter().any(|&(v, _)| v >= bits) {
            after_indicators.push(c);
        } else {
            let last_flow = c.terms.iter().map(|&(v, _)| v % n_flows).max().expect("non-empty");
            after_column[last_flow].push(c);
        }
    }

    let mut state = Enumerator {
        model,
        after_column,
        after_indicators,
        assignment: vec![false; model.n_vars()],
        satisfying_count: 0,
        best: None,
    };
    if upfront.iter().all(|c| holds(c, &state.assignment)) {
        state.recurse(0)?;
    }

    let best = match state.best {
        Some((assignment, objective_value)) => {
            let lfm =
                LinkFlowMembership::new(model.n_links(), n_flows, assignment[..bits].to_vec())
                    .expect("oracle assignment matches model shape");
            Some(OracleSolution { lfm, objective_value })
        }
        None => None,
    };
    Ok(OracleOutcome { satisfying_count: state.satisfying_count, best })
}

fn holds(c: &LinearConstraint, assignment: &[bool]) -> bool {
    let lhs: i64 = c.terms.iter().map(|&(v, coef)| if assignment[v] { coef } else { 0 }).sum();
    match c.op {
        CmpOp::Ge => lhs >= c.rhs,
        CmpOp::Eq => lhs == c.rhs,
    }
}

struct Enumerator<'a> {
    model: &'a ConstraintModel,
    after_column: Vec<Vec<&'a LinearConstraint>>,
    after_indicators: Vec<&'a LinearConstraint>,
    assignment: Vec<bool>,
    satisfying_count: u64,
    best: Option<(Vec<bool>, Option<Rational>)>,
}

impl Enumerator<'_> {
    fn recurse(&mut self, flow: usize) -> Result<(), OracleError> {
        let n_flows = self.model.n_flows();
        if flow == n_flows {
            return self.finalize();
        }
        let n_links = self.model.n_links();
        for column_mask in 0u64..(1u64 << n_links) {
            for l in 0..n_links {
                self.assignment[self.model.lfm_var(l, flow)] = (column_mask >> l) & 1 == 1;
            }
            if self.after_column[flow].iter().all(|c| holds(c, &self.assignment)) {
                self.recurse(flow + 1)?;
            }
        }
        // Restore the column so sibling branches start from a clean slate.
        for l in 0..n_links {
            self.assignment[self.model.lfm_var(l, flow)] = false;
        }
        Ok(())
    }

    fn finalize(&mut self) -> Result<(), OracleError> {
        for l in 0..self.model.n_links() {
            if let Some(u) = self.model.use_var(l) {
                let any =
                    (0..self.model.n_flows()).any(|j| self.assignment[self.model.lfm_var(l, j)]);
                self.assignment[u] = any;
            }
        }
        if !self.after_indicators.iter().all(|c| holds(c, &self.assignment)) {
            return Ok(());
        }
        self.satisfying_count += 1;
        match self.model.objective() {
            None => {
                if self.best.is_none() {
                    self.best = Some((self.assignment.clone(), None));
                }
            }
            Some((sense, _)) => {
                let value = self.model.evaluate_objective(&self.assignment)?;
                let improves = match &self.best {
                    None => true,
                    Some((_, prev)) => {
                        let prev = prev.expect("objective model keeps values");
                        match sense {
                            Sense::Minimize => value < prev,
                            Sense::Maximize => value > prev,
                        }
                    }
                };
                if improves {
                    self.best = Some((self.assignment.clone(), Some(value)));
                }
            }
        }
        Ok(())
    }
}
