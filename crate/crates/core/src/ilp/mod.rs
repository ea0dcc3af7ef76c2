//! Exact minimization over binary variables.
//!
//! [`solve`] runs best-first branch-and-bound. Each node's bound comes from the
//! continuous relaxation (every variable in `[0, 1]`), solved by an in-crate
//! bounded dual simplex that warm-starts from the parent's basis.

mod branch;
mod lu;
mod simplex;

use std::time::Duration;

use crate::error::SolverError;

/// Feasibility tolerance for constraint and bound comparisons.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// A linear constraint `Σ coef·var (sense) rhs`. Terms are kept sorted by
/// variable with duplicates merged.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(terms: impl IntoIterator<Item = (usize, f64)>, sense: Sense, rhs: f64) -> Self {
        let mut terms: Vec<(usize, f64)> = terms.into_iter().collect();
        terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
        for (var, coef) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == var => last.1 += coef,
                _ => merged.push((var, coef)),
            }
        }
        merged.retain(|t| t.1 != 0.0);
        Self {
            terms: merged,
            sense,
            rhs,
        }
    }

    pub fn terms(&self) -> &[(usize, f64)] {
        &self.terms
    }

    pub fn coefficient(&self, var: usize) -> f64 {
        self.terms
            .binary_search_by_key(&var, |t| t.0)
            .map(|i| self.terms[i].1)
            .unwrap_or(0.0)
    }

    pub fn activity(&self, assignment: &[bool]) -> f64 {
        self.terms.iter().filter(|(v, _)| assignment[*v]).map(|(_, c)| c).sum()
    }

    pub fn is_satisfied(&self, assignment: &[bool], tol: f64) -> bool {
        let lhs = self.activity(assignment);
        match self.sense {
            Sense::Le => lhs <= self.rhs + tol,
            Sense::Ge => lhs >= self.rhs - tol,
            Sense::Eq => (lhs - self.rhs).abs() <= tol,
        }
    }
}

/// Minimize `objective · v` over `v ∈ {0,1}^num_vars` subject to `constraints`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram01 {
    num_vars: usize,
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
}

impl LinearProgram01 {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            num_vars: objective.len(),
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn with_constraints(objective: Vec<f64>, constraints: Vec<Constraint>) -> Result<Self, SolverError> {
        let program = Self {
            num_vars: objective.len(),
            objective,
            constraints,
        };
        program.validate()?;
        Ok(program)
    }

    pub fn add_constraint(&mut self, constraint: Constraint) {
        self.constraints.push(constraint);
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(SolverError::Malformed("objective coefficients must be finite".into()));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if !c.rhs.is_finite() {
                return Err(SolverError::Malformed(format!("constraint {k}: rhs must be finite")));
            }
            for &(var, coef) in &c.terms {
                if var >= self.num_vars {
                    return Err(SolverError::Malformed(format!(
                        "constraint {k}: variable {var} out of range (num_vars = {})",
                        self.num_vars
                    )));
                }
                if !coef.is_finite() {
                    return Err(SolverError::Malformed(format!("constraint {k}: coefficients must be finite")));
                }
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, assignment: &[bool]) -> f64 {
        self.objective
            .iter()
            .zip(assignment)
            .filter(|(_, on)| **on)
            .map(|(c, _)| c)
            .sum()
    }

    pub fn is_feasible(&self, assignment: &[bool], tol: f64) -> bool {
        assignment.len() == self.num_vars && self.constraints.iter().all(|c| c.is_satisfied(assignment, tol))
    }
}

/// Returns a copy of `program` that excludes every assignment in which all of
/// `active_set` are 1: `Σ_{i ∈ active_set} v_i ≤ |active_set| − 1`.
pub fn add_blocking_constraint(program: &LinearProgram01, active_set: &[usize]) -> Result<LinearProgram01, SolverError> {
    let mut blocked = program.clone();
    block_in_place(&mut blocked, active_set)?;
    Ok(blocked)
}

/// In-place form of [`add_blocking_constraint`].
pub fn block_in_place(program: &mut LinearProgram01, active_set: &[usize]) -> Result<(), SolverError> {
    if active_set.is_empty() {
        return Err(SolverError::EmptyBlockingSet);
    }
    let mut vars = active_set.to_vec();
    vars.sort_unstable();
    vars.dedup();
    if let Some(v) = vars.iter().find(|v| **v >= program.num_vars) {
        return Err(SolverError::Malformed(format!("blocking variable {v} out of range")));
    }
    let rhs = vars.len() as f64 - 1.0;
    program.add_constraint(Constraint::new(vars.into_iter().map(|v| (v, 1.0)), Sense::Le, rhs));
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    /// The time limit expired; the assignment, if any, is the best incumbent.
    Timeout,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution01 {
    pub status: SolveStatus,
    pub assignment: Option<Vec<bool>>,
    pub objective_value: Option<f64>,
    /// Branch-and-bound nodes whose relaxation was solved.
    pub nodes: usize,
}

impl Solution01 {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    /// Indices of variables set to 1.
    pub fn active_set(&self) -> Vec<usize> {
        self.assignment
            .as_ref()
            .map(|a| a.iter().enumerate().filter(|(_, on)| **on).map(|(i, _)| i).collect())
            .unwrap_or_default()
    }
}

/// Solves `program` to global optimality, or returns the best incumbent when
/// `time_limit` expires first.
pub fn solve(program: &LinearProgram01, time_limit: Duration) -> Result<Solution01, SolverError> {
    program.validate()?;
    Ok(branch::BranchAndBound::new(program, time_limit).run())
}
