//! Best-first branch-and-bound with an initial depth-first dive.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use super::simplex::{BasisSnapshot, DualSimplex, LpMatrix, LpStatus};
use super::{LinearProgram01, Solution01, SolveStatus, FEASIBILITY_TOL};

const INTEGRALITY_TOL: f64 = 1e-9;
/// Nodes whose bound is within this of the incumbent cannot improve it meaningfully.
const PRUNE_TOL: f64 = 1e-9;

struct Node {
    bound: f64,
    seq: u64,
    fixes: Vec<(u32, bool)>,
    basis: Arc<BasisSnapshot>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // BinaryHeap pops the greatest element: lowest bound first, then oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

enum Outcome {
    Done,
    Branch { var: usize, up_first: bool, bound: f64, basis: Arc<BasisSnapshot> },
    TimeLimit,
}

pub(crate) struct BranchAndBound<'p> {
    program: &'p LinearProgram01,
    deadline: Instant,
    incumbent: Option<(Vec<bool>, f64)>,
    seq: u64,
    nodes: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl<'p> BranchAndBound<'p> {
    pub(crate) fn new(program: &'p LinearProgram01, time_limit: Duration) -> Self {
        let n = program.num_vars();
        let now = Instant::now();
        Self {
            program,
            deadline: now.checked_add(time_limit).unwrap_or(now + Duration::from_secs(86_400 * 365)),
            incumbent: None,
            seq: 0,
            nodes: 0,
            lower: vec![0.0; n],
            upper: vec![1.0; n],
        }
    }

    pub(crate) fn run(mut self) -> Solution01 {
        let lp = LpMatrix::from_program(self.program);
        let mut simplex = DualSimplex::new(&lp);
        let mut heap = BinaryHeap::new();
        let mut dive: Vec<Node> = vec![self.node(f64::NEG_INFINITY, Vec::new(), Arc::default())];
        let mut timed_out = false;

        loop {
            let node = if self.incumbent.is_none() {
                match dive.pop().or_else(|| heap.pop()) {
                    Some(n) => n,
                    None => break,
                }
            } else {
                heap.extend(dive.drain(..));
                match heap.pop() {
                    Some(n) => n,
                    None => break,
                }
            };
            if self.pruned(node.bound) {
                continue;
            }
            if Instant::now() >= self.deadline {
                timed_out = true;
                break;
            }
            match self.process(&mut simplex, &node) {
                Outcome::Done => {}
                Outcome::TimeLimit => {
                    timed_out = true;
                    break;
                }
                Outcome::Branch {
                    var,
                    up_first,
                    bound,
                    basis,
                } => {
                    let mut down = node.fixes.clone();
                    down.push((var as u32, false));
                    let mut up = node.fixes;
                    up.push((var as u32, true));
                    let (first, second) = if up_first { (up, down) } else { (down, up) };
                    let second = self.node(bound, second, basis.clone());
                    let first = self.node(bound, first, basis);
                    heap.push(second);
                    if self.incumbent.is_none() {
                        dive.push(first);
                    } else {
                        heap.push(first);
                    }
                }
            }
        }

        let (assignment, objective_value) = match self.incumbent {
            Some((a, v)) => (Some(a), Some(v)),
            None => (None, None),
        };
        let status = if timed_out {
            SolveStatus::Timeout
        } else if assignment.is_some() {
            SolveStatus::Optimal
        } else {
            SolveStatus::Infeasible
        };
        Solution01 {
            status,
            assignment,
            objective_value,
            nodes: self.nodes,
        }
    }

    fn node(&mut self, bound: f64, fixes: Vec<(u32, bool)>, basis: Arc<BasisSnapshot>) -> Node {
        self.seq += 1;
        Node {
            bound,
            seq: self.seq,
            fixes,
            basis,
        }
    }

    fn cutoff(&self) -> f64 {
        match &self.incumbent {
            Some((_, v)) => v - PRUNE_TOL,
            None => f64::INFINITY,
        }
    }

    fn pruned(&self, bound: f64) -> bool {
        bound >= self.cutoff()
    }

    fn process(&mut self, simplex: &mut DualSimplex<'_>, node: &Node) -> Outcome {
        self.lower.fill(0.0);
        self.upper.fill(1.0);
        for &(var, value) in &node.fixes {
            let v = if value { 1.0 } else { 0.0 };
            self.lower[var as usize] = v;
            self.upper[var as usize] = v;
        }
        self.nodes += 1;
        let result = simplex.solve(&self.lower, &self.upper, &node.basis, self.cutoff(), self.deadline);
        match result.status {
            LpStatus::Infeasible | LpStatus::Cutoff => return Outcome::Done,
            LpStatus::TimeLimit => return Outcome::TimeLimit,
            LpStatus::Failed => {
                // Without a trustworthy bound, keep splitting on the first free variable.
                log::debug!("relaxation failed at depth {}; branching without a bound", node.fixes.len());
                return match (0..self.lower.len()).find(|&j| self.lower[j] != self.upper[j]) {
                    Some(var) => Outcome::Branch {
                        var,
                        up_first: false,
                        bound: node.bound,
                        basis: Arc::default(),
                    },
                    None => {
                        let assignment: Vec<bool> = self.lower.iter().map(|v| *v > 0.5).collect();
                        self.offer(assignment);
                        Outcome::Done
                    }
                };
            }
            LpStatus::Optimal => {}
        }
        if self.pruned(result.objective) {
            return Outcome::Done;
        }

        let mut branch: Option<(usize, f64)> = None;
        for (j, &v) in result.x.iter().enumerate() {
            let frac = v.min(1.0 - v);
            if frac > INTEGRALITY_TOL && branch.is_none_or(|(_, best)| frac > best) {
                branch = Some((j, frac));
            }
        }
        let basis = Arc::new(result.basis);
        match branch {
            Some((var, _)) => Outcome::Branch {
                var,
                up_first: result.x[var] >= 0.5,
                bound: result.objective,
                basis,
            },
            None => {
                let assignment: Vec<bool> = result.x.iter().map(|v| *v > 0.5).collect();
                if self.offer(assignment) {
                    return Outcome::Done;
                }
                // Rounded point misses a constraint by more than the tolerance.
                match (0..self.lower.len()).find(|&j| self.lower[j] != self.upper[j]) {
                    Some(var) => Outcome::Branch {
                        var,
                        up_first: result.x[var] >= 0.5,
                        bound: result.objective,
                        basis,
                    },
                    None => Outcome::Done,
                }
            }
        }
    }

    /// Records `assignment` as the incumbent if it is feasible and better.
    fn offer(&mut self, assignment: Vec<bool>) -> bool {
        if !self.program.is_feasible(&assignment, FEASIBILITY_TOL) {
            return false;
        }
        let value = self.program.objective_value(&assignment);
        if self.incumbent.as_ref().is_none_or(|(_, best)| value < *best) {
            self.incumbent = Some((assignment, value));
        }
        true
    }
}
