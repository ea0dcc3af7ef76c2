//! Minimum-distance recourse plans.
//!
//! [`generate_plans`] turns a model, an instance, a goal and the user's
//! preferences into a 0-1 program whose variables select new bins, solves it,
//! re-checks the answer against the model, blocks the answer's set of bins and
//! solves again, up to `k` times.

mod gains;
mod goal;
mod greedy;
mod plan;
mod prefs;
mod program;

use std::time::{Duration, Instant};

pub use gains::{compute_gains, GainTables};
pub use goal::{GoalKind, GoalSpec, RecourseGoal, STRICT_MARGIN};
pub use greedy::greedy_plan;
pub use plan::{apply_changes, audit_plan, change_cost, verify_plan, AuditError, Change, RecoursePlan};
pub use prefs::{
    Acceptable, Difficulty, FeaturePreference, FeaturePreferenceSpec, PreferenceSpec, Preferences,
    DEFAULT_MAX_FEATURES,
};
pub use program::{build_program, enumerate_candidates, BinVar, PairVar, RecourseProgram};

use crate::distance::build_distance_table;
use crate::error::RecourseError;
use crate::ilp::{block_in_place, solve, SolveStatus};
use crate::model::{EbmModel, Instance};

/// Default number of plans.
pub const DEFAULT_K: usize = 5;
/// Solutions that fail re-verification tolerated per request before giving up.
const MAX_REJECTED: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanOptions {
    pub k: usize,
    /// Budget for the whole request, across all solves.
    pub time_limit: Duration,
    /// Thin the candidate bins first; see [`enumerate_candidates`].
    pub fast: bool,
}

impl Default for PlanOptions {
    fn default() -> Self {
        Self {
            k: DEFAULT_K,
            time_limit: Duration::from_secs(10),
            fast: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanSet {
    /// Verified plans in non-decreasing distance.
    pub plans: Vec<RecoursePlan>,
    /// The time limit expired; `plans` holds what was found until then.
    pub timed_out: bool,
    /// Why fewer plans than requested came back, when known.
    pub reason: Option<String>,
    /// Candidate bins in the program.
    pub candidates: usize,
    /// Branch-and-bound nodes over all solves.
    pub nodes: usize,
}

/// Validates preferences and goal, and rejects goals the instance already meets.
pub(crate) fn check_request(
    model: &EbmModel,
    instance: &Instance,
    goal: &RecourseGoal,
    prefs: &Preferences,
) -> Result<(), RecourseError> {
    prefs.validate(model)?;
    goal.validate(model)?;
    if goal.is_met(&model.raw_score(instance)) {
        return Err(RecourseError::GoalAlreadySatisfied);
    }
    Ok(())
}

/// Up to `options.k` distinct verified plans, cheapest first.
///
/// Each round blocks the set of bins chosen by the previous round, which also
/// rules out every plan containing all of those bin changes. Fewer plans come
/// back when the program runs out of solutions or the time limit expires; an
/// empty set carries a reason.
pub fn generate_plans(
    model: &EbmModel,
    instance: &Instance,
    goal: &RecourseGoal,
    prefs: &Preferences,
    options: &PlanOptions,
) -> Result<PlanSet, RecourseError> {
    check_request(model, instance, goal, prefs)?;
    let start = Instant::now();
    let gains = compute_gains(model, instance);
    let mut table = build_distance_table(model, instance, prefs);
    if options.fast {
        program::filter_candidates(&mut table, &gains, model, goal);
    }
    let mut set = PlanSet {
        plans: Vec::new(),
        timed_out: false,
        reason: None,
        candidates: table.candidates().count(),
        nodes: 0,
    };
    let mut rp = match build_program(model, instance, goal, prefs, &table, &gains) {
        Ok(rp) => rp,
        Err(RecourseError::NoCandidates(why)) => {
            set.reason = Some(format!("no candidate changes: {why}"));
            return Ok(set);
        }
        Err(e) => return Err(e),
    };

    let mut rejected = 0;
    while set.plans.len() < options.k {
        let remaining = options.time_limit.saturating_sub(start.elapsed());
        let solution = solve(&rp.program, remaining)?;
        set.nodes += solution.nodes;
        if solution.status == SolveStatus::Timeout {
            set.timed_out = true;
        }
        let Some(assignment) = solution.assignment else {
            if solution.status == SolveStatus::Infeasible && set.plans.is_empty() {
                set.reason = Some("no combination of allowed changes reaches the goal".into());
            }
            break;
        };
        let support = rp.bin_support(&assignment);
        if support.is_empty() {
            break;
        }
        let changes: Vec<Change> = support
            .iter()
            .map(|&v| {
                let BinVar { feature, bin } = rp.bins[v];
                Change {
                    feature,
                    old_value: instance.value(feature),
                    new_value: table.entry(feature, bin).representative.expect("candidate bins have a representative"),
                }
            })
            .collect();
        let distance = support.iter().map(|&v| rp.program.objective()[v]).sum();
        let plan = RecoursePlan::from_changes(model, instance, goal, changes, distance);
        block_in_place(&mut rp.program, &support)?;
        if plan.verified {
            set.plans.push(plan);
        } else {
            rejected += 1;
            log::debug!("solution {support:?} failed re-verification; blocked");
            if rejected >= MAX_REJECTED {
                set.reason = Some(format!("{rejected} solutions failed re-verification"));
                break;
            }
        }
        if set.timed_out {
            break;
        }
    }
    if set.timed_out && set.plans.is_empty() {
        set.reason = Some("time limit reached before any plan was found".into());
    }
    set.plans.sort_by(|a, b| a.distance.total_cmp(&b.distance));
    Ok(set)
}
