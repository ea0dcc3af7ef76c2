//! Brute-force recourse: price every bin directly from the model's tables and
//! enumerate every combination of per-feature bin choices.

use recourse_core::model::FeatureKind;
use recourse_core::recourse::{Acceptable, Difficulty, Preferences, RecourseGoal};
use recourse_core::{EbmModel, FeatureValue, Instance};

use crate::ilp::ranked_blocking_values;

const MARGIN: f64 = 1e-6;

/// Price of moving one feature to one bin, and the value it is moved to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Move {
    pub bin: usize,
    pub value: FeatureValue,
    pub cost: f64,
}

/// A combination of moves that reaches the goal.
#[derive(Debug, Clone, PartialEq)]
pub struct OraclePlan {
    /// `(feature, bin)` sorted by feature.
    pub moves: Vec<(usize, usize)>,
    pub cost: f64,
}

/// Closest admissible value to `x` in `[lo, hi) ∩ [rlo, rhi]`, found by
/// checking every interval endpoint (and its integer neighbours).
fn closest_point(x: f64, lo: f64, hi: f64, rlo: f64, rhi: f64, integer: bool) -> Option<f64> {
    let below_hi = hi.next_down();
    let mut points = vec![lo, below_hi, rlo, rhi];
    if integer {
        points.extend([lo.ceil(), rlo.ceil(), rhi.floor(), below_hi.floor()]);
    }
    points
        .into_iter()
        .filter(|p| p.is_finite())
        .filter(|p| lo <= *p && *p < hi && rlo <= *p && *p <= rhi)
        .filter(|p| !integer || p.fract() == 0.0)
        .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
}

/// Moves per feature, or an empty list for features that cannot move.
///
/// Categorical costs are rescaled by the ratio of mean continuous to mean
/// categorical distance over all non-original bins, ignoring preferences.
pub fn oracle_moves(model: &EbmModel, instance: &Instance, prefs: &Preferences) -> Vec<Vec<Move>> {
    let original = model.bins_of(instance);
    let mut raw: Vec<Vec<(Move, bool)>> = Vec::new();
    let (mut cont, mut cat) = (Vec::new(), Vec::new());
    for (f, spec) in model.features().iter().enumerate() {
        let pref = prefs.feature(f);
        let mut moves = Vec::new();
        match &spec.kind {
            FeatureKind::Continuous { cuts } => {
                let x = instance.value(f).as_number().unwrap();
                let mad = model.stats().mad[f].unwrap();
                let scale = if mad > 0.0 { mad } else { 1.0 };
                let (rlo, rhi) = match pref.acceptable {
                    Acceptable::Range { lo, hi } => (lo, hi),
                    _ => (f64::NEG_INFINITY, f64::INFINITY),
                };
                for bin in 0..=cuts.len() {
                    if bin == original[f] {
                        continue;
                    }
                    let lo = if bin == 0 { f64::NEG_INFINITY } else { cuts[bin - 1] };
                    let hi = if bin == cuts.len() { f64::INFINITY } else { cuts[bin] };
                    let integer = spec.is_integer_valued();
                    let Some(free) = closest_point(x, lo, hi, f64::NEG_INFINITY, f64::INFINITY, integer) else {
                        continue;
                    };
                    cont.push((x - free).abs() / scale);
                    if let Some(p) = closest_point(x, lo, hi, rlo, rhi, integer) {
                        let m = Move {
                            bin,
                            value: FeatureValue::Number(p),
                            cost: (x - p).abs() / scale,
                        };
                        moves.push((m, false));
                    }
                }
            }
            FeatureKind::Categorical { levels } => {
                for (bin, level) in levels.iter().enumerate() {
                    if bin == original[f] {
                        continue;
                    }
                    let freq = model.stats().frequencies[f].get(level).copied().unwrap_or(0.0);
                    cat.push(1.0 - freq);
                    let allowed = match &pref.acceptable {
                        Acceptable::Levels(set) => set.contains(&bin),
                        _ => true,
                    };
                    if allowed {
                        let m = Move {
                            bin,
                            value: FeatureValue::Level(bin),
                            cost: 1.0 - freq,
                        };
                        moves.push((m, true));
                    }
                }
            }
        }
        raw.push(moves);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let weight = if !cont.is_empty() && !cat.is_empty() && mean(&cat) > 0.0 {
        mean(&cont) / mean(&cat)
    } else {
        1.0
    };
    raw.into_iter()
        .enumerate()
        .map(|(f, moves)| {
            let d = prefs.feature(f).difficulty;
            if d == Difficulty::Impossible {
                return Vec::new();
            }
            let mult = d.multiplier();
            moves
                .into_iter()
                .map(|(mut m, categorical)| {
                    if categorical {
                        m.cost *= weight;
                    }
                    m.cost *= mult;
                    m
                })
                .collect()
        })
        .collect()
}

/// Goal test with the strict margin used by the exact search.
pub fn meets_with_margin(goal: &RecourseGoal, scores: &[f64]) -> bool {
    match *goal {
        RecourseGoal::ToPositive => scores[0] >= 0.0,
        RecourseGoal::ToNegative => scores[0] <= -MARGIN,
        RecourseGoal::RegressionRange { lo, hi } => lo <= scores[0] && scores[0] <= hi,
        RecourseGoal::MulticlassTarget { target } => scores
            .iter()
            .enumerate()
            .all(|(j, s)| j == target || scores[target] - s >= MARGIN),
    }
}

/// Every combination of moves, at most one per feature and at most
/// `prefs.max_features` in total, that reaches the goal; cheapest first.
pub fn enumerate_plans(model: &EbmModel, instance: &Instance, goal: &RecourseGoal, prefs: &Preferences) -> Vec<OraclePlan> {
    let moves = oracle_moves(model, instance, prefs);
    let original = model.bins_of(instance);
    let mut out = Vec::new();
    let mut choice = vec![None::<usize>; moves.len()];
    loop {
        let count = choice.iter().filter(|c| c.is_some()).count();
        if count > 0 && count <= prefs.max_features {
            let mut bins = original.clone();
            let mut cost = 0.0;
            let mut plan_moves = Vec::with_capacity(count);
            for (f, c) in choice.iter().enumerate() {
                if let Some(k) = c {
                    let m = moves[f][*k];
                    bins[f] = m.bin;
                    cost += m.cost;
                    plan_moves.push((f, m.bin));
                }
            }
            if meets_with_margin(goal, &model.raw_score_of_bins(&bins)) {
                out.push(OraclePlan { moves: plan_moves, cost });
            }
        }
        // Odometer over (stay, move 0, move 1, ...) per feature.
        let mut f = 0;
        loop {
            if f == moves.len() {
                out.sort_by(|a, b| a.cost.total_cmp(&b.cost));
                return out;
            }
            choice[f] = match choice[f] {
                None if !moves[f].is_empty() => Some(0),
                Some(k) if k + 1 < moves[f].len() => Some(k + 1),
                _ => None,
            };
            if choice[f].is_some() {
                break;
            }
            f += 1;
        }
    }
}

/// Cheapest plan cost, or `None` when no combination reaches the goal.
pub fn oracle_minimum(model: &EbmModel, instance: &Instance, goal: &RecourseGoal, prefs: &Preferences) -> Option<f64> {
    enumerate_plans(model, instance, goal, prefs).first().map(|p| p.cost)
}

/// Costs the first `k` rounds of solve-and-block must produce.
pub fn oracle_top_k(model: &EbmModel, instance: &Instance, goal: &RecourseGoal, prefs: &Preferences, k: usize) -> Vec<f64> {
    let plans = enumerate_plans(model, instance, goal, prefs);
    let width = model.features().iter().map(|f| f.num_bins()).max().unwrap_or(1);
    let candidates: Vec<(Vec<usize>, f64)> = plans
        .iter()
        .map(|p| (p.moves.iter().map(|(f, b)| f * width + b).collect(), p.cost))
        .collect();
    ranked_blocking_values(&candidates, k)
}
