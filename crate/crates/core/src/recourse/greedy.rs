//! Greedy heuristic baseline over the same candidate bins as the exact search.

use crate::distance::build_distance_table;
use crate::error::RecourseError;
use crate::model::{EbmModel, Instance};

use super::goal::RecourseGoal;
use super::plan::{Change, RecoursePlan};
use super::prefs::Preferences;

/// Repeatedly applies the cheapest single-bin change, among features not yet
/// changed, that strictly reduces the goal violation. Returns `Ok(None)` when
/// it gets stuck or hits the feature cap before the goal holds.
pub fn greedy_plan(
    model: &EbmModel,
    instance: &Instance,
    goal: &RecourseGoal,
    prefs: &Preferences,
) -> Result<Option<RecoursePlan>, RecourseError> {
    super::check_request(model, instance, goal, prefs)?;
    let table = build_distance_table(model, instance, prefs);
    let mut bins = model.bins_of(instance);
    let mut changed = vec![false; bins.len()];
    let mut changes = Vec::new();
    let mut distance = 0.0;
    let mut violation = goal.violation(&model.raw_score_of_bins(&bins));

    while violation > 0.0 {
        if changes.len() >= prefs.max_features {
            return Ok(None);
        }
        let mut best: Option<(f64, usize, usize, f64)> = None;
        for (feature, entry) in table.candidates() {
            if changed[feature] {
                continue;
            }
            let previous = std::mem::replace(&mut bins[feature], entry.bin);
            let v = goal.violation(&model.raw_score_of_bins(&bins));
            bins[feature] = previous;
            if v < violation && best.is_none_or(|(cost, ..)| entry.effective < cost) {
                best = Some((entry.effective, feature, entry.bin, v));
            }
        }
        let Some((cost, feature, bin, v)) = best else {
            return Ok(None);
        };
        bins[feature] = bin;
        changed[feature] = true;
        distance += cost;
        violation = v;
        changes.push(Change {
            feature,
            old_value: instance.value(feature),
            new_value: table.entry(feature, bin).representative.expect("candidate bins have a representative"),
        });
    }

    let plan = RecoursePlan::from_changes(model, instance, goal, changes, distance);
    Ok(plan.verified.then_some(plan))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::t1;
    use crate::model::FeatureValue;

    #[test]
    fn t1_greedy_trace() {
        let m = t1();
        let x = Instance::new(&m, vec![FeatureValue::Number(8.0), FeatureValue::Level(0)]).unwrap();
        let prefs = Preferences::neutral(&m);
        // Cheapest improving move is A→10 (cost 1, score −0.5), then the
        // cheapest remaining improving move is B→blue (cost 3.5, score 0.3).
        let plan = greedy_plan(&m, &x, &RecourseGoal::ToPositive, &prefs).unwrap().unwrap();
        assert!((plan.distance - 4.5).abs() < 1e-12);
        assert_eq!(plan.changed_features(), vec![0, 1]);

        // With one change allowed the first greedy step cannot finish.
        let capped = prefs.with_max_features(1);
        assert!(greedy_plan(&m, &x, &RecourseGoal::ToPositive, &capped).unwrap().is_none());
    }
}
