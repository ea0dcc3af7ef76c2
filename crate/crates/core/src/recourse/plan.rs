//! Recourse plans and their verification by re-running the model.

use crate::distance::{build_distance_table, categorical_distance, continuous_distance, DistanceTable};
use crate::model::{EbmModel, FeatureKind, FeatureValue, Instance, Prediction};

use super::goal::RecourseGoal;
use super::prefs::{Difficulty, Preferences};

#[derive(Debug, Clone, PartialEq)]
pub struct Change {
    pub feature: usize,
    pub old_value: FeatureValue,
    pub new_value: FeatureValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoursePlan {
    /// Sorted by feature index.
    pub changes: Vec<Change>,
    /// Total effective distance of the changes.
    pub distance: f64,
    /// Change of the goal's score (class 0, or the target class).
    pub score_gain: f64,
    pub new_scores: Vec<f64>,
    pub new_prediction: Prediction,
    pub verified: bool,
}

impl RecoursePlan {
    /// Builds a plan by applying `changes` to `instance`. Scores, prediction
    /// and verification come from re-running the model.
    pub fn from_changes(
        model: &EbmModel,
        instance: &Instance,
        goal: &RecourseGoal,
        mut changes: Vec<Change>,
        distance: f64,
    ) -> Self {
        changes.sort_by_key(|c| c.feature);
        let old_scores = model.raw_score(instance);
        let new_scores = model.raw_score(&apply_changes(instance, &changes));
        let class = goal.reported_class();
        let mut plan = RecoursePlan {
            score_gain: new_scores[class] - old_scores[class],
            new_prediction: model.predict_from_scores(new_scores.clone()),
            new_scores,
            changes,
            distance,
            verified: false,
        };
        verify_plan(model, instance, &mut plan, goal);
        plan
    }

    pub fn changed_features(&self) -> Vec<usize> {
        self.changes.iter().map(|c| c.feature).collect()
    }
}

pub fn apply_changes(instance: &Instance, changes: &[Change]) -> Instance {
    changes
        .iter()
        .fold(instance.clone(), |acc, c| acc.with_value(c.feature, c.new_value))
}

/// Re-runs the model on the changed instance and records whether the goal
/// holds. A plan without changes never verifies.
pub fn verify_plan(model: &EbmModel, instance: &Instance, plan: &mut RecoursePlan, goal: &RecourseGoal) -> bool {
    let ok = !plan.changes.is_empty() && goal.is_met(&model.raw_score(&apply_changes(instance, &plan.changes)));
    plan.verified = ok;
    ok
}

/// Reasons a submitted plan is rejected by [`audit_plan`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AuditError {
    #[error("plan has no changes")]
    Empty,
    #[error("feature {0} changed more than once")]
    Duplicate(String),
    #[error("{feature}: old value does not match the instance")]
    OldValueMismatch { feature: String },
    #[error("{feature}: new value stays in the original bin")]
    NoMove { feature: String },
    #[error("{feature}: new value is not valid for the feature")]
    BadValue { feature: String },
    #[error("{feature}: feature is marked impossible to change")]
    Impossible { feature: String },
    #[error("{feature}: new value is outside the acceptable range")]
    OutOfRange { feature: String },
    #[error("plan changes {count} features, more than the cap of {max}")]
    TooManyChanges { count: usize, max: usize },
    #[error("plan does not reach the goal")]
    GoalNotMet,
    #[error("claimed distance {claimed} differs from recomputed distance {actual}")]
    DistanceMismatch { claimed: f64, actual: f64 },
}

/// Distance of moving `feature` from its value in `instance` to `value`,
/// priced like the distance table prices a bin's representative value.
pub fn change_cost(model: &EbmModel, instance: &Instance, table: &DistanceTable, feature: usize, value: FeatureValue) -> f64 {
    let spec = model.feature(feature);
    let multiplier = table.features[feature].multiplier;
    let base = match (&spec.kind, instance.value(feature), value) {
        (FeatureKind::Continuous { .. }, FeatureValue::Number(x), FeatureValue::Number(c)) => {
            let mad = model.stats().mad[feature].unwrap_or(1.0);
            continuous_distance(x, c, if mad > 0.0 { mad } else { 1.0 })
        }
        (FeatureKind::Categorical { levels }, _, FeatureValue::Level(l)) => {
            categorical_distance(model.stats().frequency(feature, &levels[l])) * table.categorical_weight
        }
        _ => f64::NAN,
    };
    base * multiplier
}

/// Checks a plan produced elsewhere against `instance`, `goal` and `prefs`
/// and recomputes its distance and prediction. With `claimed_distance`, also
/// requires it to match the recomputed distance to 1e-6 relative.
pub fn audit_plan(
    model: &EbmModel,
    instance: &Instance,
    goal: &RecourseGoal,
    prefs: &Preferences,
    changes: Vec<Change>,
    claimed_distance: Option<f64>,
) -> Result<RecoursePlan, AuditError> {
    if changes.is_empty() {
        return Err(AuditError::Empty);
    }
    if changes.len() > prefs.max_features {
        return Err(AuditError::TooManyChanges {
            count: changes.len(),
            max: prefs.max_features,
        });
    }
    let table = build_distance_table(model, instance, prefs);
    let mut seen = vec![false; model.features().len()];
    let mut distance = 0.0;
    for c in &changes {
        let name = || model.feature(c.feature).name.clone();
        if c.feature >= seen.len() {
            return Err(AuditError::BadValue {
                feature: format!("#{}", c.feature),
            });
        }
        if std::mem::replace(&mut seen[c.feature], true) {
            return Err(AuditError::Duplicate(name()));
        }
        if c.old_value != instance.value(c.feature) {
            return Err(AuditError::OldValueMismatch { feature: name() });
        }
        let new_bin = model
            .bin_index(c.feature, c.new_value)
            .map_err(|_| AuditError::BadValue { feature: name() })?;
        if matches!(c.new_value, FeatureValue::Number(v) if !v.is_finite()) {
            return Err(AuditError::BadValue { feature: name() });
        }
        if new_bin == table.features[c.feature].original_bin {
            return Err(AuditError::NoMove { feature: name() });
        }
        let pref = prefs.feature(c.feature);
        if pref.difficulty == Difficulty::Impossible {
            return Err(AuditError::Impossible { feature: name() });
        }
        if !pref.acceptable.allows(c.new_value) {
            return Err(AuditError::OutOfRange { feature: name() });
        }
        distance += change_cost(model, instance, &table, c.feature, c.new_value);
    }
    if let Some(claimed) = claimed_distance {
        if !((claimed - distance).abs() <= 1e-6 * distance.abs().max(1.0)) {
            return Err(AuditError::DistanceMismatch {
                claimed,
                actual: distance,
            });
        }
    }
    let plan = RecoursePlan::from_changes(model, instance, goal, changes, distance);
    if !plan.verified {
        return Err(AuditError::GoalNotMet);
    }
    Ok(plan)
}
