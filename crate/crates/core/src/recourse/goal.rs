//! What a plan must achieve.

use serde::{Deserialize, Serialize};

use crate::error::RecourseError;
use crate::model::{argmax, EbmModel, Link};

/// Margin used to express strict score inequalities as `≤ rhs − ε`.
pub const STRICT_MARGIN: f64 = 1e-6;

/// Target outcome of a recourse plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GoalSpec", into = "GoalSpec")]
pub enum RecourseGoal {
    /// Binary model: reach score ≥ 0.
    ToPositive,
    /// Binary model: reach score < 0.
    ToNegative,
    /// Regression model: land in `[lo, hi]`; one side may be infinite.
    RegressionRange { lo: f64, hi: f64 },
    /// Multiclass model: make `target` the predicted class.
    MulticlassTarget { target: usize },
}

impl RecourseGoal {
    pub fn regression(lo: Option<f64>, hi: Option<f64>) -> Self {
        RecourseGoal::RegressionRange {
            lo: lo.unwrap_or(f64::NEG_INFINITY),
            hi: hi.unwrap_or(f64::INFINITY),
        }
    }

    /// The goal that flips a binary decision; `None` for other links, whose
    /// goals must be stated.
    pub fn flip(model: &EbmModel, scores: &[f64]) -> Option<Self> {
        match model.link() {
            Link::Logit if scores[0] >= 0.0 => Some(RecourseGoal::ToNegative),
            Link::Logit => Some(RecourseGoal::ToPositive),
            _ => None,
        }
    }

    /// Short text form, e.g. `to-positive`, `regression [5, inf]`, `class 2`.
    pub fn describe(&self) -> String {
        match self {
            RecourseGoal::ToPositive => "to-positive".into(),
            RecourseGoal::ToNegative => "to-negative".into(),
            RecourseGoal::RegressionRange { lo, hi } => {
                format!("regression-range [{}, {}]", crate::format::sig9(*lo), crate::format::sig9(*hi))
            }
            RecourseGoal::MulticlassTarget { target } => format!("multiclass-target {target}"),
        }
    }

    /// Checks the goal fits the model's link and is well formed.
    pub fn validate(&self, model: &EbmModel) -> Result<(), RecourseError> {
        let invalid = |msg: String| Err(RecourseError::InvalidGoal(msg));
        match (self, model.link()) {
            (RecourseGoal::ToPositive | RecourseGoal::ToNegative, Link::Logit) => Ok(()),
            (RecourseGoal::RegressionRange { lo, hi }, Link::Identity) => {
                if lo.is_nan() || hi.is_nan() || lo > hi {
                    invalid(format!("empty range [{lo}, {hi}]"))
                } else if lo.is_infinite() && hi.is_infinite() {
                    invalid("at least one range bound must be finite".into())
                } else {
                    Ok(())
                }
            }
            (RecourseGoal::MulticlassTarget { target }, Link::Softmax) => {
                if *target >= model.num_classes() {
                    invalid(format!("target class {target} out of range (model has {} classes)", model.num_classes()))
                } else {
                    Ok(())
                }
            }
            (goal, link) => invalid(format!("goal {} does not apply to a {link} model", goal.describe())),
        }
    }

    /// Whether raw scores meet the goal exactly (the decision rule of the model).
    pub fn is_met(&self, scores: &[f64]) -> bool {
        match *self {
            RecourseGoal::ToPositive => scores[0] >= 0.0,
            RecourseGoal::ToNegative => scores[0] < 0.0,
            RecourseGoal::RegressionRange { lo, hi } => lo <= scores[0] && scores[0] <= hi,
            RecourseGoal::MulticlassTarget { target } => argmax(scores) == target,
        }
    }

    /// How far raw scores are from meeting the goal with the strict margin;
    /// zero exactly when the program's goal rows hold.
    pub fn violation(&self, scores: &[f64]) -> f64 {
        match *self {
            RecourseGoal::ToPositive => (-scores[0]).max(0.0),
            RecourseGoal::ToNegative => (scores[0] + STRICT_MARGIN).max(0.0),
            RecourseGoal::RegressionRange { lo, hi } => (lo - scores[0]).max(0.0) + (scores[0] - hi).max(0.0),
            RecourseGoal::MulticlassTarget { target } => scores
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != target)
                .map(|(_, s)| (s - scores[target] + STRICT_MARGIN).max(0.0))
                .sum(),
        }
    }

    /// Sign of the score change that always helps, for one-directional goals.
    pub fn direction(&self) -> Option<f64> {
        match *self {
            RecourseGoal::ToPositive => Some(1.0),
            RecourseGoal::ToNegative => Some(-1.0),
            RecourseGoal::RegressionRange { lo, hi } if hi == f64::INFINITY && lo.is_finite() => Some(1.0),
            RecourseGoal::RegressionRange { lo, hi } if lo == f64::NEG_INFINITY && hi.is_finite() => Some(-1.0),
            _ => None,
        }
    }

    /// Class whose score change is reported as a plan's score gain.
    pub fn reported_class(&self) -> usize {
        match *self {
            RecourseGoal::MulticlassTarget { target } => target,
            _ => 0,
        }
    }
}

/// JSON form: `{"kind": "to-positive"}`, `{"kind": "regression-range", "range": [5, null]}`,
/// `{"kind": "multiclass-target", "target_class": 2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalSpec {
    pub kind: GoalKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[Option<f64>; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_class: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GoalKind {
    ToPositive,
    ToNegative,
    RegressionRange,
    MulticlassTarget,
}

impl TryFrom<GoalSpec> for RecourseGoal {
    type Error = String;

    fn try_from(spec: GoalSpec) -> Result<Self, Self::Error> {
        match (spec.kind, spec.range, spec.target_class) {
            (GoalKind::ToPositive, None, None) => Ok(RecourseGoal::ToPositive),
            (GoalKind::ToNegative, None, None) => Ok(RecourseGoal::ToNegative),
            (GoalKind::RegressionRange, Some([lo, hi]), None) => Ok(RecourseGoal::regression(lo, hi)),
            (GoalKind::RegressionRange, None, _) => Err("regression-range goal needs \"range\": [lo, hi]".into()),
            (GoalKind::MulticlassTarget, None, Some(target)) => Ok(RecourseGoal::MulticlassTarget { target }),
            (GoalKind::MulticlassTarget, _, None) => Err("multiclass-target goal needs \"target_class\"".into()),
            _ => Err("goal carries fields that do not belong to its kind".into()),
        }
    }
}

impl From<RecourseGoal> for GoalSpec {
    fn from(goal: RecourseGoal) -> Self {
        let finite = |v: f64| v.is_finite().then_some(v);
        match goal {
            RecourseGoal::ToPositive => GoalSpec {
                kind: GoalKind::ToPositive,
                range: None,
                target_class: None,
            },
            RecourseGoal::ToNegative => GoalSpec {
                kind: GoalKind::ToNegative,
                range: None,
                target_class: None,
            },
            RecourseGoal::RegressionRange { lo, hi } => GoalSpec {
                kind: GoalKind::RegressionRange,
                range: Some([finite(lo), finite(hi)]),
                target_class: None,
            },
            RecourseGoal::MulticlassTarget { target } => GoalSpec {
                kind: GoalKind::MulticlassTarget,
                range: None,
                target_class: Some(target),
            },
        }
    }
}
