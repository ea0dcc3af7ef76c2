//! JSON shapes shared by the HTTP service and the command line.
//!
//! Feature values travel as JSON numbers (continuous) or level names
//! (categorical), keyed by feature name.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::ModelError;
use crate::model::{value_from_json, EbmModel, Instance, Prediction};
use crate::recourse::{Change, RecoursePlan};

/// A prediction flattened for display.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionJson {
    /// Raw additive scores, one per class (one for binary and regression).
    pub scores: Vec<f64>,
    /// Decision score: the raw score for binary and regression models, the
    /// winning class's raw score for multiclass.
    pub score: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<usize>,
    pub label: String,
}

impl PredictionJson {
    pub fn from_scores(model: &EbmModel, scores: Vec<f64>) -> Self {
        let prediction = model.predict_from_scores(scores.clone());
        let label = prediction.label();
        match prediction {
            Prediction::Binary { score, probability, .. } => Self {
                scores,
                score,
                probability: Some(probability),
                probabilities: None,
                class: None,
                label,
            },
            Prediction::Regression { value } => Self {
                scores,
                score: value,
                probability: None,
                probabilities: None,
                class: None,
                label,
            },
            Prediction::Multiclass { probabilities, class, .. } => Self {
                score: scores[class],
                scores,
                probability: Some(probabilities[class]),
                probabilities: Some(probabilities),
                class: Some(class),
                label,
            },
        }
    }

    pub fn of(model: &EbmModel, instance: &Instance) -> Self {
        Self::from_scores(model, model.raw_score(instance))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChangeJson {
    pub feature: String,
    pub old: Value,
    pub new: Value,
}

impl ChangeJson {
    pub fn from_change(model: &EbmModel, change: &Change) -> Self {
        let spec = model.feature(change.feature);
        Self {
            feature: spec.name.clone(),
            old: model.value_to_json(spec, change.old_value),
            new: model.value_to_json(spec, change.new_value),
        }
    }

    pub fn to_change(&self, model: &EbmModel) -> Result<Change, ModelError> {
        let feature = model
            .feature_index(&self.feature)
            .ok_or_else(|| ModelError::Instance(format!("unknown feature {}", self.feature)))?;
        let spec = model.feature(feature);
        Ok(Change {
            feature,
            old_value: value_from_json(spec, &self.old)?,
            new_value: value_from_json(spec, &self.new)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanJson {
    pub changes: Vec<ChangeJson>,
    pub distance: f64,
    pub score_gain: f64,
    pub new_prediction: PredictionJson,
    pub verified: bool,
}

impl PlanJson {
    pub fn from_plan(model: &EbmModel, plan: &RecoursePlan) -> Self {
        Self {
            changes: plan.changes.iter().map(|c| ChangeJson::from_change(model, c)).collect(),
            distance: plan.distance,
            score_gain: plan.score_gain,
            new_prediction: PredictionJson::from_scores(model, plan.new_scores.clone()),
            verified: plan.verified,
        }
    }
}

/// Plan as submitted back by a client, e.g. for a receipt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmittedPlan {
    pub changes: Vec<ChangeJson>,
    #[serde(default)]
    pub distance: Option<f64>,
}

/// Parses a name-keyed instance object.
pub fn instance_from_value(model: &EbmModel, value: &Value) -> Result<Instance, ModelError> {
    match value {
        Value::Object(map) => Instance::from_json(model, map),
        _ => Err(ModelError::Instance("instance must be a JSON object keyed by feature name".into())),
    }
}

pub fn instance_to_value(model: &EbmModel, instance: &Instance) -> Value {
    Value::Object(instance.to_json(model))
}

/// Feature metadata for clients: kinds, bins or levels, scores and training
/// statistics, plus the model digest.
pub fn model_summary(model: &EbmModel) -> Value {
    let features: Vec<Value> = model
        .features()
        .iter()
        .enumerate()
        .map(|(f, spec)| {
            let mut out = Map::new();
            out.insert("name".into(), spec.name.clone().into());
            out.insert("description".into(), spec.description.clone().map_or(Value::Null, Value::from));
            match &spec.kind {
                crate::model::FeatureKind::Continuous { cuts } => {
                    out.insert("kind".into(), "continuous".into());
                    out.insert("cuts".into(), cuts.clone().into());
                    out.insert("integer".into(), spec.is_integer_valued().into());
                    out.insert("mad".into(), model.stats().mad[f].map_or(Value::Null, Value::from));
                }
                crate::model::FeatureKind::Categorical { levels } => {
                    out.insert("kind".into(), "categorical".into());
                    out.insert("levels".into(), levels.clone().into());
                    let freq: Map<String, Value> = levels
                        .iter()
                        .map(|l| (l.clone(), model.stats().frequency(f, l).into()))
                        .collect();
                    out.insert("frequencies".into(), Value::Object(freq));
                }
            }
            out.insert("scores".into(), serde_json::to_value(&spec.scores).expect("finite scores"));
            Value::Object(out)
        })
        .collect();
    let interactions: Vec<Value> = model
        .interactions()
        .iter()
        .map(|t| {
            serde_json::json!({
                "i": t.feature_i,
                "j": t.feature_j,
                "features": [model.feature(t.feature_i).name, model.feature(t.feature_j).name],
                "table": t.table,
            })
        })
        .collect();
    serde_json::json!({
        "digest": crate::model::model_hash(model),
        "link": model.link().as_str(),
        "classes": model.num_classes(),
        "intercepts": model.intercepts(),
        "training_size": model.stats().training_size,
        "features": features,
        "interactions": interactions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::t1;
    use crate::model::FeatureValue;

    #[test]
    fn t1_prediction_payload() {
        let m = t1();
        let x = Instance::new(&m, vec![FeatureValue::Number(8.0), FeatureValue::Level(0)]).unwrap();
        let p = PredictionJson::of(&m, &x);
        assert_eq!(p.score, -1.0);
        assert!((p.probability.unwrap() - 0.268_941_421).abs() < 1e-9);
        assert_eq!(p.label, "negative");
        let v = serde_json::to_value(&p).unwrap();
        assert!(v.get("probabilities").is_none());
    }

    #[test]
    fn changes_round_trip() {
        let m = t1();
        let c = Change {
            feature: 1,
            old_value: FeatureValue::Level(0),
            new_value: FeatureValue::Level(1),
        };
        let j = ChangeJson::from_change(&m, &c);
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"feature":"B","old":"red","new":"blue"}"#);
        assert_eq!(j.to_change(&m).unwrap(), c);
        let bad = ChangeJson {
            feature: "Z".into(),
            ..j
        };
        assert!(bad.to_change(&m).is_err());
    }

    #[test]
    fn summary_lists_features_and_digest() {
        let m = t1();
        let s = model_summary(&m);
        assert_eq!(s["digest"], crate::model::model_hash(&m).as_str());
        assert_eq!(s["features"][0]["cuts"], serde_json::json!([10.0, 20.0]));
        assert_eq!(s["features"][1]["frequencies"]["blue"], 0.4);
    }
}
