//! Additive model representation and inference.
//!
//! A model is a sum of per-feature lookup histograms, pairwise lookup tables
//! and an intercept, followed by a link function. Continuous features are
//! bucketed into half-open intervals `[cut_k, cut_{k+1})`; the first bin is
//! open below and the last open above, so every real value has a bin.

mod document;

pub use document::{load_model, load_model_str, model_hash, serialize_model, ModelDocument};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Link function applied to the additive score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Link {
    Logit,
    Identity,
    Softmax,
}

impl Link {
    pub fn as_str(self) -> &'static str {
        match self {
            Link::Logit => "logit",
            Link::Identity => "identity",
            Link::Softmax => "softmax",
        }
    }
}

/// Value-rounding hint for continuous features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    #[default]
    None,
    IntegerValued,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureKind {
    Continuous { cuts: Vec<f64> },
    Categorical { levels: Vec<String> },
}

/// One main-effect shape function.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpec {
    pub name: String,
    pub description: Option<String>,
    pub kind: FeatureKind,
    /// Per-bin additive scores, one entry per class.
    pub scores: Vec<Vec<f64>>,
    pub transform: Transform,
}

impl FeatureSpec {
    pub fn num_bins(&self) -> usize {
        match &self.kind {
            FeatureKind::Continuous { cuts } => cuts.len() + 1,
            FeatureKind::Categorical { levels } => levels.len(),
        }
    }

    pub fn is_continuous(&self) -> bool {
        matches!(self.kind, FeatureKind::Continuous { .. })
    }

    pub fn is_integer_valued(&self) -> bool {
        self.transform == Transform::IntegerValued
    }

    /// Lower and upper edge of a continuous bin. Outer bins are unbounded.
    pub fn bin_edges(&self, bin: usize) -> Option<(f64, f64)> {
        match &self.kind {
            FeatureKind::Continuous { cuts } if bin <= cuts.len() => {
                let lower = if bin == 0 { f64::NEG_INFINITY } else { cuts[bin - 1] };
                let upper = cuts.get(bin).copied().unwrap_or(f64::INFINITY);
                Some((lower, upper))
            }
            _ => None,
        }
    }

    pub fn level_index(&self, level: &str) -> Option<usize> {
        match &self.kind {
            FeatureKind::Categorical { levels } => levels.iter().position(|l| l == level),
            FeatureKind::Continuous { .. } => None,
        }
    }

    pub fn level_name(&self, index: usize) -> Option<&str> {
        match &self.kind {
            FeatureKind::Categorical { levels } => levels.get(index).map(String::as_str),
            FeatureKind::Continuous { .. } => None,
        }
    }
}

/// Pairwise interaction lookup table, indexed `[bin of i][bin of j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionTerm {
    pub feature_i: usize,
    pub feature_j: usize,
    pub table: Vec<Vec<f64>>,
}

impl InteractionTerm {
    pub fn touches(&self, feature: usize) -> bool {
        self.feature_i == feature || self.feature_j == feature
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainingStats {
    /// Median absolute deviation per feature; `None` for categorical features.
    pub mad: Vec<Option<f64>>,
    /// Level frequencies per feature; empty for continuous features.
    pub frequencies: Vec<BTreeMap<String, f64>>,
    pub training_size: u64,
}

impl TrainingStats {
    /// Training frequency of a level; levels never seen in training have frequency 0.
    pub fn frequency(&self, feature: usize, level: &str) -> f64 {
        self.frequencies
            .get(feature)
            .and_then(|m| m.get(level))
            .copied()
            .unwrap_or(0.0)
    }
}

/// A validated generalized additive model. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct EbmModel {
    intercepts: Vec<f64>,
    link: Link,
    features: Vec<FeatureSpec>,
    interactions: Vec<InteractionTerm>,
    stats: TrainingStats,
}

/// A single feature value: a real for continuous features, a level index for
/// categorical ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureValue {
    Number(f64),
    Level(usize),
}

impl FeatureValue {
    pub fn as_number(self) -> Option<f64> {
        match self {
            FeatureValue::Number(v) => Some(v),
            FeatureValue::Level(_) => None,
        }
    }
}

/// One input record, one value per model feature.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    values: Vec<FeatureValue>,
}

impl Instance {
    pub fn new(model: &EbmModel, values: Vec<FeatureValue>) -> Result<Self, ModelError> {
        if values.len() != model.features.len() {
            return Err(ModelError::Instance(format!(
                "expected {} values, got {}",
                model.features.len(),
                values.len()
            )));
        }
        for (spec, value) in model.features.iter().zip(&values) {
            match (&spec.kind, value) {
                (FeatureKind::Continuous { .. }, FeatureValue::Number(v)) if v.is_finite() => {}
                (FeatureKind::Continuous { .. }, FeatureValue::Number(_)) => {
                    return Err(ModelError::Instance(format!("{}: value is not finite", spec.name)))
                }
                (FeatureKind::Categorical { levels }, FeatureValue::Level(l)) if *l < levels.len() => {}
                (FeatureKind::Categorical { .. }, FeatureValue::Level(l)) => {
                    return Err(ModelError::UnknownLevel {
                        feature: spec.name.clone(),
                        level: format!("#{l}"),
                    })
                }
                _ => {
                    return Err(ModelError::Instance(format!(
                        "{}: value kind does not match feature kind",
                        spec.name
                    )))
                }
            }
        }
        Ok(Self { values })
    }

    /// Parses textual values in feature order. Continuous values must parse as reals,
    /// categorical values must name a known level.
    pub fn from_strings<S: AsRef<str>>(model: &EbmModel, raw: &[S]) -> Result<Self, ModelError> {
        if raw.len() != model.features.len() {
            return Err(ModelError::Instance(format!(
                "expected {} values, got {}",
                model.features.len(),
                raw.len()
            )));
        }
        let values = model
            .features
            .iter()
            .zip(raw)
            .map(|(spec, text)| model_value_from_str(spec, text.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(model, values)
    }

    /// Builds an instance from a name-keyed JSON object.
    pub fn from_json(model: &EbmModel, object: &serde_json::Map<String, serde_json::Value>) -> Result<Self, ModelError> {
        let mut values = Vec::with_capacity(model.features.len());
        for spec in &model.features {
            let raw = object
                .get(&spec.name)
                .ok_or_else(|| ModelError::MissingFeature(spec.name.clone()))?;
            let value = value_from_json(spec, raw)?;
            values.push(value);
        }
        if let Some(extra) = object.keys().find(|k| model.feature_index(k).is_none()) {
            return Err(ModelError::Instance(format!("unknown feature {extra}")));
        }
        Self::new(model, values)
    }

    pub fn values(&self) -> &[FeatureValue] {
        &self.values
    }

    pub fn value(&self, feature: usize) -> FeatureValue {
        self.values[feature]
    }

    /// Returns a copy with one value replaced. The caller guarantees the value
    /// matches the feature kind.
    pub fn with_value(&self, feature: usize, value: FeatureValue) -> Self {
        let mut values = self.values.clone();
        values[feature] = value;
        Self { values }
    }

    pub fn to_json(&self, model: &EbmModel) -> serde_json::Map<String, serde_json::Value> {
        model
            .features
            .iter()
            .zip(&self.values)
            .map(|(spec, v)| (spec.name.clone(), model.value_to_json(spec, *v)))
            .collect()
    }
}

/// Parses one feature value from JSON: a number or numeric string for
/// continuous features, a level name for categorical ones.
pub fn value_from_json(spec: &FeatureSpec, raw: &serde_json::Value) -> Result<FeatureValue, ModelError> {
    match (&spec.kind, raw) {
        (FeatureKind::Continuous { .. }, serde_json::Value::Number(n)) => Ok(FeatureValue::Number(n.as_f64().unwrap_or(f64::NAN))),
        (_, serde_json::Value::String(s)) => model_value_from_str(spec, s),
        (FeatureKind::Categorical { .. }, serde_json::Value::Number(n)) => model_value_from_str(spec, &n.to_string()),
        _ => Err(ModelError::Instance(format!("{}: expected a number or a level name", spec.name))),
    }
}

fn model_value_from_str(spec: &FeatureSpec, text: &str) -> Result<FeatureValue, ModelError> {
    match &spec.kind {
        FeatureKind::Continuous { .. } => text
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(FeatureValue::Number)
            .ok_or_else(|| ModelError::Instance(format!("{}: cannot parse {text:?} as a number", spec.name))),
        FeatureKind::Categorical { .. } => spec
            .level_index(text)
            .map(FeatureValue::Level)
            .ok_or_else(|| ModelError::UnknownLevel {
                feature: spec.name.clone(),
                level: text.to_string(),
            }),
    }
}

/// Output of the link function.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Prediction {
    Binary { score: f64, probability: f64, positive: bool },
    Regression { value: f64 },
    Multiclass { scores: Vec<f64>, probabilities: Vec<f64>, class: usize },
}

impl Prediction {
    pub fn label(&self) -> String {
        match self {
            Prediction::Binary { positive: true, .. } => "positive".into(),
            Prediction::Binary { positive: false, .. } => "negative".into(),
            Prediction::Regression { value } => crate::format::sig9(*value),
            Prediction::Multiclass { class, .. } => class.to_string(),
        }
    }
}

pub fn sigmoid(score: f64) -> f64 {
    1.0 / (1.0 + (-score).exp())
}

pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Index of the largest score; lowest index wins ties.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if *s > scores[best] {
            best = i;
        }
    }
    best
}

impl EbmModel {
    /// Validates all structural invariants and builds the model.
    pub fn new(
        intercepts: Vec<f64>,
        link: Link,
        features: Vec<FeatureSpec>,
        interactions: Vec<InteractionTerm>,
        stats: TrainingStats,
    ) -> Result<Self, ModelError> {
        let invalid = |field: String, reason: &str| ModelError::Invalid {
            field,
            reason: reason.to_string(),
        };
        if intercepts.is_empty() {
            return Err(invalid("intercepts".into(), "at least one intercept required"));
        }
        if intercepts.iter().any(|v| !v.is_finite()) {
            return Err(invalid("intercepts".into(), "intercepts must be finite"));
        }
        let classes = intercepts.len();
        match link {
            Link::Softmax if classes < 2 => {
                return Err(invalid("intercepts".into(), "softmax link needs one intercept per class"))
            }
            Link::Logit | Link::Identity if classes != 1 => {
                return Err(invalid("intercepts".into(), "logit and identity links take exactly one intercept"))
            }
            _ => {}
        }
        if link == Link::Softmax && !interactions.is_empty() {
            return Err(invalid(
                "interactions".into(),
                "multiclass models cannot carry interaction terms",
            ));
        }
        if features.is_empty() {
            return Err(invalid("features".into(), "at least one feature required"));
        }

        let mut names = std::collections::BTreeSet::new();
        for (idx, spec) in features.iter().enumerate() {
            let field = |sub: &str| format!("features[{idx}].{sub}");
            if !names.insert(spec.name.as_str()) {
                return Err(invalid(field("name"), "duplicate feature name"));
            }
            match &spec.kind {
                FeatureKind::Continuous { cuts } => {
                    if cuts.iter().any(|c| !c.is_finite()) {
                        return Err(invalid(field("cuts"), "cut points must be finite"));
                    }
                    if cuts.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(invalid(field("cuts"), "cut points not increasing"));
                    }
                }
                FeatureKind::Categorical { levels } => {
                    if levels.is_empty() {
                        return Err(invalid(field("levels"), "at least one level required"));
                    }
                    let unique: std::collections::BTreeSet<_> = levels.iter().collect();
                    if unique.len() != levels.len() {
                        return Err(invalid(field("levels"), "levels must be unique"));
                    }
                    if spec.transform != Transform::None {
                        return Err(invalid(field("transform"), "transforms apply to continuous features only"));
                    }
                }
            }
            if spec.scores.len() != spec.num_bins() {
                return Err(invalid(field("scores"), "one score entry per bin required"));
            }
            for entry in &spec.scores {
                if entry.len() != classes {
                    return Err(invalid(field("scores"), "score vector length must equal the class count"));
                }
                if entry.iter().any(|v| !v.is_finite()) {
                    return Err(invalid(field("scores"), "bin scores must be finite"));
                }
            }
        }

        for (idx, term) in interactions.iter().enumerate() {
            let field = |sub: &str| format!("interactions[{idx}].{sub}");
            if term.feature_i >= features.len() || term.feature_j >= features.len() {
                return Err(invalid(field("i"), "feature index out of range"));
            }
            if term.feature_i == term.feature_j {
                return Err(invalid(field("j"), "interaction needs two distinct features"));
            }
            let rows = features[term.feature_i].num_bins();
            let cols = features[term.feature_j].num_bins();
            if term.table.len() != rows || term.table.iter().any(|r| r.len() != cols) {
                return Err(invalid(field("table"), "table dimensions must match the bin counts"));
            }
            if term.table.iter().flatten().any(|v| !v.is_finite()) {
                return Err(invalid(field("table"), "table entries must be finite"));
            }
        }

        if stats.mad.len() != features.len() {
            return Err(invalid("stats.mad".into(), "one entry per feature required"));
        }
        if stats.frequencies.len() != features.len() {
            return Err(invalid("stats.frequencies".into(), "one entry per feature required"));
        }
        for (idx, spec) in features.iter().enumerate() {
            match &spec.kind {
                FeatureKind::Continuous { .. } => match stats.mad[idx] {
                    Some(m) if m.is_finite() && m >= 0.0 => {}
                    Some(_) => return Err(invalid(format!("stats.mad[{idx}]"), "MAD must be finite and >= 0")),
                    None => return Err(invalid(format!("stats.mad[{idx}]"), "continuous features need a MAD")),
                },
                FeatureKind::Categorical { .. } => {
                    let freqs = &stats.frequencies[idx];
                    let mut total = 0.0;
                    for (level, f) in freqs {
                        if spec.level_index(level).is_none() {
                            return Err(invalid(format!("stats.frequencies[{idx}]"), "frequency for unknown level"));
                        }
                        if !(0.0..=1.0).contains(f) {
                            return Err(invalid(format!("stats.frequencies[{idx}]"), "frequencies must lie in [0, 1]"));
                        }
                        total += f;
                    }
                    if total > 1.0 + 1e-9 {
                        return Err(invalid(format!("stats.frequencies[{idx}]"), "frequencies sum above 1"));
                    }
                }
            }
        }

        Ok(Self {
            intercepts,
            link,
            features,
            interactions,
            stats,
        })
    }

    pub fn intercepts(&self) -> &[f64] {
        &self.intercepts
    }

    pub fn link(&self) -> Link {
        self.link
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn feature(&self, index: usize) -> &FeatureSpec {
        &self.features[index]
    }

    pub fn interactions(&self) -> &[InteractionTerm] {
        &self.interactions
    }

    pub fn stats(&self) -> &TrainingStats {
        &self.stats
    }

    pub fn num_classes(&self) -> usize {
        self.intercepts.len()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    /// Bin containing `value`. Continuous values outside the cut range fall
    /// into the edge bins.
    pub fn bin_index(&self, feature: usize, value: FeatureValue) -> Result<usize, ModelError> {
        let spec = self
            .features
            .get(feature)
            .ok_or_else(|| ModelError::Instance(format!("feature index {feature} out of range")))?;
        match (&spec.kind, value) {
            (FeatureKind::Continuous { cuts }, FeatureValue::Number(v)) => Ok(cuts.partition_point(|c| *c <= v)),
            (FeatureKind::Categorical { levels }, FeatureValue::Level(l)) if l < levels.len() => Ok(l),
            (FeatureKind::Categorical { .. }, FeatureValue::Level(l)) => Err(ModelError::UnknownLevel {
                feature: spec.name.clone(),
                level: format!("#{l}"),
            }),
            _ => Err(ModelError::Instance(format!(
                "{}: value kind does not match feature kind",
                spec.name
            ))),
        }
    }

    /// Bin index of every feature of a validated instance.
    pub fn bins_of(&self, instance: &Instance) -> Vec<usize> {
        instance
            .values()
            .iter()
            .enumerate()
            .map(|(i, v)| self.bin_index(i, *v).expect("instance validated against model"))
            .collect()
    }

    /// Additive score per class for a vector of bin indices.
    pub fn raw_score_of_bins(&self, bins: &[usize]) -> Vec<f64> {
        let mut scores = self.intercepts.clone();
        for (spec, &bin) in self.features.iter().zip(bins) {
            for (s, v) in scores.iter_mut().zip(&spec.scores[bin]) {
                *s += v;
            }
        }
        for term in &self.interactions {
            scores[0] += term.table[bins[term.feature_i]][bins[term.feature_j]];
        }
        scores
    }

    pub fn raw_score(&self, instance: &Instance) -> Vec<f64> {
        self.raw_score_of_bins(&self.bins_of(instance))
    }

    pub fn predict_from_scores(&self, scores: Vec<f64>) -> Prediction {
        match self.link {
            Link::Logit => Prediction::Binary {
                score: scores[0],
                probability: sigmoid(scores[0]),
                positive: scores[0] >= 0.0,
            },
            Link::Identity => Prediction::Regression { value: scores[0] },
            Link::Softmax => Prediction::Multiclass {
                probabilities: softmax(&scores),
                class: argmax(&scores),
                scores,
            },
        }
    }

    pub fn predict(&self, instance: &Instance) -> Prediction {
        self.predict_from_scores(self.raw_score(instance))
    }

    pub fn value_to_json(&self, spec: &FeatureSpec, value: FeatureValue) -> serde_json::Value {
        match value {
            FeatureValue::Number(v) => serde_json::json!(v),
            FeatureValue::Level(l) => serde_json::Value::String(spec.level_name(l).unwrap_or("?").to_string()),
        }
    }

    /// Human-readable rendering of a value (9 significant digits for reals).
    pub fn display_value(&self, feature: usize, value: FeatureValue) -> String {
        match value {
            FeatureValue::Number(v) => crate::format::sig9(v),
            FeatureValue::Level(l) => self.features[feature].level_name(l).unwrap_or("?").to_string(),
        }
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
