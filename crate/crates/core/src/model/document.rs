//! JSON model document and its canonical rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{EbmModel, FeatureKind, FeatureSpec, InteractionTerm, Link, TrainingStats, Transform};
use crate::error::ModelError;
use crate::format::canonical_real;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub intercepts: Vec<f64>,
    pub link: Link,
    pub features: Vec<FeatureDocument>,
    #[serde(default)]
    pub interactions: Vec<InteractionDocument>,
    pub stats: StatsDocument,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindDocument {
    Continuous,
    Categorical,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScoresDocument {
    Scalar(Vec<f64>),
    PerClass(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureDocument {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub kind: KindDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cuts: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<String>>,
    pub scores: ScoresDocument,
    #[serde(default)]
    pub transform: Transform,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InteractionDocument {
    pub i: usize,
    pub j: usize,
    pub table: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsDocument {
    pub mad: Vec<Option<f64>>,
    pub frequencies: Vec<BTreeMap<String, f64>>,
    pub training_size: u64,
}

impl ModelDocument {
    pub fn into_model(self) -> Result<EbmModel, ModelError> {
        let classes = self.intercepts.len();
        let mut features = Vec::with_capacity(self.features.len());
        for (idx, doc) in self.features.into_iter().enumerate() {
            let invalid = |sub: &str, reason: &str| ModelError::Invalid {
                field: format!("features[{idx}].{sub}"),
                reason: reason.to_string(),
            };
            let kind = match doc.kind {
                KindDocument::Continuous => {
                    if doc.levels.is_some() {
                        return Err(invalid("levels", "continuous features take cuts, not levels"));
                    }
                    FeatureKind::Continuous {
                        cuts: doc.cuts.unwrap_or_default(),
                    }
                }
                KindDocument::Categorical => {
                    if doc.cuts.is_some() {
                        return Err(invalid("cuts", "categorical features take levels, not cuts"));
                    }
                    FeatureKind::Categorical {
                        levels: doc.levels.ok_or_else(|| invalid("levels", "missing levels"))?,
                    }
                }
            };
            let scores = match doc.scores {
                ScoresDocument::Scalar(values) if classes == 1 => values.into_iter().map(|v| vec![v]).collect(),
                ScoresDocument::Scalar(values) if values.is_empty() => Vec::new(),
                ScoresDocument::Scalar(_) => {
                    return Err(invalid("scores", "multiclass models need a score vector per bin"))
                }
                ScoresDocument::PerClass(values) => values,
            };
            features.push(FeatureSpec {
                name: doc.name,
                description: doc.description,
                kind,
                scores,
                transform: doc.transform,
            });
        }
        let interactions = self
            .interactions
            .into_iter()
            .map(|t| InteractionTerm {
                feature_i: t.i,
                feature_j: t.j,
                table: t.table,
            })
            .collect();
        let stats = TrainingStats {
            mad: self.stats.mad,
            frequencies: self.stats.frequencies,
            training_size: self.stats.training_size,
        };
        EbmModel::new(self.intercepts, self.link, features, interactions, stats)
    }
}

/// Reads and validates a model document.
pub fn load_model<R: Read>(mut source: R) -> Result<EbmModel, ModelError> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| ModelError::Malformed(e.to_string()))?;
    load_model_str(&text)
}

pub fn load_model_str(text: &str) -> Result<EbmModel, ModelError> {
    let doc: ModelDocument = serde_json::from_str(text).map_err(|e| ModelError::Malformed(e.to_string()))?;
    doc.into_model()
}

/// Canonical document text: fixed key order, no insignificant whitespace,
/// reals in their shortest round-trip form with at least 9 significant digits.
/// The output is itself a valid model document.
pub fn serialize_model(model: &EbmModel) -> String {
    let mut out = String::new();
    let multiclass = model.num_classes() > 1;
    out.push_str("{\"intercepts\":");
    push_reals(&mut out, model.intercepts());
    let _ = write!(out, ",\"link\":\"{}\",\"features\":[", model.link());
    for (idx, f) in model.features().iter().enumerate() {
        if idx > 0 {
            out.push(',');
        }
        out.push_str("{\"name\":");
        push_str(&mut out, &f.name);
        if let Some(desc) = &f.description {
            out.push_str(",\"description\":");
            push_str(&mut out, desc);
        }
        match &f.kind {
            FeatureKind::Continuous { cuts } => {
                out.push_str(",\"kind\":\"continuous\",\"cuts\":");
                push_reals(&mut out, cuts);
            }
            FeatureKind::Categorical { levels } => {
                out.push_str(",\"kind\":\"categorical\",\"levels\":[");
                for (k, level) in levels.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    push_str(&mut out, level);
                }
                out.push(']');
            }
        }
        out.push_str(",\"scores\":[");
        for (b, entry) in f.scores.iter().enumerate() {
            if b > 0 {
                out.push(',');
            }
            if multiclass {
                push_reals(&mut out, entry);
            } else {
                out.push_str(&canonical_real(entry[0]));
            }
        }
        out.push(']');
        let transform = match f.transform {
            Transform::None => "none",
            Transform::IntegerValued => "integer-valued",
        };
        let _ = write!(out, ",\"transform\":\"{transform}\"}}");
    }
    out.push_str("],\"interactions\":[");
    for (idx, t) in model.interactions().iter().enumerate() {
        if idx > 0 {
            out.push(',');
        }
        let _ = write!(out, "{{\"i\":{},\"j\":{},\"table\":[", t.feature_i, t.feature_j);
        for (r, row) in t.table.iter().enumerate() {
            if r > 0 {
                out.push(',');
            }
            push_reals(&mut out, row);
        }
        out.push_str("]}");
    }
    out.push_str("],\"stats\":{\"mad\":[");
    let stats = model.stats();
    for (idx, m) in stats.mad.iter().enumerate() {
        if idx > 0 {
            out.push(',');
        }
        match m {
            Some(v) => out.push_str(&canonical_real(*v)),
            None => out.push_str("null"),
        }
    }
    out.push_str("],\"frequencies\":[");
    for (idx, freqs) in stats.frequencies.iter().enumerate() {
        if idx > 0 {
            out.push(',');
        }
        out.push('{');
        for (k, (level, f)) in freqs.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            push_str(&mut out, level);
            out.push(':');
            out.push_str(&canonical_real(*f));
        }
        out.push('}');
    }
    let _ = write!(out, "],\"training_size\":{}}}}}", stats.training_size);
    out
}

/// SHA-256 digest of the canonical rendering, as `sha256:<hex>`.
pub fn model_hash(model: &EbmModel) -> String {
    let digest = Sha256::digest(serialize_model(model).as_bytes());
    format!("sha256:{}", hex::encode(digest))
}

fn push_reals(out: &mut String, values: &[f64]) {
    out.push('[');
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        out.push_str(&canonical_real(*v));
    }
    out.push(']');
}

fn push_str(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("strings always serialize"));
}
