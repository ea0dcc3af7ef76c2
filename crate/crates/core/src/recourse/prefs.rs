//! User preferences: per-feature difficulty and acceptable values, plus a cap
//! on how many features a plan may change.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::RecourseError;
use crate::model::{EbmModel, FeatureKind, FeatureValue};

/// Default cap on the number of changed features per plan.
pub const DEFAULT_MAX_FEATURES: usize = 4;

/// How hard it is for the user to change a feature. Scales the distance cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Difficulty {
    VeryEasy,
    Easy,
    #[default]
    Neutral,
    Hard,
    VeryHard,
    Impossible,
}

impl Difficulty {
    /// All levels in increasing order of difficulty.
    pub const ALL: [Difficulty; 6] = [
        Difficulty::VeryEasy,
        Difficulty::Easy,
        Difficulty::Neutral,
        Difficulty::Hard,
        Difficulty::VeryHard,
        Difficulty::Impossible,
    ];

    /// Cost multiplier; infinite for [`Difficulty::Impossible`].
    pub fn multiplier(self) -> f64 {
        match self {
            Difficulty::VeryEasy => 0.1,
            Difficulty::Easy => 0.5,
            Difficulty::Neutral => 1.0,
            Difficulty::Hard => 2.0,
            Difficulty::VeryHard => 10.0,
            Difficulty::Impossible => f64::INFINITY,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Difficulty::VeryEasy => "very-easy",
            Difficulty::Easy => "easy",
            Difficulty::Neutral => "neutral",
            Difficulty::Hard => "hard",
            Difficulty::VeryHard => "very-hard",
            Difficulty::Impossible => "impossible",
        }
    }
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Difficulty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Difficulty::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| format!("unknown difficulty {s:?} (expected one of very-easy, easy, neutral, hard, very-hard, impossible)"))
    }
}

/// Values a feature may take in a plan.
#[derive(Debug, Clone, PartialEq)]
pub enum Acceptable {
    Unrestricted,
    /// Closed interval; either side may be infinite.
    Range { lo: f64, hi: f64 },
    /// Allowed level indices of a categorical feature.
    Levels(BTreeSet<usize>),
}

impl Acceptable {
    pub fn allows(&self, value: FeatureValue) -> bool {
        match (self, value) {
            (Acceptable::Unrestricted, _) => true,
            (Acceptable::Range { lo, hi }, FeatureValue::Number(v)) => *lo <= v && v <= *hi,
            (Acceptable::Levels(set), FeatureValue::Level(l)) => set.contains(&l),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeaturePreference {
    pub difficulty: Difficulty,
    pub acceptable: Acceptable,
}

impl Default for FeaturePreference {
    fn default() -> Self {
        Self {
            difficulty: Difficulty::Neutral,
            acceptable: Acceptable::Unrestricted,
        }
    }
}

/// Preferences for one model, indexed by feature position.
#[derive(Debug, Clone, PartialEq)]
pub struct Preferences {
    features: Vec<FeaturePreference>,
    pub max_features: usize,
}

impl Preferences {
    /// Every feature neutral and unrestricted, default feature cap.
    pub fn neutral(model: &EbmModel) -> Self {
        Self {
            features: vec![FeaturePreference::default(); model.features().len()],
            max_features: DEFAULT_MAX_FEATURES,
        }
    }

    pub fn features(&self) -> &[FeaturePreference] {
        &self.features
    }

    pub fn feature(&self, index: usize) -> &FeaturePreference {
        &self.features[index]
    }

    pub fn with_difficulty(mut self, feature: usize, difficulty: Difficulty) -> Self {
        self.features[feature].difficulty = difficulty;
        self
    }

    pub fn with_acceptable(mut self, feature: usize, acceptable: Acceptable) -> Self {
        self.features[feature].acceptable = acceptable;
        self
    }

    pub fn with_max_features(mut self, max_features: usize) -> Self {
        self.max_features = max_features;
        self
    }

    pub fn validate(&self, model: &EbmModel) -> Result<(), RecourseError> {
        let invalid = |msg: String| Err(RecourseError::InvalidPreferences(msg));
        if self.features.len() != model.features().len() {
            return invalid(format!(
                "expected preferences for {} features, got {}",
                model.features().len(),
                self.features.len()
            ));
        }
        if self.max_features < 1 {
            return invalid("max_features must be at least 1".into());
        }
        for (spec, pref) in model.features().iter().zip(&self.features) {
            match (&pref.acceptable, &spec.kind) {
                (Acceptable::Unrestricted, _) => {}
                (Acceptable::Range { lo, hi }, FeatureKind::Continuous { .. }) => {
                    if lo.is_nan() || hi.is_nan() || lo > hi || (lo.is_infinite() && lo == hi) {
                        return invalid(format!("{}: acceptable range [{lo}, {hi}] is empty", spec.name));
                    }
                }
                (Acceptable::Levels(set), FeatureKind::Categorical { levels }) => {
                    if let Some(l) = set.iter().find(|l| **l >= levels.len()) {
                        return invalid(format!("{}: level index {l} out of range", spec.name));
                    }
                    if set.is_empty() && pref.difficulty != Difficulty::Impossible {
                        return invalid(format!("{}: acceptable level set is empty", spec.name));
                    }
                }
                (Acceptable::Range { .. }, FeatureKind::Categorical { .. }) => {
                    return invalid(format!("{}: a categorical feature takes a level set, not a range", spec.name));
                }
                (Acceptable::Levels(_), FeatureKind::Continuous { .. }) => {
                    return invalid(format!("{}: a continuous feature takes a range, not a level set", spec.name));
                }
            }
        }
        Ok(())
    }

    /// Parses the name-keyed wire form.
    pub fn from_spec(model: &EbmModel, spec: &PreferenceSpec) -> Result<Self, RecourseError> {
        let mut prefs = Self::neutral(model);
        if let Some(max) = spec.max_features {
            prefs.max_features = max;
        }
        for (name, entry) in &spec.features {
            let index = model
                .feature_index(name)
                .ok_or_else(|| RecourseError::InvalidPreferences(format!("unknown feature {name:?}")))?;
            let feature = model.feature(index);
            let pref = &mut prefs.features[index];
            if let Some(d) = entry.difficulty {
                pref.difficulty = d;
            }
            match (&entry.range, &entry.levels) {
                (Some(_), Some(_)) => {
                    return Err(RecourseError::InvalidPreferences(format!(
                        "{name}: give either a range or a level list, not both"
                    )))
                }
                (Some([lo, hi]), None) => {
                    pref.acceptable = Acceptable::Range {
                        lo: lo.unwrap_or(f64::NEG_INFINITY),
                        hi: hi.unwrap_or(f64::INFINITY),
                    };
                }
                (None, Some(levels)) => {
                    let mut set = BTreeSet::new();
                    for level in levels {
                        let l = feature.level_index(level).ok_or_else(|| {
                            RecourseError::InvalidPreferences(format!("{name}: unknown level {level:?}"))
                        })?;
                        set.insert(l);
                    }
                    pref.acceptable = Acceptable::Levels(set);
                }
                (None, None) => {}
            }
        }
        prefs.validate(model)?;
        Ok(prefs)
    }

    /// Name-keyed wire form listing only non-default entries.
    pub fn to_spec(&self, model: &EbmModel) -> PreferenceSpec {
        let mut features = BTreeMap::new();
        for (spec, pref) in model.features().iter().zip(&self.features) {
            if *pref == FeaturePreference::default() {
                continue;
            }
            let finite = |v: f64| v.is_finite().then_some(v);
            let (range, levels) = match &pref.acceptable {
                Acceptable::Unrestricted => (None, None),
                Acceptable::Range { lo, hi } => (Some([finite(*lo), finite(*hi)]), None),
                Acceptable::Levels(set) => (
                    None,
                    Some(set.iter().map(|l| spec.level_name(*l).unwrap_or("?").to_string()).collect()),
                ),
            };
            features.insert(
                spec.name.clone(),
                FeaturePreferenceSpec {
                    difficulty: (pref.difficulty != Difficulty::Neutral).then_some(pref.difficulty),
                    range,
                    levels,
                },
            );
        }
        PreferenceSpec {
            max_features: Some(self.max_features),
            features,
        }
    }
}

/// JSON form of [`Preferences`], keyed by feature name.
///
/// ```json
/// {"max_features": 2, "features": {"A": {"difficulty": "hard", "range": [9, null]}, "B": {"levels": ["blue"]}}}
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreferenceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_features: Option<usize>,
    #[serde(default)]
    pub features: BTreeMap<String, FeaturePreferenceSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeaturePreferenceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub difficulty: Option<Difficulty>,
    /// `[lo, hi]`; `null` on either side means unbounded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[Option<f64>; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<String>>,
}
