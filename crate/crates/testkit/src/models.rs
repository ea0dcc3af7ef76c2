//! Random models, instances and goals.
//!
//! Scores are multiples of 1/64, and every score sum is exact in binary
//! floating point.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use recourse_core::model::{FeatureKind, FeatureSpec, InteractionTerm, Link, Transform, TrainingStats};
use recourse_core::recourse::{Acceptable, Difficulty, Preferences, RecourseGoal};
use recourse_core::{EbmModel, FeatureValue, Instance};

/// Bounds for [`random_model`].
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_features: usize,
    pub max_bins: usize,
    pub max_interactions: usize,
    /// Classes for softmax models.
    pub classes: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Self {
            max_features: 5,
            max_bins: 6,
            max_interactions: 2,
            classes: 3,
        }
    }
}

fn dyadic<R: Rng>(rng: &mut R) -> f64 {
    f64::from(rng.gen_range(-64..=64)) / 64.0
}

/// A random model. Softmax models get no interactions.
pub fn random_model<R: Rng>(rng: &mut R, link: Link, shape: Shape) -> EbmModel {
    let classes = if link == Link::Softmax { shape.classes } else { 1 };
    let num_features = rng.gen_range(1..=shape.max_features);
    let mut features = Vec::with_capacity(num_features);
    let mut mad = Vec::with_capacity(num_features);
    let mut frequencies = Vec::with_capacity(num_features);
    for f in 0..num_features {
        let bins = rng.gen_range(2..=shape.max_bins);
        let scores: Vec<Vec<f64>> = (0..bins).map(|_| (0..classes).map(|_| dyadic(rng)).collect()).collect();
        if rng.gen_bool(0.65) {
            let mut cuts = Vec::with_capacity(bins - 1);
            let mut edge = f64::from(rng.gen_range(-20..20));
            for _ in 1..bins {
                // Mix integral and fractional cut points, some narrower than 1.
                edge += match rng.gen_range(0..4) {
                    0 => 0.5,
                    1 => f64::from(rng.gen_range(1..5)),
                    _ => rng.gen_range(0.25..6.0),
                };
                cuts.push(edge);
            }
            let transform = if rng.gen_bool(0.3) { Transform::IntegerValued } else { Transform::None };
            mad.push(Some(if rng.gen_bool(0.05) { 0.0 } else { rng.gen_range(0.5..4.0) }));
            frequencies.push(BTreeMap::new());
            features.push(FeatureSpec {
                name: format!("c{f}"),
                description: None,
                kind: FeatureKind::Continuous { cuts },
                scores,
                transform,
            });
        } else {
            let levels: Vec<String> = (0..bins).map(|l| format!("l{l}")).collect();
            let weights: Vec<f64> = (0..bins).map(|_| rng.gen_range(0.05..1.0)).collect();
            let total: f64 = weights.iter().sum::<f64>() * rng.gen_range(1.0..1.3);
            let mut freq = BTreeMap::new();
            for (level, w) in levels.iter().zip(&weights) {
                // Occasionally leave a level unseen.
                if !rng.gen_bool(0.1) {
                    freq.insert(level.clone(), w / total);
                }
            }
            mad.push(None);
            frequencies.push(freq);
            features.push(FeatureSpec {
                name: format!("k{f}"),
                description: None,
                kind: FeatureKind::Categorical { levels },
                scores,
                transform: Transform::None,
            });
        }
    }

    let mut interactions = Vec::new();
    if link != Link::Softmax && num_features >= 2 {
        let count = rng.gen_range(0..=shape.max_interactions);
        for _ in 0..count {
            let mut pair: Vec<usize> = (0..num_features).collect();
            pair.shuffle(rng);
            let (i, j) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            let table = (0..features[i].num_bins())
                .map(|_| (0..features[j].num_bins()).map(|_| dyadic(rng)).collect())
                .collect();
            interactions.push(InteractionTerm {
                feature_i: i,
                feature_j: j,
                table,
            });
        }
    }

    let intercepts = (0..classes).map(|_| dyadic(rng)).collect();
    EbmModel::new(
        intercepts,
        link,
        features,
        interactions,
        TrainingStats {
            mad,
            frequencies,
            training_size: 1000,
        },
    )
    .expect("generated model is valid")
}

/// A random instance. Continuous values range a little beyond the outer cuts.
pub fn random_instance<R: Rng>(rng: &mut R, model: &EbmModel) -> Instance {
    let values = model
        .features()
        .iter()
        .map(|spec| match &spec.kind {
            FeatureKind::Continuous { cuts } => {
                let lo = cuts[0] - 5.0;
                let hi = cuts[cuts.len() - 1] + 5.0;
                let v = rng.gen_range(lo..hi);
                FeatureValue::Number(if spec.is_integer_valued() { v.round() } else { v })
            }
            FeatureKind::Categorical { levels } => FeatureValue::Level(rng.gen_range(0..levels.len())),
        })
        .collect();
    Instance::new(model, values).expect("generated instance is valid")
}

/// A goal the instance does not already meet, suited to the model's link.
pub fn random_goal<R: Rng>(rng: &mut R, model: &EbmModel, instance: &Instance) -> RecourseGoal {
    let scores = model.raw_score(instance);
    match model.link() {
        Link::Logit => {
            if scores[0] >= 0.0 {
                RecourseGoal::ToNegative
            } else {
                RecourseGoal::ToPositive
            }
        }
        Link::Identity => {
            let s = scores[0];
            let gap = f64::from(rng.gen_range(1..=48)) / 32.0;
            let width = f64::from(rng.gen_range(1..=64)) / 32.0;
            match rng.gen_range(0..4) {
                0 => RecourseGoal::regression(Some(s + gap), None),
                1 => RecourseGoal::regression(None, Some(s - gap)),
                2 => RecourseGoal::regression(Some(s + gap), Some(s + gap + width)),
                _ => RecourseGoal::regression(Some(s - gap - width), Some(s - gap)),
            }
        }
        Link::Softmax => {
            let current = recourse_core::model::argmax(&scores);
            let mut target = rng.gen_range(0..scores.len() - 1);
            if target >= current {
                target += 1;
            }
            RecourseGoal::MulticlassTarget { target }
        }
    }
}

/// Model with `features` continuous features of `bins` bins each and
/// `interactions` pairwise terms on distinct feature pairs, plus an instance
/// it rejects by roughly `margin` on the score scale.
///
/// Shape functions are smooth trends with small noise.
pub fn scale_model<R: Rng>(rng: &mut R, features: usize, bins: usize, interactions: usize, margin: f64) -> (EbmModel, Instance) {
    let mut specs = Vec::with_capacity(features);
    let mut values = Vec::with_capacity(features);
    for f in 0..features {
        let cuts: Vec<f64> = (1..bins).map(|k| k as f64 * 10.0).collect();
        let slope = rng.gen_range(-0.04..0.04);
        let bend = rng.gen_range(-0.3..0.3);
        let scores = (0..bins)
            .map(|b| {
                let t = b as f64 / (bins - 1) as f64;
                vec![slope * b as f64 + bend * (std::f64::consts::PI * t).sin() + rng.gen_range(-0.01..0.01)]
            })
            .collect();
        specs.push(FeatureSpec {
            name: format!("f{f:02}"),
            description: None,
            kind: FeatureKind::Continuous { cuts },
            scores,
            transform: if f % 3 == 0 { Transform::IntegerValued } else { Transform::None },
        });
        values.push(FeatureValue::Number(rng.gen_range(0.0..bins as f64 * 10.0).floor()));
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    while pairs.len() < interactions {
        let i = rng.gen_range(0..features);
        let j = rng.gen_range(0..features);
        let pair = (i.min(j), i.max(j));
        if i != j && !pairs.contains(&pair) {
            pairs.push(pair);
        }
    }
    let terms: Vec<InteractionTerm> = pairs
        .into_iter()
        .map(|(i, j)| InteractionTerm {
            feature_i: i,
            feature_j: j,
            table: (0..bins).map(|_| (0..bins).map(|_| rng.gen_range(-0.05..0.05)).collect()).collect(),
        })
        .collect();
    let stats = TrainingStats {
        mad: (0..features).map(|_| Some(rng.gen_range(5.0..40.0))).collect(),
        frequencies: vec![BTreeMap::new(); features],
        training_size: 10_000,
    };
    let draft = EbmModel::new(vec![0.0], Link::Logit, specs.clone(), terms.clone(), stats.clone()).expect("valid");
    let instance = Instance::new(&draft, values).expect("valid");
    let offset = draft.raw_score(&instance)[0];
    let model = EbmModel::new(vec![-offset - margin], Link::Logit, specs, terms, stats).expect("valid");
    (model, instance)
}

/// Random preferences: some features hard or impossible, some restricted to
/// a range or level subset, and a random feature cap.
pub fn random_preferences<R: Rng>(rng: &mut R, model: &EbmModel, instance: &Instance) -> Preferences {
    let mut prefs = Preferences::neutral(model).with_max_features(rng.gen_range(1..=4));
    for (f, spec) in model.features().iter().enumerate() {
        let difficulty = *Difficulty::ALL.choose(rng).expect("nonempty");
        prefs = prefs.with_difficulty(f, difficulty);
        if !rng.gen_bool(0.4) {
            continue;
        }
        let acceptable = match &spec.kind {
            FeatureKind::Continuous { cuts } => {
                let x = instance.value(f).as_number().expect("continuous");
                let lo = if rng.gen_bool(0.3) { f64::NEG_INFINITY } else { x - rng.gen_range(0.0..cuts.len() as f64 * 3.0 + 5.0) };
                let hi = if rng.gen_bool(0.3) { f64::INFINITY } else { x + rng.gen_range(0.0..cuts.len() as f64 * 3.0 + 5.0) };
                Acceptable::Range { lo, hi }
            }
            FeatureKind::Categorical { levels } => {
                let mut set: BTreeSet<usize> = (0..levels.len()).filter(|_| rng.gen_bool(0.5)).collect();
                if set.is_empty() {
                    set.insert(rng.gen_range(0..levels.len()));
                }
                Acceptable::Levels(set)
            }
        };
        prefs = prefs.with_acceptable(f, acceptable);
    }
    prefs
}
