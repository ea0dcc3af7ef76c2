//! Per-bin change costs.
//!
//! Every bin other than the one holding the original value is a possible
//! change. Its cost is the distance from the original value to the closest
//! value inside the bin: MAD-scaled absolute difference for continuous
//! features, one minus the level's training frequency for categorical ones.
//! Categorical costs are then rescaled so both kinds have the same mean, and
//! finally multiplied by the user's difficulty for the feature.

use crate::model::{EbmModel, FeatureKind, FeatureValue, Instance};
use crate::recourse::{Acceptable, Preferences};

/// Median absolute deviation. Even-length inputs use the lower middle element
/// for both medians. Returns `None` for an empty slice or any NaN.
pub fn mad(values: &[f64]) -> Option<f64> {
    if values.is_empty() || values.iter().any(|v| v.is_nan()) {
        return None;
    }
    let lower_median = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v[(v.len() - 1) / 2]
    };
    let median = lower_median(values.to_vec());
    Some(lower_median(values.iter().map(|v| (v - median).abs()).collect()))
}

/// `|x − c| / mad`. A zero MAD falls back to a divisor of 1 with a warning.
pub fn continuous_distance(x: f64, c: f64, mad: f64) -> f64 {
    let divisor = if mad > 0.0 {
        mad
    } else {
        log::warn!("MAD is {mad}; using 1.0 as the distance divisor");
        1.0
    };
    (x - c).abs() / divisor
}

/// Cost of switching to a level seen with `frequency` in training.
pub fn categorical_distance(frequency: f64) -> f64 {
    1.0 - frequency
}

/// Closest value to `x` inside the bin `[lo, hi)` intersected with the closed
/// range `[range_lo, range_hi]`, assuming `x` lies outside the bin. Integer
/// features only admit integers. `None` when the intersection is empty.
pub fn representative(x: f64, (lo, hi): (f64, f64), (range_lo, range_hi): (f64, f64), integer: bool) -> Option<f64> {
    let bottom = lo.max(range_lo);
    let open_top = range_hi >= hi;
    let (bottom, top) = match (integer, open_top) {
        (false, true) => (bottom, hi.next_down()),
        (false, false) => (bottom, range_hi),
        (true, true) => (bottom.ceil(), hi.ceil() - 1.0),
        (true, false) => (bottom.ceil(), range_hi.floor()),
    };
    if !(bottom <= top) {
        return None;
    }
    let rep = x.clamp(bottom, top);
    (rep.is_finite() && lo <= rep && rep < hi).then_some(rep)
}

/// Why a bin cannot be chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exclusion {
    /// The bin already holds the original value.
    OriginalBin,
    /// The feature's difficulty is impossible.
    Impossible,
    /// No value in the bin lies in the acceptable range or level set.
    OutOfRange,
    /// An integer-valued feature's bin contains no integer.
    NoIntegerValue,
    /// Candidate filtering: the bin moves the score against the goal.
    OppositeGain,
    /// Candidate filtering: a cheaper bin of the same feature gains at least as much.
    Dominated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinDistance {
    pub bin: usize,
    /// Value a plan sets when it selects this bin.
    pub representative: Option<FeatureValue>,
    /// Distance before rebalancing and difficulty.
    pub base: f64,
    /// `base`, times the categorical weight for categorical features.
    pub rebalanced: f64,
    /// `rebalanced × multiplier`; the objective coefficient.
    pub effective: f64,
    pub exclusion: Option<Exclusion>,
}

impl BinDistance {
    pub fn is_candidate(&self) -> bool {
        self.exclusion.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureDistances {
    pub feature: usize,
    pub original_bin: usize,
    pub multiplier: f64,
    /// One entry per bin, in bin order.
    pub bins: Vec<BinDistance>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    pub features: Vec<FeatureDistances>,
    /// Weight applied to every categorical distance.
    pub categorical_weight: f64,
}

impl DistanceTable {
    /// Bins that may appear in a program, as `(feature, entry)`.
    pub fn candidates(&self) -> impl Iterator<Item = (usize, &BinDistance)> + '_ {
        self.features
            .iter()
            .flat_map(|f| f.bins.iter().filter(|b| b.is_candidate()).map(move |b| (f.feature, b)))
    }

    pub fn entry(&self, feature: usize, bin: usize) -> &BinDistance {
        &self.features[feature].bins[bin]
    }
}

/// Costs of every bin of every feature for moving away from `instance`.
///
/// The categorical weight is the mean base distance of all continuous
/// non-original bins over the mean of all categorical non-original bins,
/// both measured without preferences. It is 1 when either side is empty or
/// the categorical mean is 0.
pub fn build_distance_table(model: &EbmModel, instance: &Instance, prefs: &Preferences) -> DistanceTable {
    let mut continuous_sum = (0.0, 0usize);
    let mut categorical_sum = (0.0, 0usize);
    let mut features = Vec::with_capacity(model.features().len());

    for (i, spec) in model.features().iter().enumerate() {
        let value = instance.value(i);
        let original_bin = model.bin_index(i, value).expect("instance validated against model");
        let pref = prefs.feature(i);
        let mut bins = Vec::with_capacity(spec.num_bins());
        match &spec.kind {
            FeatureKind::Continuous { .. } => {
                let x = value.as_number().expect("continuous value");
                let mad = model.stats().mad[i].unwrap_or(1.0);
                if mad == 0.0 {
                    log::warn!("feature {} has zero MAD; using 1.0 as the distance divisor", spec.name);
                }
                let divisor = if mad > 0.0 { mad } else { 1.0 };
                let range = match pref.acceptable {
                    Acceptable::Range { lo, hi } => (lo, hi),
                    _ => (f64::NEG_INFINITY, f64::INFINITY),
                };
                let integer = spec.is_integer_valued();
                for bin in 0..spec.num_bins() {
                    if bin == original_bin {
                        bins.push(original_entry(bin, value));
                        continue;
                    }
                    let edges = spec.bin_edges(bin).expect("continuous bin");
                    let unrestricted = representative(x, edges, (f64::NEG_INFINITY, f64::INFINITY), integer);
                    let Some(free_rep) = unrestricted else {
                        bins.push(excluded(bin, Exclusion::NoIntegerValue));
                        continue;
                    };
                    continuous_sum.0 += continuous_distance(x, free_rep, divisor);
                    continuous_sum.1 += 1;
                    match representative(x, edges, range, integer) {
                        Some(rep) => {
                            let base = continuous_distance(x, rep, divisor);
                            bins.push(BinDistance {
                                bin,
                                representative: Some(FeatureValue::Number(rep)),
                                base,
                                rebalanced: base,
                                effective: base,
                                exclusion: None,
                            });
                        }
                        None => bins.push(excluded(bin, Exclusion::OutOfRange)),
                    }
                }
            }
            FeatureKind::Categorical { levels } => {
                for (bin, level) in levels.iter().enumerate() {
                    if bin == original_bin {
                        bins.push(original_entry(bin, value));
                        continue;
                    }
                    let base = categorical_distance(model.stats().frequency(i, level));
                    categorical_sum.0 += base;
                    categorical_sum.1 += 1;
                    if pref.acceptable.allows(FeatureValue::Level(bin)) {
                        bins.push(BinDistance {
                            bin,
                            representative: Some(FeatureValue::Level(bin)),
                            base,
                            rebalanced: base,
                            effective: base,
                            exclusion: None,
                        });
                    } else {
                        bins.push(excluded(bin, Exclusion::OutOfRange));
                    }
                }
            }
        }
        features.push(FeatureDistances {
            feature: i,
            original_bin,
            multiplier: pref.difficulty.multiplier(),
            bins,
        });
    }

    let categorical_weight = if continuous_sum.1 > 0 && categorical_sum.1 > 0 && categorical_sum.0 > 0.0 {
        (continuous_sum.0 / continuous_sum.1 as f64) / (categorical_sum.0 / categorical_sum.1 as f64)
    } else {
        1.0
    };

    for f in &mut features {
        let categorical = !model.feature(f.feature).is_continuous();
        let impossible = f.multiplier.is_infinite();
        for b in &mut f.bins {
            if b.exclusion == Some(Exclusion::OriginalBin) {
                continue;
            }
            if categorical {
                b.rebalanced = b.base * categorical_weight;
            }
            b.effective = b.rebalanced * f.multiplier;
            if impossible {
                b.exclusion = Some(Exclusion::Impossible);
            }
        }
    }

    DistanceTable {
        features,
        categorical_weight,
    }
}

fn original_entry(bin: usize, value: FeatureValue) -> BinDistance {
    BinDistance {
        bin,
        representative: Some(value),
        base: 0.0,
        rebalanced: 0.0,
        effective: 0.0,
        exclusion: Some(Exclusion::OriginalBin),
    }
}

fn excluded(bin: usize, reason: Exclusion) -> BinDistance {
    BinDistance {
        bin,
        representative: None,
        base: f64::INFINITY,
        rebalanced: f64::INFINITY,
        effective: f64::INFINITY,
        exclusion: Some(reason),
    }
}
