//! Candidate filtering and construction of the 0-1 program.

use crate::distance::{build_distance_table, DistanceTable, Exclusion};
use crate::error::RecourseError;
use crate::ilp::{Constraint, LinearProgram01, Sense};
use crate::model::{EbmModel, Instance};

use super::gains::{compute_gains, GainTables};
use super::goal::{RecourseGoal, STRICT_MARGIN};
use super::prefs::Preferences;

/// Distance table for `instance`, optionally thinned with `fast`.
///
/// `fast` applies two filters that never change the single best plan but can
/// change which plans follow it:
/// - without interaction terms in the model, bins whose gain points away from
///   a one-directional goal are dropped;
/// - for features outside every interaction term and a one-directional goal,
///   a bin is dropped unless it gains strictly more than every cheaper
///   remaining bin of the feature (and more than not moving at all).
pub fn enumerate_candidates(
    model: &EbmModel,
    instance: &Instance,
    prefs: &Preferences,
    goal: &RecourseGoal,
    fast: bool,
) -> DistanceTable {
    let mut table = build_distance_table(model, instance, prefs);
    if fast {
        filter_candidates(&mut table, &compute_gains(model, instance), model, goal);
    }
    table
}

pub(crate) fn filter_candidates(table: &mut DistanceTable, gains: &GainTables, model: &EbmModel, goal: &RecourseGoal) {
    let Some(direction) = goal.direction() else {
        return;
    };
    let no_interactions = model.interactions().is_empty();
    for f in &mut table.features {
        let feature = f.feature;
        if no_interactions {
            for b in f.bins.iter_mut().filter(|b| b.is_candidate()) {
                if direction * gains.main_gain(feature, b.bin, 0) < 0.0 {
                    b.exclusion = Some(Exclusion::OppositeGain);
                }
            }
        }
        if model.interactions().iter().any(|t| t.touches(feature)) {
            continue;
        }
        let mut order: Vec<usize> = (0..f.bins.len()).filter(|&k| f.bins[k].is_candidate()).collect();
        order.sort_by(|&a, &b| f.bins[a].effective.total_cmp(&f.bins[b].effective).then(a.cmp(&b)));
        let mut best = 0.0;
        for k in order {
            let gain = direction * gains.main_gain(feature, f.bins[k].bin, 0);
            if gain > best {
                best = gain;
            } else {
                f.bins[k].exclusion = Some(Exclusion::Dominated);
            }
        }
    }
}

/// Variable standing for "move `feature` to `bin`".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinVar {
    pub feature: usize,
    pub bin: usize,
}

/// Variable standing for "interaction `term` sees feature i at the bin of
/// `var_i` and feature j at the bin of `var_j`". `var_i == None` means
/// feature i keeps its original bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairVar {
    pub term: usize,
    pub var_i: Option<usize>,
    pub var_j: usize,
}

/// A program together with the meaning of its variables. Bin variables come
/// first (`0..bins.len()`), pair variables after them.
#[derive(Debug, Clone, PartialEq)]
pub struct RecourseProgram {
    pub program: LinearProgram01,
    pub bins: Vec<BinVar>,
    pub pairs: Vec<PairVar>,
}

impl RecourseProgram {
    /// Indices of selected bin variables in an assignment.
    pub fn bin_support(&self, assignment: &[bool]) -> Vec<usize> {
        (0..self.bins.len()).filter(|&v| assignment[v]).collect()
    }
}

/// Builds the minimum-distance program for reaching `goal` from `instance`.
///
/// Objective: total effective distance of the selected bins. Rows: at most one
/// bin per feature, the linearization of the interaction products, the goal rows, and the
/// cap on changed features.
pub fn build_program(
    model: &EbmModel,
    instance: &Instance,
    goal: &RecourseGoal,
    prefs: &Preferences,
    table: &DistanceTable,
    gains: &GainTables,
) -> Result<RecourseProgram, RecourseError> {
    let mut bins = Vec::new();
    let mut objective = Vec::new();
    let mut var_of: Vec<Vec<Option<usize>>> = table.features.iter().map(|f| vec![None; f.bins.len()]).collect();
    for (feature, entry) in table.candidates() {
        var_of[feature][entry.bin] = Some(bins.len());
        bins.push(BinVar { feature, bin: entry.bin });
        objective.push(entry.effective);
    }
    if bins.is_empty() {
        return Err(RecourseError::NoCandidates(
            "every feature is fixed, impossible, or restricted to its current value".into(),
        ));
    }

    // Pair variables per term: one per (candidate of i, candidate of j) and
    // one per candidate of j with i unmoved. With C_i, C_j the candidates:
    //   Σ_{b2∈C_j} z[b1][b2] ≤ v[b1]              for b1 ∈ C_i
    //   Σ_{b1∈C_i} z[b1][b2] + w[b2] = v[b2]      for b2 ∈ C_j
    //   Σ_{b2∈C_j} w[b2] + Σ_{b1∈C_i} v[b1] ≤ 1
    // For 0/1 v these force z[b1][b2] = v[b1]·v[b2] and w[b2] = v[b2]·(i
    // unmoved), whatever the sign of the pair gain.
    let mut pairs = Vec::new();
    let mut pair_gain = Vec::new();
    let mut pair_rows: Vec<Constraint> = Vec::new();
    let num_bins = bins.len();
    for (t, term) in model.interactions().iter().enumerate() {
        let side = |f: usize| -> Vec<(usize, usize)> {
            var_of[f].iter().enumerate().filter_map(|(b, v)| v.map(|v| (b, v))).collect()
        };
        let (ci, cj) = (side(term.feature_i), side(term.feature_j));
        let active = ci.iter().any(|&(b1, _)| cj.iter().any(|&(b2, _)| gains.pair_gain(t, b1, b2) != 0.0));
        if !active {
            continue;
        }
        let first = num_bins + pairs.len();
        for &(b1, vi) in &ci {
            for &(b2, vj) in &cj {
                pairs.push(PairVar { term: t, var_i: Some(vi), var_j: vj });
                pair_gain.push(gains.pair_gain(t, b1, b2));
            }
        }
        let w0 = num_bins + pairs.len();
        for &(_, vj) in &cj {
            pairs.push(PairVar { term: t, var_i: None, var_j: vj });
            pair_gain.push(0.0);
        }
        let z = |a: usize, b: usize| first + a * cj.len() + b;
        for (a, &(_, vi)) in ci.iter().enumerate() {
            let terms = (0..cj.len()).map(|b| (z(a, b), 1.0)).chain([(vi, -1.0)]);
            pair_rows.push(Constraint::new(terms, Sense::Le, 0.0));
        }
        for (b, &(_, vj)) in cj.iter().enumerate() {
            let terms = (0..ci.len()).map(|a| (z(a, b), 1.0)).chain([(w0 + b, 1.0), (vj, -1.0)]);
            pair_rows.push(Constraint::new(terms, Sense::Eq, 0.0));
        }
        let terms = (0..cj.len()).map(|b| (w0 + b, 1.0)).chain(ci.iter().map(|&(_, vi)| (vi, 1.0)));
        pair_rows.push(Constraint::new(terms, Sense::Le, 1.0));
    }
    objective.resize(num_bins + pairs.len(), 0.0);
    let mut program = LinearProgram01::new(objective);

    for f in 0..var_of.len() {
        let vars: Vec<usize> = var_of[f].iter().flatten().copied().collect();
        if vars.len() >= 2 {
            program.add_constraint(Constraint::new(vars.into_iter().map(|v| (v, 1.0)), Sense::Le, 1.0));
        }
    }
    for row in pair_rows {
        program.add_constraint(row);
    }

    let scores = model.raw_score(instance);
    let gain_terms = |class: usize| -> Vec<(usize, f64)> {
        let mut terms: Vec<(usize, f64)> = bins
            .iter()
            .enumerate()
            .map(|(v, b)| (v, gains.main_gain(b.feature, b.bin, class)))
            .collect();
        if class == 0 {
            terms.extend(
                pair_gain
                    .iter()
                    .enumerate()
                    .filter(|(_, h)| **h != 0.0)
                    .map(|(k, h)| (num_bins + k, *h)),
            );
        }
        terms
    };
    match *goal {
        RecourseGoal::ToPositive => {
            program.add_constraint(Constraint::new(gain_terms(0), Sense::Ge, -scores[0]));
        }
        RecourseGoal::ToNegative => {
            program.add_constraint(Constraint::new(gain_terms(0), Sense::Le, -scores[0] - STRICT_MARGIN));
        }
        RecourseGoal::RegressionRange { lo, hi } => {
            if lo.is_finite() {
                program.add_constraint(Constraint::new(gain_terms(0), Sense::Ge, lo - scores[0]));
            }
            if hi.is_finite() {
                program.add_constraint(Constraint::new(gain_terms(0), Sense::Le, hi - scores[0]));
            }
        }
        RecourseGoal::MulticlassTarget { target } => {
            let target_terms = gain_terms(target);
            for j in (0..scores.len()).filter(|&j| j != target) {
                let terms = gain_terms(j)
                    .into_iter()
                    .zip(&target_terms)
                    .map(|((v, gj), (_, gp))| (v, gj - gp));
                program.add_constraint(Constraint::new(terms, Sense::Le, scores[target] - scores[j] - STRICT_MARGIN));
            }
        }
    }
    program.add_constraint(Constraint::new(
        (0..num_bins).map(|v| (v, 1.0)),
        Sense::Le,
        prefs.max_features as f64,
    ));

    Ok(RecourseProgram { program, bins, pairs })
}
