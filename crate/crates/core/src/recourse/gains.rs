//! Score gains of moving features to other bins, decomposed so that the
//! score change of any joint move is a sum of per-bin and per-pair terms.

use crate::model::{EbmModel, Instance};

/// Score gains relative to an instance.
///
/// Moving a set of features changes the score (class `c`) by the sum of
/// `main[i][b][c]` over moved features plus, for class 0, `interaction[t][b1][b2]`
/// over interaction terms whose two features both moved.
#[derive(Debug, Clone, PartialEq)]
pub struct GainTables {
    pub original_bins: Vec<usize>,
    /// `[feature][bin][class]`. Includes, for each interaction touching the
    /// feature, the change of that term with the partner left in place.
    pub main: Vec<Vec<Vec<f64>>>,
    /// `[term][bin of i][bin of j]`: joint change of the term minus both
    /// one-sided changes.
    pub interaction: Vec<Vec<Vec<f64>>>,
}

impl GainTables {
    /// Gain of class `class` for moving `feature` alone to `bin`.
    pub fn main_gain(&self, feature: usize, bin: usize, class: usize) -> f64 {
        self.main[feature][bin][class]
    }

    pub fn pair_gain(&self, term: usize, bin_i: usize, bin_j: usize) -> f64 {
        self.interaction[term][bin_i][bin_j]
    }
}

pub fn compute_gains(model: &EbmModel, instance: &Instance) -> GainTables {
    let original = model.bins_of(instance);
    let mut main: Vec<Vec<Vec<f64>>> = model
        .features()
        .iter()
        .zip(&original)
        .map(|(spec, &b0)| {
            spec.scores
                .iter()
                .map(|row| row.iter().zip(&spec.scores[b0]).map(|(s, s0)| s - s0).collect())
                .collect()
        })
        .collect();

    let mut interaction = Vec::with_capacity(model.interactions().len());
    for term in model.interactions() {
        let (i, j) = (term.feature_i, term.feature_j);
        let (bi, bj) = (original[i], original[j]);
        let t = &term.table;
        let base = t[bi][bj];
        for (b, gains) in main[i].iter_mut().enumerate() {
            gains[0] += t[b][bj] - base;
        }
        for (b, gains) in main[j].iter_mut().enumerate() {
            gains[0] += t[bi][b] - base;
        }
        let h: Vec<Vec<f64>> = (0..t.len())
            .map(|b1| {
                (0..t[b1].len())
                    .map(|b2| t[b1][b2] - t[b1][bj] - t[bi][b2] + base)
                    .collect()
            })
            .collect();
        interaction.push(h);
    }

    GainTables {
        original_bins: original,
        main,
        interaction,
    }
}
