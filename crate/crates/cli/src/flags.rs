//! Textual forms of goals and preferences accepted on the command line.
//!
//! Goals: `to-positive`, `to-negative`, `class=N`, `range=lo:hi` (either side
//! may be empty). Preferences: `--difficulty feature=level`,
//! `--range feature=lo:hi` or `--range feature=levelA|levelB`, and
//! `--max-features n`.

use recourse_core::recourse::{PreferenceSpec, Preferences, RecourseGoal};
use recourse_core::{EbmModel, Instance};

use crate::CliError;

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn split_assignment(text: &str) -> Result<(&str, &str), CliError> {
    text.split_once('=')
        .filter(|(name, _)| !name.is_empty())
        .ok_or_else(|| usage(format!("expected feature=value, got {text:?}")))
}

fn bound(text: &str) -> Result<Option<f64>, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(None);
    }
    text.parse::<f64>()
        .ok()
        .filter(|v| !v.is_nan())
        .map(Some)
        .ok_or_else(|| usage(format!("cannot parse {text:?} as a number")))
}

/// Parses a goal, or picks the flip of the current decision when absent.
pub fn parse_goal(model: &EbmModel, instance: &Instance, text: Option<&str>) -> Result<RecourseGoal, CliError> {
    let goal = match text {
        None => RecourseGoal::flip(model, &model.raw_score(instance))
            .ok_or_else(|| usage(format!("--goal is required for {} models", model.link())))?,
        Some(text) => parse_goal_text(text)?,
    };
    goal.validate(model)?;
    Ok(goal)
}

pub fn parse_goal_text(text: &str) -> Result<RecourseGoal, CliError> {
    match text.split_once('=') {
        None if text == "to-positive" => Ok(RecourseGoal::ToPositive),
        None if text == "to-negative" => Ok(RecourseGoal::ToNegative),
        Some(("class", n)) => n
            .trim()
            .parse()
            .map(|target| RecourseGoal::MulticlassTarget { target })
            .map_err(|_| usage(format!("bad class index {n:?}"))),
        Some(("range", r)) => {
            let (lo, hi) = r.split_once(':').ok_or_else(|| usage("range goal must look like range=lo:hi"))?;
            Ok(RecourseGoal::regression(bound(lo)?, bound(hi)?))
        }
        _ => Err(usage(format!(
            "unknown goal {text:?} (expected to-positive, to-negative, class=N or range=lo:hi)"
        ))),
    }
}

/// Turns repeated preference flags into validated preferences.
pub fn parse_preferences(
    model: &EbmModel,
    difficulty: &[String],
    range: &[String],
    max_features: Option<usize>,
) -> Result<Preferences, CliError> {
    let mut spec = PreferenceSpec {
        max_features,
        ..PreferenceSpec::default()
    };
    for item in difficulty {
        let (name, level) = split_assignment(item)?;
        let entry = spec.features.entry(name.to_string()).or_default();
        entry.difficulty = Some(level.parse().map_err(usage)?);
    }
    for item in range {
        let (name, value) = split_assignment(item)?;
        let entry = spec.features.entry(name.to_string()).or_default();
        let continuous = model
            .feature_index(name)
            .is_some_and(|f| model.feature(f).is_continuous());
        if continuous {
            let (lo, hi) = value
                .split_once(':')
                .ok_or_else(|| usage(format!("--range {name}: expected lo:hi")))?;
            entry.range = Some([bound(lo)?, bound(hi)?]);
        } else {
            entry.levels = Some(value.split('|').map(|l| l.trim().to_string()).collect());
        }
    }
    Ok(Preferences::from_spec(model, &spec)?)
}
