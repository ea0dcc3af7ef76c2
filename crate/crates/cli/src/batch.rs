//! Batch comparison of plan generators over a file of instances.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use recourse_core::recourse::{generate_plans, greedy_plan, PlanOptions, Preferences, RecourseGoal, RecoursePlan};
use recourse_core::{EbmModel, Instance, RecourseError};
use serde::Serialize;

use crate::{flags, read_instances, read_model, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    /// Exact integer program.
    Ilp,
    /// Cheapest single improving change, repeated until the goal holds.
    Greedy,
}

impl Generator {
    pub fn as_str(self) -> &'static str {
        match self {
            Generator::Ilp => "ilp",
            Generator::Greedy => "greedy",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ilp" => Ok(Generator::Ilp),
            "greedy" => Ok(Generator::Greedy),
            _ => Err(format!("unknown generator {s:?} (expected ilp or greedy)")),
        }
    }
}

/// One (instance, generator) outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchRow {
    /// Zero-based row of the instances file.
    pub instance: usize,
    pub generator: Generator,
    pub success: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub features_changed: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorSummary {
    pub generator: Generator,
    /// Means over successful instances only; `None` when none succeeded.
    pub mean_distance: Option<f64>,
    pub mean_features_changed: Option<f64>,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchReport {
    pub samples: usize,
    pub generators: Vec<GeneratorSummary>,
    #[serde(skip)]
    pub rows: Vec<BatchRow>,
}

impl BatchReport {
    pub fn summary(&self, generator: Generator) -> Option<&GeneratorSummary> {
        self.generators.iter().find(|s| s.generator == generator)
    }

    pub fn row(&self, instance: usize, generator: Generator) -> Option<&BatchRow> {
        self.rows.iter().find(|r| r.instance == instance && r.generator == generator)
    }

    /// One JSON object per (instance, generator).
    pub fn json_lines(&self) -> String {
        self.rows
            .iter()
            .map(|r| serde_json::to_string(r).expect("rows serialize") + "\n")
            .collect()
    }

    pub fn table(&self) -> String {
        let mut out = format!("{} instances\n", self.samples);
        out += &format!("{:<10}{:>16}{:>18}{:>10}\n", "generator", "mean distance", "mean # changed", "failures");
        let cell = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.4}"));
        for s in &self.generators {
            out += &format!(
                "{:<10}{:>16}{:>18}{:>10}\n",
                s.generator.as_str(),
                cell(s.mean_distance),
                cell(s.mean_features_changed),
                s.failures
            );
        }
        out
    }
}

/// Loads the model and instances, then runs [`evaluate`].
pub fn run_batch_eval(
    model_path: &Path,
    instances_path: &Path,
    goal: Option<&str>,
    generators: &[Generator],
    time_limit: Duration,
) -> Result<BatchReport, CliError> {
    let model = read_model(model_path)?;
    let instances = read_instances(&model, instances_path)?;
    if instances.is_empty() {
        return Err(CliError::io(instances_path, "no instances"));
    }
    let goal = goal.map(flags::parse_goal_text).transpose()?;
    evaluate(&model, &instances, goal.as_ref(), generators, time_limit)
}

/// Runs every generator on every instance with neutral preferences. Without
/// a goal each instance aims for the opposite binary decision.
pub fn evaluate(
    model: &EbmModel,
    instances: &[Instance],
    goal: Option<&RecourseGoal>,
    generators: &[Generator],
    time_limit: Duration,
) -> Result<BatchReport, CliError> {
    if generators.is_empty() {
        return Err(CliError::Usage("no generators selected".into()));
    }
    let prefs = Preferences::neutral(model);
    let options = PlanOptions {
        k: 1,
        time_limit,
        fast: false,
    };
    let mut rows = Vec::with_capacity(instances.len() * generators.len());
    for (n, instance) in instances.iter().enumerate() {
        let goal = match goal {
            Some(g) => {
                g.validate(model)?;
                *g
            }
            None => flags::parse_goal(model, instance, None)?,
        };
        for &generator in generators {
            let plan = match generator {
                Generator::Ilp => generate_plans(model, instance, &goal, &prefs, &options)
                    .map(|set| set.plans.into_iter().next()),
                Generator::Greedy => greedy_plan(model, instance, &goal, &prefs),
            };
            let plan: Option<RecoursePlan> = match plan {
                Ok(plan) => plan.filter(|p| p.verified),
                Err(RecourseError::GoalAlreadySatisfied) => {
                    return Err(CliError::NoRecourse(format!("instance {} already meets the goal", n + 1)))
                }
                Err(e) => {
                    log::warn!("instance {}: {generator} failed: {e}", n + 1);
                    None
                }
            };
            rows.push(BatchRow {
                instance: n,
                generator,
                success: plan.is_some(),
                distance: plan.as_ref().map(|p| p.distance),
                features_changed: plan.as_ref().map(|p| p.changes.len()),
            });
        }
    }
    let generators = generators
        .iter()
        .map(|&generator| {
            let ok: Vec<&BatchRow> = rows.iter().filter(|r| r.generator == generator && r.success).collect();
            let total = rows.iter().filter(|r| r.generator == generator).count();
            let mean = |f: &dyn Fn(&BatchRow) -> f64| (!ok.is_empty()).then(|| ok.iter().map(|r| f(r)).sum::<f64>() / ok.len() as f64);
            GeneratorSummary {
                generator,
                mean_distance: mean(&|r| r.distance.unwrap_or(0.0)),
                mean_features_changed: mean(&|r| r.features_changed.unwrap_or(0) as f64),
                failures: total - ok.len(),
            }
        })
        .collect();
    Ok(BatchReport {
        samples: instances.len(),
        generators,
        rows,
    })
}
