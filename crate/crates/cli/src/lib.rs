//! Building blocks of the `recourse` command: flag parsing, instance files
//! and batch evaluation.

pub mod batch;
pub mod flags;

use std::path::{Path, PathBuf};

use recourse_core::model::load_model;
use recourse_core::{EbmModel, FeatureValue, Instance, ModelError, ReceiptError, RecourseError};

pub use batch::{run_batch_eval, BatchReport, BatchRow, Generator, GeneratorSummary};

/// Failures of a command, mapped onto the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NoRecourse(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Recourse(#[from] RecourseError),
    #[error(transparent)]
    Receipt(#[from] ReceiptError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::NoRecourse(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Recourse(RecourseError::GoalAlreadySatisfied) => 2,
            CliError::Recourse(_) => 1,
            CliError::Receipt(_) => 3,
        }
    }

    pub fn io(path: &Path, message: impl ToString) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            message: message.to_string(),
        }
    }
}

pub fn read_model(path: &Path) -> Result<EbmModel, CliError> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    load_model(std::io::BufReader::new(file)).map_err(|e| CliError::io(path, e))
}

/// Reads a comma-separated file whose header names the model's features, in
/// any order. Extra columns are ignored.
pub fn read_instances(model: &EbmModel, path: &Path) -> Result<Vec<Instance>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::io(path, e))?;
    let header = reader.headers().map_err(|e| CliError::io(path, e))?.clone();
    let columns = model
        .features()
        .iter()
        .map(|f| {
            header
                .iter()
                .position(|h| h == f.name)
                .ok_or_else(|| CliError::io(path, ModelError::MissingFeature(f.name.clone())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::io(path, e))?;
        let values: Vec<&str> = columns.iter().map(|&c| record.get(c).unwrap_or("")).collect();
        let instance = Instance::from_strings(model, &values).map_err(|e| CliError::io(path, format!("row {}: {e}", row + 1)))?;
        out.push(instance);
    }
    Ok(out)
}

/// Writes instances as a file [`read_instances`] accepts.
pub fn write_instances(model: &EbmModel, instances: &[Instance], path: &Path) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| CliError::io(path, e))?;
    let header: Vec<&str> = model.features().iter().map(|f| f.name.as_str()).collect();
    writer.write_record(&header).map_err(|e| CliError::io(path, e))?;
    for instance in instances {
        let row: Vec<String> = (0..header.len())
            .map(|f| match instance.value(f) {
                FeatureValue::Number(v) => v.to_string(),
                level => model.display_value(f, level),
            })
            .collect();
        writer.write_record(&row).map_err(|e| CliError::io(path, e))?;
    }
    writer.flush().map_err(|e| CliError::io(path, e))
}
