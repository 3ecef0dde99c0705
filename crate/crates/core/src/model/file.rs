//! JSON model files (`schema: "mutsched/1"`).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    default_horizon, validate, DataStoreSpec, RunnableSpec, SimConfig, SystemModel, TaskSpec,
    TraceDetail, ValidationReport,
};
use crate::model::Semantics;

pub const MODEL_SCHEMA: &str = "mutsched/1";

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema {0:?} (expected {MODEL_SCHEMA:?})")]
    Schema(String),
    #[error("invalid model: {0}")]
    Invalid(ValidationReport),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    schema: String,
    #[serde(default = "default_resolution")]
    resolution_us: u64,
    tasks: Vec<TaskSpec>,
    runnables: Vec<RunnableSpec>,
    #[serde(default)]
    stores: Vec<DataStoreSpec>,
}

fn default_resolution() -> u64 {
    1000
}

/// Parses and validates a model file. Tasks without a `priority` keep
/// `None` so [`super::assign_rm_priorities`] can fill them in. The returned
/// configuration is time-aware with the default horizon.
pub fn parse_model(text: &str) -> Result<SystemModel, ModelError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.schema != MODEL_SCHEMA {
        return Err(ModelError::Schema(file.schema));
    }
    let mut model = SystemModel {
        resolution_us: file.resolution_us,
        tasks: file.tasks,
        runnables: file.runnables,
        stores: file.stores,
        config: SimConfig {
            semantics: Semantics::TimeAware,
            horizon: super::Tick(1),
            trace_detail: TraceDetail::default(),
        },
    };
    for (i, t) in model.tasks.iter_mut().enumerate() {
        t.spawn_index = i;
    }
    model.config.horizon = default_horizon(&model);
    let report = validate(&model);
    if !report.is_empty() {
        return Err(ModelError::Invalid(report));
    }
    Ok(model)
}

/// Writes `model` in the model-file schema. The simulation configuration is
/// not part of the file.
pub fn serialize_model(model: &SystemModel) -> String {
    let file = ModelFile {
        schema: MODEL_SCHEMA.to_owned(),
        resolution_us: model.resolution_us,
        tasks: model.tasks.clone(),
        runnables: model.runnables.clone(),
        stores: model.stores.clone(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("model serializes");
    out.push('\n');
    out
}
