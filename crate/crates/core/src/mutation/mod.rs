//! First-order model mutation: the operator catalog, site enumeration and
//! descriptor application.

mod apply;
mod enumerate;
mod operator;

use std::fmt::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::ValidationReport;

pub use apply::apply_mutant;
pub use enumerate::{enumerate_mutants, enumerate_sites, Enumeration};
pub use operator::{Operator, OperatorClass, OperatorSet};

/// Where a mutation applies.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Task {
        task: String,
    },
    /// `predecessor` in the predecessor list of `task`.
    TaskPrecedence {
        task: String,
        predecessor: String,
    },
    Runnable {
        task: String,
        runnable: String,
    },
    /// `predecessor` in the predecessor list of `runnable`.
    RunnablePrecedence {
        task: String,
        runnable: String,
        predecessor: String,
    },
    /// The action at `index` of `runnable`, which touches `store`.
    Action {
        task: String,
        runnable: String,
        index: usize,
        store: String,
    },
    TaskStore {
        task: String,
        store: String,
    },
}

impl Target {
    pub fn task(&self) -> &str {
        match self {
            Target::Task { task }
            | Target::TaskPrecedence { task, .. }
            | Target::Runnable { task, .. }
            | Target::RunnablePrecedence { task, .. }
            | Target::Action { task, .. }
            | Target::TaskStore { task, .. } => task,
        }
    }

    fn id_parts(&self) -> Vec<&str> {
        match self {
            Target::Task { task } => vec![task],
            Target::TaskPrecedence { task, predecessor } => vec![task, predecessor],
            Target::Runnable { task, runnable } => vec![task, runnable],
            Target::RunnablePrecedence {
                task,
                runnable,
                predecessor,
            } => vec![task, runnable, predecessor],
            Target::Action {
                runnable, store, ..
            } => vec![runnable, store],
            Target::TaskStore { task, store } => vec![task, store],
        }
    }
}

/// Slash-separated path, e.g. `T2/R3/precr/R2` or `T2/R2/actions/0/A`.
impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Task { task } => write!(f, "{task}"),
            Target::TaskPrecedence { task, predecessor } => write!(f, "{task}/prect/{predecessor}"),
            Target::Runnable { task, runnable } => write!(f, "{task}/{runnable}"),
            Target::RunnablePrecedence {
                task,
                runnable,
                predecessor,
            } => write!(f, "{task}/{runnable}/precr/{predecessor}"),
            Target::Action {
                task,
                runnable,
                index,
                store,
            } => write!(f, "{task}/{runnable}/actions/{index}/{store}"),
            Target::TaskStore { task, store } => write!(f, "{task}/stores/{store}"),
        }
    }
}

/// One first-order mutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MutationDescriptor {
    pub id: String,
    pub operator: Operator,
    pub target: Target,
    /// Magnitude for timing and priority operators; always positive.
    pub delta: Option<u64>,
    /// Replacement store for `mRSMR`.
    pub replacement: Option<String>,
}

fn sanitize(part: &str) -> String {
    part.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

impl MutationDescriptor {
    pub fn new(
        operator: Operator,
        target: Target,
        delta: Option<u64>,
        replacement: Option<String>,
    ) -> MutationDescriptor {
        let mut id = operator.key().to_owned();
        for part in target.id_parts() {
            id.push('-');
            id.push_str(&sanitize(part));
        }
        if let Target::Action { index, .. } = &target {
            let _ = write!(id, "-a{index}");
        }
        if let Some(r) = &replacement {
            id.push('-');
            id.push_str(&sanitize(r));
        }
        if let Some(d) = delta {
            let _ = write!(id, "-d{d}");
        }
        MutationDescriptor {
            id,
            operator,
            target,
            delta,
            replacement,
        }
    }

    /// Manifest record: `id<TAB>operator<TAB>target<TAB>argument`, where the
    /// argument is δ, the replacement store, or `-`.
    pub fn manifest_line(&self) -> String {
        let arg = match (&self.delta, &self.replacement) {
            (Some(d), _) => d.to_string(),
            (None, Some(r)) => r.clone(),
            (None, None) => "-".to_owned(),
        };
        format!("{}\t{}\t{}\t{}", self.id, self.operator, self.target, arg)
    }
}

pub fn write_manifest(mutants: &[MutationDescriptor]) -> String {
    mutants.iter().fold(String::new(), |mut out, m| {
        out.push_str(&m.manifest_line());
        out.push('\n');
        out
    })
}

fn default_deltas() -> Vec<u64> {
    vec![1, 2, 3]
}

/// δ values to enumerate per parameterized operator class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaConfig {
    #[serde(default = "default_deltas")]
    pub offset: Vec<u64>,
    #[serde(default = "default_deltas")]
    pub period: Vec<u64>,
    #[serde(default = "default_deltas")]
    pub execution_time: Vec<u64>,
    #[serde(default = "default_deltas")]
    pub priority: Vec<u64>,
    #[serde(default = "default_deltas")]
    pub jitter: Vec<u64>,
}

impl Default for DeltaConfig {
    fn default() -> Self {
        DeltaConfig {
            offset: default_deltas(),
            period: default_deltas(),
            execution_time: default_deltas(),
            priority: default_deltas(),
            jitter: default_deltas(),
        }
    }
}

impl DeltaConfig {
    /// The same δ list for every class.
    pub fn uniform(deltas: Vec<u64>) -> DeltaConfig {
        DeltaConfig {
            offset: deltas.clone(),
            period: deltas.clone(),
            execution_time: deltas.clone(),
            priority: deltas.clone(),
            jitter: deltas,
        }
    }

    pub fn for_class(&self, class: OperatorClass) -> &[u64] {
        match class {
            OperatorClass::Offset => &self.offset,
            OperatorClass::Period => &self.period,
            OperatorClass::ExecutionTime => &self.execution_time,
            OperatorClass::Priority => &self.priority,
            OperatorClass::Jitter => &self.jitter,
            OperatorClass::Precedence | OperatorClass::SharedMemory => &[],
        }
    }
}

#[derive(Debug, Error)]
pub enum MutationError {
    #[error("no mutation operator enabled")]
    EmptyOperatorSet,
    #[error("no delta values configured for the {0} class")]
    EmptyDeltaList(OperatorClass),
    #[error("delta must be positive")]
    ZeroDelta,
    #[error("model is not valid before mutation: {0}")]
    InvalidInput(ValidationReport),
    #[error("{operator} does not apply to target {target}")]
    ShapeMismatch { operator: Operator, target: String },
    #[error("target {0} not found in model")]
    TargetNotFound(String),
    #[error("mutant {id} rejected: {reason}")]
    Rejected { id: String, reason: String },
}
