use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Groups of operators, as reported in campaign tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorClass {
    Offset,
    Period,
    ExecutionTime,
    Precedence,
    Priority,
    Jitter,
    SharedMemory,
}

impl OperatorClass {
    pub const ALL: [OperatorClass; 7] = [
        OperatorClass::Offset,
        OperatorClass::Period,
        OperatorClass::ExecutionTime,
        OperatorClass::Precedence,
        OperatorClass::Priority,
        OperatorClass::Jitter,
        OperatorClass::SharedMemory,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorClass::Offset => "Offset",
            OperatorClass::Period => "Period",
            OperatorClass::ExecutionTime => "Execution Time",
            OperatorClass::Precedence => "Precedence",
            OperatorClass::Priority => "Priority",
            OperatorClass::Jitter => "Jitter",
            OperatorClass::SharedMemory => "Shared Memory",
        }
    }

    /// Lower-case identifier used on the command line and in CSV files.
    pub fn key(self) -> &'static str {
        match self {
            OperatorClass::Offset => "offset",
            OperatorClass::Period => "period",
            OperatorClass::ExecutionTime => "execution-time",
            OperatorClass::Precedence => "precedence",
            OperatorClass::Priority => "priority",
            OperatorClass::Jitter => "jitter",
            OperatorClass::SharedMemory => "shared-memory",
        }
    }

    pub fn operators(self) -> impl Iterator<Item = Operator> {
        Operator::ALL
            .into_iter()
            .filter(move |op| op.class() == self)
    }

    /// Whether the class is parameterized by a δ value.
    pub fn takes_delta(self) -> bool {
        !matches!(
            self,
            OperatorClass::Precedence | OperatorClass::SharedMemory
        )
    }
}

impl fmt::Display for OperatorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace(['_', ' '], "-");
        let class = match norm.as_str() {
            "offset" => OperatorClass::Offset,
            "period" => OperatorClass::Period,
            "execution-time" | "exec-time" | "execution" => OperatorClass::ExecutionTime,
            "precedence" => OperatorClass::Precedence,
            "priority" => OperatorClass::Priority,
            "jitter" => OperatorClass::Jitter,
            "shared-memory" | "memory" => OperatorClass::SharedMemory,
            _ => return Err(format!("unknown operator class {s:?}")),
        };
        Ok(class)
    }
}

/// The twenty mutation operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Operator {
    /// Increase task offset.
    #[serde(rename = "mITO")]
    IncreaseOffset,
    /// Decrease task offset.
    #[serde(rename = "mDTO")]
    DecreaseOffset,
    /// Increase task period (slower rate).
    #[serde(rename = "mITPER")]
    IncreasePeriod,
    /// Decrease task period (faster rate).
    #[serde(rename = "mDTPER")]
    DecreasePeriod,
    /// Increase one runnable's execution time.
    #[serde(rename = "mITET")]
    IncreaseExecutionTime,
    /// Decrease one runnable's execution time.
    #[serde(rename = "mDTET")]
    DecreaseExecutionTime,
    /// Add a task to another task's predecessors.
    #[serde(rename = "mATPREC")]
    AddTaskPrecedence,
    /// Remove a task from another task's predecessors.
    #[serde(rename = "mRTPREC")]
    RemoveTaskPrecedence,
    /// Add a runnable precedence within a task.
    #[serde(rename = "mARPREC")]
    AddRunnablePrecedence,
    /// Remove a runnable precedence within a task.
    #[serde(rename = "mRRPREC")]
    RemoveRunnablePrecedence,
    #[serde(rename = "mITPRI")]
    IncreasePriority,
    #[serde(rename = "mDTPRI")]
    DecreasePriority,
    #[serde(rename = "mITJ")]
    IncreaseJitter,
    #[serde(rename = "mDTJ")]
    DecreaseJitter,
    /// Define a store right before a read, using its initial value.
    #[serde(rename = "mDSM")]
    DefineSharedMemory,
    /// Drop a write.
    #[serde(rename = "mUDSM")]
    UndefineSharedMemory,
    /// Drop a write that initializes a store with a constant.
    #[serde(rename = "mRDSM")]
    RemoveDefinitionSharedMemory,
    /// Add a read of a store the task does not read yet.
    #[serde(rename = "mRSM")]
    ReferenceSharedMemory,
    /// Drop a read.
    #[serde(rename = "mRMSMR")]
    RemoveSharedMemoryReference,
    /// Point a read at a different store.
    #[serde(rename = "mRSMR")]
    ReplaceSharedMemoryReference,
}

impl Operator {
    pub const ALL: [Operator; 20] = [
        Operator::IncreaseOffset,
        Operator::DecreaseOffset,
        Operator::IncreasePeriod,
        Operator::DecreasePeriod,
        Operator::IncreaseExecutionTime,
        Operator::DecreaseExecutionTime,
        Operator::AddTaskPrecedence,
        Operator::RemoveTaskPrecedence,
        Operator::AddRunnablePrecedence,
        Operator::RemoveRunnablePrecedence,
        Operator::IncreasePriority,
        Operator::DecreasePriority,
        Operator::IncreaseJitter,
        Operator::DecreaseJitter,
        Operator::DefineSharedMemory,
        Operator::UndefineSharedMemory,
        Operator::RemoveDefinitionSharedMemory,
        Operator::ReferenceSharedMemory,
        Operator::RemoveSharedMemoryReference,
        Operator::ReplaceSharedMemoryReference,
    ];

    pub fn key(self) -> &'static str {
        use Operator::*;
        match self {
            IncreaseOffset => "mITO",
            DecreaseOffset => "mDTO",
            IncreasePeriod => "mITPER",
            DecreasePeriod => "mDTPER",
            IncreaseExecutionTime => "mITET",
            DecreaseExecutionTime => "mDTET",
            AddTaskPrecedence => "mATPREC",
            RemoveTaskPrecedence => "mRTPREC",
            AddRunnablePrecedence => "mARPREC",
            RemoveRunnablePrecedence => "mRRPREC",
            IncreasePriority => "mITPRI",
            DecreasePriority => "mDTPRI",
            IncreaseJitter => "mITJ",
            DecreaseJitter => "mDTJ",
            DefineSharedMemory => "mDSM",
            UndefineSharedMemory => "mUDSM",
            RemoveDefinitionSharedMemory => "mRDSM",
            ReferenceSharedMemory => "mRSM",
            RemoveSharedMemoryReference => "mRMSMR",
            ReplaceSharedMemoryReference => "mRSMR",
        }
    }

    pub fn title(self) -> &'static str {
        use Operator::*;
        match self {
            IncreaseOffset => "Increase Task Offset",
            DecreaseOffset => "Decrease Task Offset",
            IncreasePeriod => "Increase Task Period",
            DecreasePeriod => "Decrease Task Period",
            IncreaseExecutionTime => "Increase Task Execution Time",
            DecreaseExecutionTime => "Decrease Task Execution Time",
            AddTaskPrecedence => "Add Task Precedence",
            RemoveTaskPrecedence => "Remove Task Precedence",
            AddRunnablePrecedence => "Add Runnable Precedence",
            RemoveRunnablePrecedence => "Remove Runnable Precedence",
            IncreasePriority => "Increase Task Priority",
            DecreasePriority => "Decrease Task Priority",
            IncreaseJitter => "Increase Task Jitter",
            DecreaseJitter => "Decrease Task Jitter",
            DefineSharedMemory => "Define Shared Memory",
            UndefineSharedMemory => "Un-define Shared Memory",
            RemoveDefinitionSharedMemory => "Remove Definition Shared Memory",
            ReferenceSharedMemory => "Reference a Shared Memory",
            RemoveSharedMemoryReference => "Remove a Shared Memory Reference",
            ReplaceSharedMemoryReference => "Replace a Shared Memory Reference",
        }
    }

    pub fn class(self) -> OperatorClass {
        use Operator::*;
        match self {
            IncreaseOffset | DecreaseOffset => OperatorClass::Offset,
            IncreasePeriod | DecreasePeriod => OperatorClass::Period,
            IncreaseExecutionTime | DecreaseExecutionTime => OperatorClass::ExecutionTime,
            AddTaskPrecedence
            | RemoveTaskPrecedence
            | AddRunnablePrecedence
            | RemoveRunnablePrecedence => OperatorClass::Precedence,
            IncreasePriority | DecreasePriority => OperatorClass::Priority,
            IncreaseJitter | DecreaseJitter => OperatorClass::Jitter,
            DefineSharedMemory
            | UndefineSharedMemory
            | RemoveDefinitionSharedMemory
            | ReferenceSharedMemory
            | RemoveSharedMemoryReference
            | ReplaceSharedMemoryReference => OperatorClass::SharedMemory,
        }
    }

    /// The operator undoing this one for an equal δ, for the timing and
    /// priority pairs.
    pub fn inverse(self) -> Option<Operator> {
        use Operator::*;
        Some(match self {
            IncreaseOffset => DecreaseOffset,
            DecreaseOffset => IncreaseOffset,
            IncreasePeriod => DecreasePeriod,
            DecreasePeriod => IncreasePeriod,
            IncreaseExecutionTime => DecreaseExecutionTime,
            DecreaseExecutionTime => IncreaseExecutionTime,
            IncreasePriority => DecreasePriority,
            DecreasePriority => IncreasePriority,
            IncreaseJitter => DecreaseJitter,
            DecreaseJitter => IncreaseJitter,
            _ => return None,
        })
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Operator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Operator::ALL
            .into_iter()
            .find(|op| op.key().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown mutation operator {s:?}"))
    }
}

/// A set of enabled operators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorSet(BTreeSet<Operator>);

impl OperatorSet {
    pub fn all() -> OperatorSet {
        OperatorSet(Operator::ALL.into_iter().collect())
    }

    pub fn empty() -> OperatorSet {
        OperatorSet::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, op: Operator) -> bool {
        self.0.contains(&op)
    }

    pub fn insert(&mut self, op: Operator) {
        self.0.insert(op);
    }

    /// Enabled operators in catalog order.
    pub fn iter(&self) -> impl Iterator<Item = Operator> + '_ {
        self.0.iter().copied()
    }

    pub fn classes(&self) -> BTreeSet<OperatorClass> {
        self.0.iter().map(|op| op.class()).collect()
    }

    /// Parses a comma-separated list of operator keys (`mITO`), class names
    /// (`period`, `shared-memory`), `all` or `none`.
    pub fn parse(spec: &str) -> Result<OperatorSet, String> {
        let mut set = OperatorSet::empty();
        for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match token.to_ascii_lowercase().as_str() {
                "all" => set = OperatorSet::all(),
                "none" => {}
                _ => {
                    if let Ok(op) = token.parse::<Operator>() {
                        set.insert(op);
                    } else {
                        let class: OperatorClass = token
                            .parse()
                            .map_err(|_| format!("unknown operator or class {token:?}"))?;
                        class.operators().for_each(|op| set.insert(op));
                    }
                }
            }
        }
        Ok(set)
    }
}

impl FromIterator<Operator> for OperatorSet {
    fn from_iter<I: IntoIterator<Item = Operator>>(iter: I) -> Self {
        OperatorSet(iter.into_iter().collect())
    }
}
