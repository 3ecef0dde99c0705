//! Task model: periodic tasks, the runnables mapped onto them, shared data
//! stores and the simulation configuration.

mod file;
mod timing;
mod validate;

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use file::{parse_model, serialize_model, ModelError, MODEL_SCHEMA};
pub use timing::{assign_rm_priorities, default_horizon, hyperperiod};
pub use validate::{validate, ValidationReport, Violation};

/// Integer count of base time units. Every duration in a model shares the
/// model's `resolution_us`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Tick(pub u64);

impl Tick {
    pub const ZERO: Tick = Tick(0);

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn checked_sub(self, rhs: Tick) -> Option<Tick> {
        self.0.checked_sub(rhs.0).map(Tick)
    }
}

impl Add for Tick {
    type Output = Tick;
    fn add(self, rhs: Tick) -> Tick {
        Tick(self.0 + rhs.0)
    }
}

impl Sub for Tick {
    type Output = Tick;
    fn sub(self, rhs: Tick) -> Tick {
        Tick(self.0 - rhs.0)
    }
}

impl Mul<u64> for Tick {
    type Output = Tick;
    fn mul(self, rhs: u64) -> Tick {
        Tick(self.0 * rhs)
    }
}

impl std::iter::Sum for Tick {
    fn sum<I: Iterator<Item = Tick>>(iter: I) -> Tick {
        Tick(iter.map(|t| t.0).sum())
    }
}

impl fmt::Display for Tick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for Tick {
    fn from(v: u64) -> Self {
        Tick(v)
    }
}

/// A periodically released task.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub id: String,
    pub offset: Tick,
    pub period: Tick,
    /// Larger is more important. `None` means "assign rate-monotonically".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priority: Option<i64>,
    pub jitter: Tick,
    /// Tasks that must run before a pending instance of this task may start.
    #[serde(
        default,
        rename = "precedes_after",
        skip_serializing_if = "Vec::is_empty"
    )]
    pub predecessors: Vec<String>,
    /// Runnable ids in declaration order.
    pub runnables: Vec<String>,
    /// Declaration order; breaks priority ties.
    #[serde(skip)]
    pub spawn_index: usize,
}

impl TaskSpec {
    /// Effective priority; tasks without one rank below every explicit
    /// priority until [`assign_rm_priorities`] runs.
    pub fn effective_priority(&self) -> i64 {
        self.priority.unwrap_or(i64::MIN)
    }

    /// Implicit deadline relative to release of the nominal period start.
    pub fn deadline(&self) -> Tick {
        self.period
    }
}

/// Smallest individually scheduled unit of work.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunnableSpec {
    pub id: String,
    pub wcet: Tick,
    #[serde(default)]
    pub actions: Vec<Action>,
    /// Runnables of the same task that must complete first within an instance.
    #[serde(default, rename = "after", skip_serializing_if = "Vec::is_empty")]
    pub predecessors: Vec<String>,
}

/// One step of a runnable's behavior. All actions of a runnable apply at
/// the tick its execution completes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Read {
        store: String,
        register: String,
    },
    Write {
        store: String,
        expr: Expr,
    },
    Output(Expr),
    /// Copies the register's current value into its unit-delay shadow.
    LatchDelay(String),
}

impl Action {
    pub fn store(&self) -> Option<&str> {
        match self {
            Action::Read { store, .. } | Action::Write { store, .. } => Some(store),
            Action::Output(_) | Action::LatchDelay(_) => None,
        }
    }
}

/// Integer expression over runnable-local registers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ExprRepr", into = "ExprRepr")]
pub enum Expr {
    Const(i64),
    Reg(String),
    Delayed(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn reg(name: &str) -> Expr {
        Expr::Reg(name.to_owned())
    }

    pub fn delayed(name: &str) -> Expr {
        Expr::Delayed(name.to_owned())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    /// True when the value does not depend on any register.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Reg(_) | Expr::Delayed(_) => false,
            Expr::Add(a, b) | Expr::Sub(a, b) => a.is_constant() && b.is_constant(),
        }
    }
}

// File representation: `10`, `{"reg": "r"}`, `{"delayed": "r"}`,
// `{"add": [a, b]}`, `{"sub": [a, b]}`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum ExprRepr {
    Const(i64),
    Reg { reg: String },
    Delayed { delayed: String },
    Add { add: Vec<Expr> },
    Sub { sub: Vec<Expr> },
}

impl TryFrom<ExprRepr> for Expr {
    type Error = String;

    fn try_from(repr: ExprRepr) -> Result<Self, Self::Error> {
        fn pair(op: &str, mut v: Vec<Expr>) -> Result<(Box<Expr>, Box<Expr>), String> {
            if v.len() != 2 {
                return Err(format!(
                    "`{op}` takes exactly two operands, got {}",
                    v.len()
                ));
            }
            let b = v.pop().unwrap();
            let a = v.pop().unwrap();
            Ok((Box::new(a), Box::new(b)))
        }
        Ok(match repr {
            ExprRepr::Const(v) => Expr::Const(v),
            ExprRepr::Reg { reg } => Expr::Reg(reg),
            ExprRepr::Delayed { delayed } => Expr::Delayed(delayed),
            ExprRepr::Add { add } => {
                let (a, b) = pair("add", add)?;
                Expr::Add(a, b)
            }
            ExprRepr::Sub { sub } => {
                let (a, b) = pair("sub", sub)?;
                Expr::Sub(a, b)
            }
        })
    }
}

impl From<Expr> for ExprRepr {
    fn from(e: Expr) -> Self {
        match e {
            Expr::Const(v) => ExprRepr::Const(v),
            Expr::Reg(reg) => ExprRepr::Reg { reg },
            Expr::Delayed(delayed) => ExprRepr::Delayed { delayed },
            Expr::Add(a, b) => ExprRepr::Add { add: vec![*a, *b] },
            Expr::Sub(a, b) => ExprRepr::Sub { sub: vec![*a, *b] },
        }
    }
}

/// Named shared memory cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataStoreSpec {
    pub id: String,
    #[serde(rename = "init")]
    pub initial_value: i64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    /// Preemptive fixed-priority scheduling that consumes execution time.
    #[default]
    TimeAware,
    /// Released work completes instantly at its release tick.
    ZeroTime,
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "time-aware" => Ok(Semantics::TimeAware),
            "zero-time" => Ok(Semantics::ZeroTime),
            other => Err(format!(
                "unknown semantics {other:?} (expected time-aware or zero-time)"
            )),
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::TimeAware => "time-aware",
            Semantics::ZeroTime => "zero-time",
        })
    }
}

/// Which parts of a trace get recorded. Scheduler events are always kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceDetail {
    pub gantt: bool,
    pub accesses: bool,
    pub outputs: bool,
}

impl Default for TraceDetail {
    fn default() -> Self {
        TraceDetail {
            gantt: true,
            accesses: true,
            outputs: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub semantics: Semantics,
    /// Simulated window is `[0, horizon)`.
    pub horizon: Tick,
    pub trace_detail: TraceDetail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemModel {
    pub resolution_us: u64,
    pub tasks: Vec<TaskSpec>,
    pub runnables: Vec<RunnableSpec>,
    pub stores: Vec<DataStoreSpec>,
    pub config: SimConfig,
}

impl SystemModel {
    /// Builds a model with a default configuration: time-aware semantics
    /// and [`default_horizon`]. Spawn indices follow declaration order.
    pub fn new(
        mut tasks: Vec<TaskSpec>,
        runnables: Vec<RunnableSpec>,
        stores: Vec<DataStoreSpec>,
    ) -> SystemModel {
        for (i, t) in tasks.iter_mut().enumerate() {
            t.spawn_index = i;
        }
        let mut model = SystemModel {
            resolution_us: 1000,
            tasks,
            runnables,
            stores,
            config: SimConfig {
                semantics: Semantics::TimeAware,
                horizon: Tick(1),
                trace_detail: TraceDetail::default(),
            },
        };
        model.config.horizon = default_horizon(&model);
        model
    }

    pub fn with_semantics(mut self, semantics: Semantics) -> SystemModel {
        self.config.semantics = semantics;
        self
    }

    pub fn with_horizon(mut self, horizon: Tick) -> SystemModel {
        self.config.horizon = horizon;
        self
    }

    pub fn task(&self, id: &str) -> Option<&TaskSpec> {
        self.tasks.iter().find(|t| t.id == id)
    }

    pub fn task_mut(&mut self, id: &str) -> Option<&mut TaskSpec> {
        self.tasks.iter_mut().find(|t| t.id == id)
    }

    pub fn runnable(&self, id: &str) -> Option<&RunnableSpec> {
        self.runnables.iter().find(|r| r.id == id)
    }

    pub fn runnable_mut(&mut self, id: &str) -> Option<&mut RunnableSpec> {
        self.runnables.iter_mut().find(|r| r.id == id)
    }

    pub fn store(&self, id: &str) -> Option<&DataStoreSpec> {
        self.stores.iter().find(|s| s.id == id)
    }

    /// The task a runnable is mapped to.
    pub fn task_of(&self, runnable: &str) -> Option<&TaskSpec> {
        self.tasks
            .iter()
            .find(|t| t.runnables.iter().any(|r| r == runnable))
    }

    /// Task WCET: the sum of its runnables' budgets.
    pub fn wcet(&self, task: &TaskSpec) -> Tick {
        task.runnables
            .iter()
            .filter_map(|r| self.runnable(r))
            .map(|r| r.wcet)
            .sum()
    }

    /// Processor utilization `Σ c/ρ` as a float, for reporting only.
    pub fn utilization(&self) -> f64 {
        self.tasks
            .iter()
            .map(|t| self.wcet(t).0 as f64 / t.period.0 as f64)
            .sum()
    }
}
