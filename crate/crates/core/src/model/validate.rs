use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::SystemModel;

/// One violated model invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyTaskSet,
    ZeroResolution,
    ZeroHorizon,
    DuplicateId {
        kind: &'static str,
        id: String,
    },
    NonPositivePeriod {
        task: String,
    },
    JitterNotBelowPeriod {
        task: String,
    },
    EmptyRunnableList {
        task: String,
    },
    UnknownRunnable {
        task: String,
        runnable: String,
    },
    UnmappedRunnable {
        runnable: String,
    },
    MultiplyMappedRunnable {
        runnable: String,
    },
    UnknownTask {
        task: String,
        reference: String,
    },
    SelfPrecedence {
        task: String,
    },
    DuplicatePrecedence {
        task: String,
        other: String,
    },
    TaskPrecedenceCycle {
        task: String,
    },
    ZeroWcet {
        runnable: String,
    },
    UnknownStore {
        runnable: String,
        store: String,
    },
    UnknownRunnablePredecessor {
        runnable: String,
        predecessor: String,
    },
    SelfRunnablePrecedence {
        runnable: String,
    },
    CrossTaskRunnablePrecedence {
        runnable: String,
        predecessor: String,
    },
    RunnablePrecedenceCycle {
        runnable: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            EmptyTaskSet => write!(f, "empty task set"),
            ZeroResolution => write!(f, "resolution must be positive"),
            ZeroHorizon => write!(f, "simulation horizon must be positive"),
            DuplicateId { kind, id } => write!(f, "duplicate {kind} id {id:?}"),
            NonPositivePeriod { task } => write!(f, "task {task}: period must be positive"),
            JitterNotBelowPeriod { task } => {
                write!(f, "task {task}: jitter must be smaller than the period")
            }
            EmptyRunnableList { task } => write!(f, "task {task}: no runnables"),
            UnknownRunnable { task, runnable } => {
                write!(f, "task {task}: unknown runnable {runnable:?}")
            }
            UnmappedRunnable { runnable } => {
                write!(f, "runnable {runnable} is not mapped to any task")
            }
            MultiplyMappedRunnable { runnable } => {
                write!(f, "runnable {runnable} is mapped more than once")
            }
            UnknownTask { task, reference } => {
                write!(f, "task {task}: precedence on unknown task {reference:?}")
            }
            SelfPrecedence { task } => write!(f, "task {task}: self-precedence"),
            DuplicatePrecedence { task, other } => {
                write!(f, "task {task}: duplicate precedence on {other}")
            }
            TaskPrecedenceCycle { task } => write!(f, "task precedence cycle through {task}"),
            ZeroWcet { runnable } => write!(f, "runnable {runnable}: wcet must be positive"),
            UnknownStore { runnable, store } => {
                write!(f, "runnable {runnable}: unknown store {store:?}")
            }
            UnknownRunnablePredecessor {
                runnable,
                predecessor,
            } => write!(
                f,
                "runnable {runnable}: precedence on unknown runnable {predecessor:?}"
            ),
            SelfRunnablePrecedence { runnable } => {
                write!(f, "runnable {runnable}: self-precedence")
            }
            CrossTaskRunnablePrecedence {
                runnable,
                predecessor,
            } => write!(
                f,
                "runnable {runnable}: cross-task runnable precedence on {predecessor}"
            ),
            RunnablePrecedenceCycle { runnable } => {
                write!(f, "runnable precedence cycle through {runnable}")
            }
        }
    }
}

/// Every violated invariant of a model; empty iff the model is simulable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contains(&self, pred: impl Fn(&Violation) -> bool) -> bool {
        self.violations.iter().any(pred)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn duplicates<'a>(ids: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut dups = Vec::new();
    for id in ids {
        if !seen.insert(id) && !dups.iter().any(|d: &String| d == id) {
            dups.push(id.to_owned());
        }
    }
    dups
}

/// Returns the first node found on a cycle of `edges`, if any.
fn find_cycle(nodes: &[&str], edges: &BTreeMap<&str, Vec<&str>>) -> Option<String> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    fn visit<'a>(
        n: &'a str,
        edges: &BTreeMap<&'a str, Vec<&'a str>>,
        marks: &mut BTreeMap<&'a str, Mark>,
    ) -> Option<String> {
        match marks.get(n).copied().unwrap_or(Mark::New) {
            Mark::Active => return Some(n.to_owned()),
            Mark::Done => return None,
            Mark::New => {}
        }
        marks.insert(n, Mark::Active);
        for &m in edges.get(n).map(Vec::as_slice).unwrap_or(&[]) {
            if let Some(c) = visit(m, edges, marks) {
                return Some(c);
            }
        }
        marks.insert(n, Mark::Done);
        None
    }
    let mut marks = BTreeMap::new();
    nodes.iter().find_map(|n| visit(n, edges, &mut marks))
}

/// Checks every structural and timing invariant of `model`.
pub fn validate(model: &SystemModel) -> ValidationReport {
    use Violation::*;
    let mut v = Vec::new();

    if model.tasks.is_empty() {
        v.push(EmptyTaskSet);
    }
    if model.resolution_us == 0 {
        v.push(ZeroResolution);
    }
    if model.config.horizon.0 == 0 {
        v.push(ZeroHorizon);
    }
    for (kind, dups) in [
        (
            "task",
            duplicates(model.tasks.iter().map(|t| t.id.as_str())),
        ),
        (
            "runnable",
            duplicates(model.runnables.iter().map(|r| r.id.as_str())),
        ),
        (
            "store",
            duplicates(model.stores.iter().map(|s| s.id.as_str())),
        ),
    ] {
        v.extend(dups.into_iter().map(|id| DuplicateId { kind, id }));
    }

    let mut mapped: BTreeMap<&str, usize> = BTreeMap::new();
    for task in &model.tasks {
        if task.period.0 == 0 {
            v.push(NonPositivePeriod {
                task: task.id.clone(),
            });
        } else if task.jitter >= task.period {
            v.push(JitterNotBelowPeriod {
                task: task.id.clone(),
            });
        }
        if task.runnables.is_empty() {
            v.push(EmptyRunnableList {
                task: task.id.clone(),
            });
        }
        for r in &task.runnables {
            if model.runnable(r).is_none() {
                v.push(UnknownRunnable {
                    task: task.id.clone(),
                    runnable: r.clone(),
                });
            }
            *mapped.entry(r.as_str()).or_default() += 1;
        }
        let mut seen = BTreeSet::new();
        for p in &task.predecessors {
            if *p == task.id {
                v.push(SelfPrecedence {
                    task: task.id.clone(),
                });
            } else if model.task(p).is_none() {
                v.push(UnknownTask {
                    task: task.id.clone(),
                    reference: p.clone(),
                });
            }
            if !seen.insert(p) {
                v.push(DuplicatePrecedence {
                    task: task.id.clone(),
                    other: p.clone(),
                });
            }
        }
    }

    let task_nodes: Vec<&str> = model.tasks.iter().map(|t| t.id.as_str()).collect();
    let task_edges: BTreeMap<&str, Vec<&str>> = model
        .tasks
        .iter()
        .map(|t| {
            let preds = t
                .predecessors
                .iter()
                .filter(|p| **p != t.id)
                .map(String::as_str)
                .collect();
            (t.id.as_str(), preds)
        })
        .collect();
    if let Some(task) = find_cycle(&task_nodes, &task_edges) {
        v.push(TaskPrecedenceCycle { task });
    }

    for r in &model.runnables {
        match mapped.get(r.id.as_str()) {
            None => v.push(UnmappedRunnable {
                runnable: r.id.clone(),
            }),
            Some(&n) if n > 1 => v.push(MultiplyMappedRunnable {
                runnable: r.id.clone(),
            }),
            _ => {}
        }
        if r.wcet.0 == 0 {
            v.push(ZeroWcet {
                runnable: r.id.clone(),
            });
        }
        for store in r.actions.iter().filter_map(|a| a.store()) {
            if model.store(store).is_none() {
                v.push(UnknownStore {
                    runnable: r.id.clone(),
                    store: store.to_owned(),
                });
            }
        }
        let owner = model.task_of(&r.id).map(|t| t.id.as_str());
        for p in &r.predecessors {
            if *p == r.id {
                v.push(SelfRunnablePrecedence {
                    runnable: r.id.clone(),
                });
            } else if model.runnable(p).is_none() {
                v.push(UnknownRunnablePredecessor {
                    runnable: r.id.clone(),
                    predecessor: p.clone(),
                });
            } else if model.task_of(p).map(|t| t.id.as_str()) != owner {
                v.push(CrossTaskRunnablePrecedence {
                    runnable: r.id.clone(),
                    predecessor: p.clone(),
                });
            }
        }
    }

    let runnable_nodes: Vec<&str> = model.runnables.iter().map(|r| r.id.as_str()).collect();
    let runnable_edges: BTreeMap<&str, Vec<&str>> = model
        .runnables
        .iter()
        .map(|r| {
            let preds = r
                .predecessors
                .iter()
                .filter(|p| **p != r.id)
                .map(String::as_str)
                .collect();
            (r.id.as_str(), preds)
        })
        .collect();
    if let Some(runnable) = find_cycle(&runnable_nodes, &runnable_edges) {
        v.push(RunnablePrecedenceCycle { runnable });
    }

    ValidationReport { violations: v }
}
