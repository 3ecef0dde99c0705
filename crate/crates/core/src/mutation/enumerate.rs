use std::collections::BTreeMap;

use super::{
    apply_mutant, DeltaConfig, MutationDescriptor, MutationError, Operator, OperatorClass,
    OperatorSet, Target,
};
use crate::model::{validate, Action, SystemModel, TaskSpec};

/// Result of site enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Enumeration {
    pub mutants: Vec<MutationDescriptor>,
    /// Sites whose mutant failed validation, per class.
    pub inapplicable: BTreeMap<OperatorClass, usize>,
}

/// All applicable first-order mutants, see [`enumerate_sites`].
pub fn enumerate_mutants(
    model: &SystemModel,
    cfg: &DeltaConfig,
    enabled: &OperatorSet,
) -> Result<Vec<MutationDescriptor>, MutationError> {
    enumerate_sites(model, cfg, enabled).map(|e| e.mutants)
}

/// Enumerates every mutation site of the enabled operators.
///
/// Order is task, then operator (catalog order), then site, then δ.
/// Candidates whose mutant would not validate are dropped and counted in
/// [`Enumeration::inapplicable`].
pub fn enumerate_sites(
    model: &SystemModel,
    cfg: &DeltaConfig,
    enabled: &OperatorSet,
) -> Result<Enumeration, MutationError> {
    if enabled.is_empty() {
        return Err(MutationError::EmptyOperatorSet);
    }
    for class in enabled.classes() {
        let deltas = cfg.for_class(class);
        if class.takes_delta() {
            if deltas.is_empty() {
                return Err(MutationError::EmptyDeltaList(class));
            }
            if deltas.contains(&0) {
                return Err(MutationError::ZeroDelta);
            }
        }
    }
    let report = validate(model);
    if !report.is_empty() {
        return Err(MutationError::InvalidInput(report));
    }

    let mut out = Enumeration::default();
    for task in &model.tasks {
        for op in enabled.iter() {
            for (target, replacement) in sites(model, task, op) {
                let deltas: Vec<Option<u64>> = if op.class().takes_delta() {
                    cfg.for_class(op.class())
                        .iter()
                        .copied()
                        .map(Some)
                        .collect()
                } else {
                    vec![None]
                };
                for delta in deltas {
                    let d = MutationDescriptor::new(op, target.clone(), delta, replacement.clone());
                    match apply_mutant(model, &d) {
                        Ok(_) => out.mutants.push(d),
                        Err(MutationError::Rejected { .. }) => {
                            *out.inapplicable.entry(op.class()).or_default() += 1
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }
    Ok(out)
}

fn actions_of<'m>(
    model: &'m SystemModel,
    task: &'m TaskSpec,
) -> impl Iterator<Item = (&'m str, usize, &'m Action)> + 'm {
    task.runnables
        .iter()
        .filter_map(|r| model.runnable(r))
        .flat_map(|r| {
            r.actions
                .iter()
                .enumerate()
                .map(move |(i, a)| (r.id.as_str(), i, a))
        })
}

fn action_target(task: &TaskSpec, runnable: &str, index: usize, store: &str) -> Target {
    Target::Action {
        task: task.id.clone(),
        runnable: runnable.to_owned(),
        index,
        store: store.to_owned(),
    }
}

/// Candidate sites of `op` in `task`, with the replacement store for mRSMR.
fn sites(model: &SystemModel, task: &TaskSpec, op: Operator) -> Vec<(Target, Option<String>)> {
    use Operator::*;
    let mut out = Vec::new();
    match op {
        IncreaseOffset | DecreaseOffset | IncreasePeriod | DecreasePeriod | IncreasePriority
        | DecreasePriority | IncreaseJitter | DecreaseJitter => out.push((
            Target::Task {
                task: task.id.clone(),
            },
            None,
        )),
        IncreaseExecutionTime | DecreaseExecutionTime => {
            for r in &task.runnables {
                out.push((
                    Target::Runnable {
                        task: task.id.clone(),
                        runnable: r.clone(),
                    },
                    None,
                ));
            }
        }
        AddTaskPrecedence => {
            for other in &model.tasks {
                if other.id != task.id && !task.predecessors.contains(&other.id) {
                    out.push((
                        Target::TaskPrecedence {
                            task: task.id.clone(),
                            predecessor: other.id.clone(),
                        },
                        None,
                    ));
                }
            }
        }
        RemoveTaskPrecedence => {
            for p in &task.predecessors {
                out.push((
                    Target::TaskPrecedence {
                        task: task.id.clone(),
                        predecessor: p.clone(),
                    },
                    None,
                ));
            }
        }
        AddRunnablePrecedence | RemoveRunnablePrecedence => {
            for r in task.runnables.iter().filter_map(|r| model.runnable(r)) {
                let candidates: Vec<&String> = if op == AddRunnablePrecedence {
                    task.runnables
                        .iter()
                        .filter(|p| **p != r.id && !r.predecessors.contains(p))
                        .collect()
                } else {
                    r.predecessors.iter().collect()
                };
                for p in candidates {
                    out.push((
                        Target::RunnablePrecedence {
                            task: task.id.clone(),
                            runnable: r.id.clone(),
                            predecessor: p.clone(),
                        },
                        None,
                    ));
                }
            }
        }
        DefineSharedMemory | RemoveSharedMemoryReference => {
            for (r, i, a) in actions_of(model, task) {
                if let Action::Read { store, .. } = a {
                    out.push((action_target(task, r, i, store), None));
                }
            }
        }
        UndefineSharedMemory | RemoveDefinitionSharedMemory => {
            for (r, i, a) in actions_of(model, task) {
                if let Action::Write { store, expr } = a {
                    if op == UndefineSharedMemory || expr.is_constant() {
                        out.push((action_target(task, r, i, store), None));
                    }
                }
            }
        }
        ReferenceSharedMemory => {
            for s in &model.stores {
                let read = actions_of(model, task)
                    .any(|(_, _, a)| matches!(a, Action::Read { store, .. } if *store == s.id));
                if !read {
                    out.push((
                        Target::TaskStore {
                            task: task.id.clone(),
                            store: s.id.clone(),
                        },
                        None,
                    ));
                }
            }
        }
        ReplaceSharedMemoryReference => {
            for (r, i, a) in actions_of(model, task) {
                if let Action::Read { store, .. } = a {
                    for other in model.stores.iter().filter(|s| s.id != *store) {
                        out.push((action_target(task, r, i, store), Some(other.id.clone())));
                    }
                }
            }
        }
    }
    out
}
