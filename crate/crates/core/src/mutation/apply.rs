use super::{MutationDescriptor, MutationError, Operator, Target};
use crate::model::{assign_rm_priorities, validate, Action, Expr, SystemModel, Tick};

fn reject(d: &MutationDescriptor, reason: impl Into<String>) -> MutationError {
    MutationError::Rejected {
        id: d.id.clone(),
        reason: reason.into(),
    }
}

fn shape(d: &MutationDescriptor) -> MutationError {
    MutationError::ShapeMismatch {
        operator: d.operator,
        target: d.target.to_string(),
    }
}

fn missing(what: &str) -> MutationError {
    MutationError::TargetNotFound(what.to_owned())
}

/// Applies one mutation to a copy of `model`. The input is untouched.
///
/// Fails when the target does not exist or has the wrong shape for the
/// operator, or when the mutant would not be a valid model (for example a
/// period decreased to zero).
pub fn apply_mutant(
    model: &SystemModel,
    d: &MutationDescriptor,
) -> Result<SystemModel, MutationError> {
    use Operator::*;

    let mut out = model.clone();
    let delta = || -> Result<u64, MutationError> {
        match d.delta {
            Some(0) => Err(MutationError::ZeroDelta),
            Some(v) => Ok(v),
            None => Err(shape(d)),
        }
    };

    match (d.operator, &d.target) {
        (
            IncreaseOffset | DecreaseOffset | IncreasePeriod | DecreasePeriod | IncreasePriority
            | DecreasePriority | IncreaseJitter | DecreaseJitter,
            Target::Task { task },
        ) => {
            let delta = delta()?;
            // RM priority the task would get, for tasks without an explicit one.
            let rm_priority = assign_rm_priorities(model)
                .task(task)
                .and_then(|t| t.priority);
            let t = out.task_mut(task).ok_or_else(|| missing(task))?;
            match d.operator {
                IncreaseOffset => t.offset = t.offset + Tick(delta),
                DecreaseOffset => {
                    t.offset = t
                        .offset
                        .checked_sub(Tick(delta))
                        .ok_or_else(|| reject(d, "offset would become negative"))?
                }
                IncreasePeriod => t.period = t.period + Tick(delta),
                DecreasePeriod => {
                    t.period = t
                        .period
                        .checked_sub(Tick(delta))
                        .ok_or_else(|| reject(d, "period would become negative"))?
                }
                IncreasePriority => {
                    t.priority = Some(rm_priority.unwrap_or(0).saturating_add(delta as i64))
                }
                DecreasePriority => {
                    t.priority = Some(rm_priority.unwrap_or(0).saturating_sub(delta as i64))
                }
                IncreaseJitter => t.jitter = t.jitter + Tick(delta),
                DecreaseJitter => {
                    t.jitter = t
                        .jitter
                        .checked_sub(Tick(delta))
                        .ok_or_else(|| reject(d, "jitter would become negative"))?
                }
                _ => unreachable!(),
            }
        }
        (IncreaseExecutionTime | DecreaseExecutionTime, Target::Runnable { task, runnable }) => {
            let delta = delta()?;
            owned_runnable(model, task, runnable)?;
            let r = out.runnable_mut(runnable).unwrap();
            r.wcet = if d.operator == IncreaseExecutionTime {
                r.wcet + Tick(delta)
            } else {
                r.wcet
                    .checked_sub(Tick(delta))
                    .ok_or_else(|| reject(d, "wcet would become negative"))?
            };
        }
        (
            AddTaskPrecedence | RemoveTaskPrecedence,
            Target::TaskPrecedence { task, predecessor },
        ) => {
            if out.task(predecessor).is_none() {
                return Err(missing(predecessor));
            }
            let t = out.task_mut(task).ok_or_else(|| missing(task))?;
            let pos = t.predecessors.iter().position(|p| p == predecessor);
            match (d.operator, pos) {
                (AddTaskPrecedence, None) => t.predecessors.push(predecessor.clone()),
                (RemoveTaskPrecedence, Some(i)) => {
                    t.predecessors.remove(i);
                }
                (AddTaskPrecedence, Some(_)) => {
                    return Err(reject(d, "precedence already present"))
                }
                _ => return Err(reject(d, "precedence not present")),
            }
        }
        (
            AddRunnablePrecedence | RemoveRunnablePrecedence,
            Target::RunnablePrecedence {
                task,
                runnable,
                predecessor,
            },
        ) => {
            owned_runnable(model, task, runnable)?;
            let r = out.runnable_mut(runnable).unwrap();
            let pos = r.predecessors.iter().position(|p| p == predecessor);
            match (d.operator, pos) {
                (AddRunnablePrecedence, None) => r.predecessors.push(predecessor.clone()),
                (RemoveRunnablePrecedence, Some(i)) => {
                    r.predecessors.remove(i);
                }
                (AddRunnablePrecedence, Some(_)) => {
                    return Err(reject(d, "precedence already present"))
                }
                _ => return Err(reject(d, "precedence not present")),
            }
        }
        (
            DefineSharedMemory
            | UndefineSharedMemory
            | RemoveDefinitionSharedMemory
            | RemoveSharedMemoryReference
            | ReplaceSharedMemoryReference,
            Target::Action {
                task,
                runnable,
                index,
                store,
            },
        ) => {
            owned_runnable(model, task, runnable)?;
            let initial = out
                .store(store)
                .ok_or_else(|| missing(store))?
                .initial_value;
            let r = out.runnable_mut(runnable).unwrap();
            let action = r
                .actions
                .get(*index)
                .ok_or_else(|| missing(&d.target.to_string()))?;
            let is_read = matches!(action, Action::Read { store: s, .. } if s == store);
            let is_write = matches!(action, Action::Write { store: s, .. } if s == store);
            match d.operator {
                DefineSharedMemory if is_read => r.actions.insert(
                    *index,
                    Action::Write {
                        store: store.clone(),
                        expr: Expr::Const(initial),
                    },
                ),
                UndefineSharedMemory if is_write => {
                    r.actions.remove(*index);
                }
                RemoveDefinitionSharedMemory if matches!(action, Action::Write { expr, .. } if is_write && expr.is_constant()) =>
                {
                    r.actions.remove(*index);
                }
                RemoveSharedMemoryReference if is_read => {
                    r.actions.remove(*index);
                }
                ReplaceSharedMemoryReference if is_read => {
                    let replacement = d.replacement.as_ref().ok_or_else(|| shape(d))?;
                    if replacement == store {
                        return Err(reject(d, "replacement store equals the original"));
                    }
                    if let Action::Read { store: s, .. } = &mut r.actions[*index] {
                        *s = replacement.clone();
                    }
                }
                _ => return Err(shape(d)),
            }
        }
        (ReferenceSharedMemory, Target::TaskStore { task, store }) => {
            if out.store(store).is_none() {
                return Err(missing(store));
            }
            let first = out
                .task(task)
                .ok_or_else(|| missing(task))?
                .runnables
                .first()
                .cloned()
                .ok_or_else(|| missing(task))?;
            let r = out.runnable_mut(&first).ok_or_else(|| missing(&first))?;
            let register = fresh_register(&r.actions, store);
            r.actions.push(Action::Read {
                store: store.clone(),
                register,
            });
        }
        _ => return Err(shape(d)),
    }

    let report = validate(&out);
    if !report.is_empty() {
        return Err(reject(d, report.to_string()));
    }
    Ok(out)
}

fn owned_runnable(model: &SystemModel, task: &str, runnable: &str) -> Result<(), MutationError> {
    let t = model.task(task).ok_or_else(|| missing(task))?;
    if !t.runnables.iter().any(|r| r == runnable) || model.runnable(runnable).is_none() {
        return Err(missing(runnable));
    }
    Ok(())
}

fn fresh_register(actions: &[Action], store: &str) -> String {
    let used = |name: &str| {
        actions.iter().any(|a| match a {
            Action::Read { register, .. } => register == name,
            Action::LatchDelay(r) => r == name,
            _ => false,
        })
    };
    let base = format!("ref_{store}");
    let mut name = base.clone();
    let mut n = 1;
    while used(&name) {
        name = format!("{base}_{n}");
        n += 1;
    }
    name
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;

    fn fixture(name: &str) -> SystemModel {
        let text = match name {
            "table3" => include_str!("../../../../corpus/table3.json"),
            "table5" => include_str!("../../../../corpus/table5.json"),
            "throttle" => include_str!("../../../../corpus/throttle.json"),
            _ => unreachable!(),
        };
        parse_model(text).unwrap()
    }

    fn task_mutant(op: Operator, task: &str, delta: u64) -> MutationDescriptor {
        MutationDescriptor::new(op, Target::Task { task: task.into() }, Some(delta), None)
    }

    #[test]
    fn offset_increase_touches_only_the_offset() {
        let m = fixture("table3");
        let out = apply_mutant(&m, &task_mutant(Operator::IncreaseOffset, "T1", 3)).unwrap();
        assert_eq!(out.task("T1").unwrap().offset, Tick(3));
        let mut back = out.clone();
        back.task_mut("T1").unwrap().offset = Tick(0);
        assert_eq!(back, m);
    }

    #[test]
    fn period_decrease() {
        let out = apply_mutant(
            &fixture("table3"),
            &task_mutant(Operator::DecreasePeriod, "T1", 4),
        )
        .unwrap();
        assert_eq!(out.task("T1").unwrap().period, Tick(6));
        let out = apply_mutant(
            &fixture("throttle"),
            &task_mutant(Operator::DecreasePeriod, "T1", 1),
        )
        .unwrap();
        assert_eq!(out.task("T1").unwrap().period, Tick(4));
    }

    #[test]
    fn invalid_results_are_rejected() {
        let m = fixture("table3");
        for (op, delta) in [
            (Operator::DecreasePeriod, 10),
            (Operator::DecreaseOffset, 1),
            (Operator::DecreaseJitter, 1),
        ] {
            let err = apply_mutant(&m, &task_mutant(op, "T1", delta)).unwrap_err();
            assert!(matches!(err, MutationError::Rejected { .. }), "{op}: {err}");
        }
        let et = MutationDescriptor::new(
            Operator::DecreaseExecutionTime,
            Target::Runnable {
                task: "T1".into(),
                runnable: "R1".into(),
            },
            Some(3),
            None,
        );
        assert!(matches!(
            apply_mutant(&m, &et),
            Err(MutationError::Rejected { .. })
        ));
    }

    #[test]
    fn inverse_pairs_restore_the_model() {
        let m = fixture("table3");
        for op in Operator::ALL.into_iter().filter(|o| o.inverse().is_some()) {
            let target = if op.class() == crate::mutation::OperatorClass::ExecutionTime {
                Target::Runnable {
                    task: "T2".into(),
                    runnable: "R3".into(),
                }
            } else {
                Target::Task { task: "T2".into() }
            };
            let there = MutationDescriptor::new(op, target.clone(), Some(2), None);
            let back = MutationDescriptor::new(op.inverse().unwrap(), target, Some(2), None);
            let Ok(mutant) = apply_mutant(&m, &there) else {
                continue;
            };
            let restored = apply_mutant(&mutant, &back).unwrap();
            if op.class() == crate::mutation::OperatorClass::Priority {
                assert_eq!(restored.task("T2").unwrap().priority, Some(1), "{op}");
            } else {
                assert_eq!(restored, m, "{op}");
            }
        }
    }

    #[test]
    fn shared_memory_edits() {
        let m = fixture("table3");
        let at = |index, runnable: &str, task: &str| Target::Action {
            task: task.into(),
            runnable: runnable.into(),
            index,
            store: "A".into(),
        };
        let out = apply_mutant(
            &m,
            &MutationDescriptor::new(Operator::DefineSharedMemory, at(0, "R3", "T2"), None, None),
        )
        .unwrap();
        let r3 = out.runnable("R3").unwrap();
        assert_eq!(
            r3.actions[0],
            Action::Write {
                store: "A".into(),
                expr: Expr::Const(0)
            }
        );
        assert_eq!(r3.actions[1..], m.runnable("R3").unwrap().actions[..]);

        let out = apply_mutant(
            &m,
            &MutationDescriptor::new(
                Operator::RemoveDefinitionSharedMemory,
                at(0, "R1", "T1"),
                None,
                None,
            ),
        )
        .unwrap();
        assert!(out.runnable("R1").unwrap().actions.is_empty());

        // R2 writes a non-constant expression.
        assert!(apply_mutant(
            &m,
            &MutationDescriptor::new(
                Operator::RemoveDefinitionSharedMemory,
                at(1, "R2", "T2"),
                None,
                None
            ),
        )
        .is_err());

        let out = apply_mutant(
            &m,
            &MutationDescriptor::new(
                Operator::ReferenceSharedMemory,
                Target::TaskStore {
                    task: "T1".into(),
                    store: "A".into(),
                },
                None,
                None,
            ),
        )
        .unwrap();
        assert_eq!(
            out.runnable("R1").unwrap().actions.last(),
            Some(&Action::Read {
                store: "A".into(),
                register: "ref_A".into()
            })
        );
    }

    #[test]
    fn read_replacement_needs_another_store() {
        let m = fixture("table3");
        let d = MutationDescriptor::new(
            Operator::ReplaceSharedMemoryReference,
            Target::Action {
                task: "T2".into(),
                runnable: "R2".into(),
                index: 0,
                store: "A".into(),
            },
            None,
            Some("A".into()),
        );
        assert!(apply_mutant(&m, &d).is_err());
    }

    #[test]
    fn runnable_precedence_edits() {
        let m = fixture("table5");
        let d = MutationDescriptor::new(
            Operator::AddRunnablePrecedence,
            Target::RunnablePrecedence {
                task: "T1".into(),
                runnable: "R4".into(),
                predecessor: "R1".into(),
            },
            None,
            None,
        );
        let out = apply_mutant(&m, &d).unwrap();
        assert_eq!(out.runnable("R4").unwrap().predecessors, vec!["R1"]);
        assert!(apply_mutant(&out, &d).is_err());
    }

    #[test]
    fn shape_mismatch() {
        let m = fixture("table3");
        let d = MutationDescriptor::new(
            Operator::IncreaseOffset,
            Target::TaskStore {
                task: "T1".into(),
                store: "A".into(),
            },
            Some(1),
            None,
        );
        assert!(matches!(
            apply_mutant(&m, &d),
            Err(MutationError::ShapeMismatch { .. })
        ));
        let d = task_mutant(Operator::IncreaseOffset, "T9", 1);
        assert!(matches!(
            apply_mutant(&m, &d),
            Err(MutationError::TargetNotFound(_))
        ));
    }
}
