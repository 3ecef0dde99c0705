use std::collections::VecDeque;

use super::{event, prepare, EventKind, Instance, Prepared, Segment, SimError, Trace};
use crate::behavior::{run_actions, RegisterFile, StoreState};
use crate::model::{SystemModel, Tick};

/// Preemptive fixed-priority simulation over `[0, horizon)`.
///
/// Every tick the eligible queue head with the highest priority executes
/// (lower spawn index wins ties). A higher-priority release preempts the
/// running instance, which later resumes with its remaining budget.
/// Runnable actions fire at the tick the runnable completes. An instance
/// still unfinished at its absolute deadline gets a `DeadlineMiss` and keeps
/// running; later instances of the same task queue behind it.
///
/// Within one tick events appear as: completions from the previous tick,
/// deadline misses, activations, then dispatch (`Preempt`, `Start` or
/// `Resume`, `RunnableStart`). Same-kind events follow spawn order.
pub fn simulate(model: &SystemModel) -> Result<Trace, SimError> {
    let (model, mut trace) = prepare(model)?;
    let detail = model.config.trace_detail;
    let prep = Prepared::new(&model);
    let n = prep.tasks.len();

    let mut store = StoreState::new(&model);
    let mut regs = RegisterFile::default();
    let mut queues: Vec<VecDeque<Instance>> = (0..n).map(|_| VecDeque::new()).collect();
    let mut next_k = vec![0u64; n];
    let mut running: Option<usize> = None;

    for t in 0..=prep.horizon {
        for (i, task) in prep.tasks.iter().enumerate() {
            for inst in queues[i].iter_mut() {
                if !inst.missed && inst.deadline == t {
                    inst.missed = true;
                    trace
                        .events
                        .push(event(t, EventKind::DeadlineMiss, task.id, None, inst.k));
                }
            }
        }
        if t == prep.horizon {
            break;
        }

        for (i, task) in prep.tasks.iter().enumerate() {
            if task.release(next_k[i]) == t {
                let k = next_k[i];
                next_k[i] += 1;
                queues[i].push_back(Instance::new(task, k));
                trace
                    .events
                    .push(event(t, EventKind::Activate, task.id, None, k));
            }
        }

        let chosen = prep.pick(&queues);
        if chosen != running {
            if let Some(r) = running {
                let task = &prep.tasks[r];
                let head = queues[r].front_mut().expect("running instance queued");
                head.transition(EventKind::Preempt);
                let in_progress = head.current.map(|p| task.runnables[p].id.as_str());
                trace
                    .events
                    .push(event(t, EventKind::Preempt, task.id, in_progress, head.k));
            }
            if let Some(c) = chosen {
                let task = &prep.tasks[c];
                let head = queues[c].front_mut().unwrap();
                let kind = if head.started {
                    EventKind::Resume
                } else {
                    EventKind::Start
                };
                head.transition(kind);
                head.started = true;
                let in_progress = head.current.map(|p| task.runnables[p].id.as_str());
                trace
                    .events
                    .push(event(t, kind, task.id, in_progress, head.k));
            }
            running = chosen;
        }

        let Some(c) = running else { continue };
        let task = &prep.tasks[c];
        let head = queues[c].front_mut().unwrap();
        let pos = head
            .next_runnable(task)
            .expect("acyclic runnable precedence leaves a runnable ready");
        let runnable = task.runnables[pos];
        if head.current.is_none() {
            head.current = Some(pos);
            trace.events.push(event(
                t,
                EventKind::RunnableStart,
                task.id,
                Some(&runnable.id),
                head.k,
            ));
        }

        if detail.gantt {
            let segs = &mut trace.gantt[c].segments;
            match segs.last_mut() {
                Some(s) if s.end.0 == t && s.runnable == runnable.id && s.instance == head.k => {
                    s.end = Tick(t + 1);
                }
                _ => segs.push(Segment {
                    start: Tick(t),
                    end: Tick(t + 1),
                    runnable: runnable.id.clone(),
                    instance: head.k,
                }),
            }
        }

        head.remaining[pos] -= 1;
        if head.remaining[pos] == 0 {
            let end = t + 1;
            head.done[pos] = true;
            head.current = None;
            let fx = run_actions(runnable, task.id, &mut store, &mut regs, Tick(end));
            if detail.accesses {
                trace.accesses.extend(fx.accesses);
            }
            if detail.outputs {
                trace.outputs.extend(fx.outputs);
            }
            trace.events.push(event(
                end,
                EventKind::RunnableEnd,
                task.id,
                Some(&runnable.id),
                head.k,
            ));
            if head.finished() {
                head.transition(EventKind::Terminate);
                trace
                    .events
                    .push(event(end, EventKind::Terminate, task.id, None, head.k));
                queues[c].pop_front();
                running = None;
            }
        }
    }

    Ok(trace)
}
