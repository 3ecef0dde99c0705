use std::collections::VecDeque;

use super::{event, prepare, EventKind, Instance, Prepared, SimError, Trace};
use crate::behavior::{run_actions, RegisterFile, StoreState};
use crate::model::{SystemModel, Tick};

/// Zero-execution-time baseline: at each release tick every released
/// instance runs to completion instantly, highest priority first, with
/// precedence honored among the instances released at that tick.
/// Budgets are ignored, nothing is preempted and no deadline is missed.
/// Events keep execution order within a tick.
pub fn simulate_zero_time(model: &SystemModel) -> Result<Trace, SimError> {
    let (model, mut trace) = prepare(model)?;
    let detail = model.config.trace_detail;
    let prep = Prepared::new(&model);
    let n = prep.tasks.len();

    let mut store = StoreState::new(&model);
    let mut regs = RegisterFile::default();
    let mut queues: Vec<VecDeque<Instance>> = (0..n).map(|_| VecDeque::new()).collect();
    let mut next_k = vec![0u64; n];

    while let Some(t) = (0..n)
        .map(|i| prep.tasks[i].release(next_k[i]))
        .min()
        .filter(|&t| t < prep.horizon)
    {
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

        while let Some(c) = prep.pick(&queues) {
            let task = &prep.tasks[c];
            let mut inst = queues[c].pop_front().unwrap();
            inst.transition(EventKind::Start);
            inst.started = true;
            trace
                .events
                .push(event(t, EventKind::Start, task.id, None, inst.k));
            while let Some(pos) = inst.next_runnable(task) {
                let runnable = task.runnables[pos];
                trace.events.push(event(
                    t,
                    EventKind::RunnableStart,
                    task.id,
                    Some(&runnable.id),
                    inst.k,
                ));
                let fx = run_actions(runnable, task.id, &mut store, &mut regs, Tick(t));
                if detail.accesses {
                    trace.accesses.extend(fx.accesses);
                }
                if detail.outputs {
                    trace.outputs.extend(fx.outputs);
                }
                inst.done[pos] = true;
                trace.events.push(event(
                    t,
                    EventKind::RunnableEnd,
                    task.id,
                    Some(&runnable.id),
                    inst.k,
                ));
            }
            inst.transition(EventKind::Terminate);
            trace
                .events
                .push(event(t, EventKind::Terminate, task.id, None, inst.k));
        }
    }

    Ok(trace)
}
