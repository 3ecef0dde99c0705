//! Brute-force reference schedulers.
//!
//! Every job released before the horizon is materialized up front and each
//! tick rescans the whole job list. Priorities, runnable selection and the
//! action semantics are re-derived here rather than borrowed from the
//! library, so agreement with the engine is evidence rather than tautology.

use std::collections::{BTreeMap, BTreeSet};

use mutsched::behavior::{AccessEvent, AccessKind, OutputEvent};
use mutsched::engine::{EventKind, Segment, TaskGantt, Trace, TraceEvent};
use mutsched::model::{Action, Expr, Semantics, SystemModel, Tick};

struct Job {
    task: usize,
    k: u64,
    release: u64,
    deadline: u64,
    remaining: Vec<u64>,
    done: Vec<bool>,
    current: Option<usize>,
    started: bool,
    finished: bool,
    missed: bool,
}

/// Priority of each task: the explicit value, else one more than the number
/// of distinct periods longer than its own.
fn priorities(model: &SystemModel) -> Vec<i64> {
    let periods: BTreeSet<u64> = model.tasks.iter().map(|t| t.period.0).collect();
    model
        .tasks
        .iter()
        .map(|t| {
            t.priority
                .unwrap_or_else(|| 1 + periods.iter().filter(|&&p| p > t.period.0).count() as i64)
        })
        .collect()
}

#[derive(Default)]
struct World {
    stores: BTreeMap<String, i64>,
    /// (runnable, register) -> (current, delayed)
    regs: BTreeMap<(String, String), (i64, i64)>,
    accesses: Vec<AccessEvent>,
    outputs: Vec<OutputEvent>,
}

impl World {
    fn new(model: &SystemModel) -> World {
        World {
            stores: model
                .stores
                .iter()
                .map(|s| (s.id.clone(), s.initial_value))
                .collect(),
            ..World::default()
        }
    }

    fn reg(&self, runnable: &str, name: &str) -> (i64, i64) {
        self.regs
            .get(&(runnable.to_owned(), name.to_owned()))
            .copied()
            .unwrap_or((0, 0))
    }

    fn eval(&self, runnable: &str, e: &Expr) -> i64 {
        match e {
            Expr::Const(v) => *v,
            Expr::Reg(r) => self.reg(runnable, r).0,
            Expr::Delayed(r) => self.reg(runnable, r).1,
            Expr::Add(a, b) => self.eval(runnable, a).wrapping_add(self.eval(runnable, b)),
            Expr::Sub(a, b) => self.eval(runnable, a).wrapping_sub(self.eval(runnable, b)),
        }
    }

    fn fire(&mut self, model: &SystemModel, task: &str, runnable: &str, t: u64) {
        let spec = model.runnable(runnable).unwrap();
        let access = |store: &str, kind, value| AccessEvent {
            time: Tick(t),
            task: task.to_owned(),
            runnable: runnable.to_owned(),
            store: store.to_owned(),
            kind,
            value,
        };
        for a in &spec.actions {
            match a {
                Action::Read { store, register } => {
                    let v = self.stores[store];
                    let key = (runnable.to_owned(), register.clone());
                    let delayed = self.reg(runnable, register).1;
                    self.regs.insert(key, (v, delayed));
                    self.accesses.push(access(store, AccessKind::Read, v));
                }
                Action::Write { store, expr } => {
                    let v = self.eval(runnable, expr);
                    self.stores.insert(store.clone(), v);
                    self.accesses.push(access(store, AccessKind::Write, v));
                }
                Action::Output(expr) => {
                    let value = self.eval(runnable, expr);
                    self.outputs.push(OutputEvent {
                        time: Tick(t),
                        task: task.to_owned(),
                        runnable: runnable.to_owned(),
                        value,
                    });
                }
                Action::LatchDelay(_) => {}
            }
        }
        for a in &spec.actions {
            if let Action::LatchDelay(name) = a {
                let cur = self.reg(runnable, name).0;
                self.regs
                    .insert((runnable.to_owned(), name.clone()), (cur, cur));
            }
        }
    }
}

fn jobs(model: &SystemModel) -> Vec<Job> {
    let horizon = model.config.horizon.0;
    let mut out = Vec::new();
    for (i, t) in model.tasks.iter().enumerate() {
        let mut k = 0;
        loop {
            let release = k * t.period.0 + t.offset.0 + t.jitter.0;
            if release >= horizon {
                break;
            }
            let n = t.runnables.len();
            out.push(Job {
                task: i,
                k,
                release,
                deadline: (k + 1) * t.period.0 + t.offset.0,
                remaining: t
                    .runnables
                    .iter()
                    .map(|r| model.runnable(r).unwrap().wcet.0)
                    .collect(),
                done: vec![false; n],
                current: None,
                started: false,
                finished: false,
                missed: false,
            });
            k += 1;
        }
    }
    out
}

fn ev(t: u64, kind: EventKind, task: &str, runnable: Option<&str>, k: u64) -> TraceEvent {
    TraceEvent {
        time: Tick(t),
        kind,
        task: task.to_owned(),
        runnable: runnable.map(str::to_owned),
        instance: k,
    }
}

/// Next runnable of a job: the one in progress, else the first unfinished
/// runnable in list order whose predecessors have all finished.
fn next_runnable(model: &SystemModel, job: &Job) -> Option<usize> {
    if job.current.is_some() {
        return job.current;
    }
    let names = &model.tasks[job.task].runnables;
    (0..names.len()).find(|&i| {
        !job.done[i]
            && model
                .runnable(&names[i])
                .unwrap()
                .predecessors
                .iter()
                .all(|p| job.done[names.iter().position(|x| x == p).unwrap()])
    })
}

fn empty_trace(model: &SystemModel) -> Trace {
    Trace {
        semantics: model.config.semantics,
        horizon: model.config.horizon,
        tasks: model.tasks.iter().map(|t| t.id.clone()).collect(),
        runnables: model.runnables.iter().map(|r| r.id.clone()).collect(),
        stores: model.stores.iter().map(|s| s.id.clone()).collect(),
        events: Vec::new(),
        accesses: Vec::new(),
        outputs: Vec::new(),
        gantt: model
            .tasks
            .iter()
            .map(|t| TaskGantt {
                task: t.id.clone(),
                segments: Vec::new(),
            })
            .collect(),
    }
}

/// Whether job `j` may be dispatched at `t`.
fn eligible(model: &SystemModel, all: &[Job], j: usize, t: u64) -> bool {
    let job = &all[j];
    if job.finished || job.release > t {
        return false;
    }
    let older_pending = all
        .iter()
        .any(|o| o.task == job.task && o.k < job.k && !o.finished);
    if older_pending {
        return false;
    }
    if job.started {
        return true;
    }
    let task = &model.tasks[job.task];
    task.predecessors.iter().all(|p| {
        let pi = model.tasks.iter().position(|x| x.id == *p).unwrap();
        !all.iter()
            .any(|o| o.task == pi && o.release <= t && !o.finished)
    })
}

fn select(model: &SystemModel, prio: &[i64], all: &[Job], t: u64) -> Option<usize> {
    let mut best: Option<usize> = None;
    for j in 0..all.len() {
        if !eligible(model, all, j, t) {
            continue;
        }
        best = match best {
            None => Some(j),
            Some(b) => {
                let (tj, tb) = (all[j].task, all[b].task);
                // Larger priority wins; the earlier-declared task wins ties.
                if prio[tj] > prio[tb] || (prio[tj] == prio[tb] && tj < tb) {
                    Some(j)
                } else {
                    Some(b)
                }
            }
        };
    }
    best
}

pub fn reference_time_aware(model: &SystemModel) -> Trace {
    let prio = priorities(model);
    let horizon = model.config.horizon.0;
    let mut all = jobs(model);
    let mut world = World::new(model);
    let mut trace = empty_trace(model);
    let mut running: Option<usize> = None;
    // Per tick: (task, runnable, instance) executed during [t, t+1).
    let mut executed: Vec<Option<(usize, String, u64)>> = vec![None; horizon as usize];

    for t in 0..=horizon {
        for ti in 0..model.tasks.len() {
            for job in all.iter_mut().filter(|j| j.task == ti) {
                if job.deadline == t && !job.finished && !job.missed && job.release < t {
                    job.missed = true;
                    trace.events.push(ev(
                        t,
                        EventKind::DeadlineMiss,
                        &model.tasks[ti].id,
                        None,
                        job.k,
                    ));
                }
            }
        }
        if t == horizon {
            break;
        }
        for ti in 0..model.tasks.len() {
            for job in all.iter().filter(|j| j.task == ti && j.release == t) {
                trace
                    .events
                    .push(ev(t, EventKind::Activate, &model.tasks[ti].id, None, job.k));
            }
        }

        let chosen = select(model, &prio, &all, t);
        if chosen != running {
            if let Some(r) = running {
                let job = &all[r];
                let task = &model.tasks[job.task];
                let current = job.current.map(|p| task.runnables[p].as_str());
                trace
                    .events
                    .push(ev(t, EventKind::Preempt, &task.id, current, job.k));
            }
            if let Some(c) = chosen {
                let job = &mut all[c];
                let task = &model.tasks[job.task];
                let kind = if job.started {
                    EventKind::Resume
                } else {
                    EventKind::Start
                };
                job.started = true;
                let current = job.current.map(|p| task.runnables[p].as_str());
                trace.events.push(ev(t, kind, &task.id, current, job.k));
            }
            running = chosen;
        }

        let Some(c) = running else { continue };
        let pos = next_runnable(model, &all[c]).expect("a runnable is ready");
        let job = &mut all[c];
        let task = &model.tasks[job.task];
        let rid = task.runnables[pos].clone();
        if job.current.is_none() {
            job.current = Some(pos);
            trace
                .events
                .push(ev(t, EventKind::RunnableStart, &task.id, Some(&rid), job.k));
        }
        executed[t as usize] = Some((job.task, rid.clone(), job.k));
        job.remaining[pos] -= 1;
        if job.remaining[pos] == 0 {
            job.done[pos] = true;
            job.current = None;
            world.fire(model, &task.id, &rid, t + 1);
            trace.events.push(ev(
                t + 1,
                EventKind::RunnableEnd,
                &task.id,
                Some(&rid),
                job.k,
            ));
            if job.done.iter().all(|&d| d) {
                job.finished = true;
                trace
                    .events
                    .push(ev(t + 1, EventKind::Terminate, &task.id, None, job.k));
                running = None;
            }
        }
    }

    for (t, slot) in executed.into_iter().enumerate() {
        let Some((ti, runnable, k)) = slot else {
            continue;
        };
        let segs = &mut trace.gantt[ti].segments;
        let t = t as u64;
        match segs.last_mut() {
            Some(s) if s.end.0 == t && s.runnable == runnable && s.instance == k => {
                s.end = Tick(t + 1)
            }
            _ => segs.push(Segment {
                start: Tick(t),
                end: Tick(t + 1),
                runnable,
                instance: k,
            }),
        }
    }
    trace.accesses = world.accesses;
    trace.outputs = world.outputs;
    trace
}

/// Zero-time reference: at each release tick, repeatedly run the eligible
/// job with the highest priority to completion.
pub fn reference_zero_time(model: &SystemModel) -> Trace {
    assert_eq!(model.config.semantics, Semantics::ZeroTime);
    let prio = priorities(model);
    let mut all = jobs(model);
    let mut world = World::new(model);
    let mut trace = empty_trace(model);
    let ticks: BTreeSet<u64> = all.iter().map(|j| j.release).collect();

    for t in ticks {
        for ti in 0..model.tasks.len() {
            for job in all.iter().filter(|j| j.task == ti && j.release == t) {
                trace
                    .events
                    .push(ev(t, EventKind::Activate, &model.tasks[ti].id, None, job.k));
            }
        }
        while let Some(c) = select(model, &prio, &all, t) {
            let task = &model.tasks[all[c].task];
            trace
                .events
                .push(ev(t, EventKind::Start, &task.id, None, all[c].k));
            while let Some(pos) = next_runnable(model, &all[c]) {
                let rid = task.runnables[pos].clone();
                trace.events.push(ev(
                    t,
                    EventKind::RunnableStart,
                    &task.id,
                    Some(&rid),
                    all[c].k,
                ));
                world.fire(model, &task.id, &rid, t);
                all[c].done[pos] = true;
                trace.events.push(ev(
                    t,
                    EventKind::RunnableEnd,
                    &task.id,
                    Some(&rid),
                    all[c].k,
                ));
            }
            all[c].finished = true;
            trace
                .events
                .push(ev(t, EventKind::Terminate, &task.id, None, all[c].k));
        }
    }
    trace.accesses = world.accesses;
    trace.outputs = world.outputs;
    trace
}

/// Runs the reference matching the model's semantics.
pub fn reference(model: &SystemModel) -> Trace {
    match model.config.semantics {
        Semantics::TimeAware => reference_time_aware(model),
        Semantics::ZeroTime => reference_zero_time(model),
    }
}
