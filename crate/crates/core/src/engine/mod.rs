//! Deterministic discrete-time scheduler.
//!
//! Two semantics are provided: [`simulate`] runs preemptive fixed-priority
//! scheduling on one processor where every runnable consumes its budget
//! tick by tick, and [`simulate_zero_time`] completes all released work
//! instantly at its release tick.
//!
//! Task precedence: an instance that has not started yet may not start
//! while any of its task's predecessors has a released, unfinished
//! instance. Runnable precedence: within an instance the next runnable is
//! the first one in declaration order whose predecessors have completed.

mod export;
mod gantt;
mod time_aware;
mod zero_time;

use std::cmp::Reverse;
use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::behavior::{AccessEvent, OutputEvent};
use crate::model::{
    assign_rm_priorities, validate, RunnableSpec, Semantics, SystemModel, Tick, ValidationReport,
};

pub use export::{
    parse_events_tsv, write_accesses_tsv, write_events_tsv, write_gantt_csv, write_outputs_tsv,
    TraceFormatError,
};
pub use gantt::{derive_gantt, execution_order, render_ascii, render_svg, GanttError};
pub use time_aware::simulate;
pub use zero_time::simulate_zero_time;

/// OSEK-style basic task states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaskState {
    Suspended,
    Ready,
    Running,
}

impl TaskState {
    /// State after `kind`, or `None` if the transition is not allowed.
    pub fn apply(self, kind: EventKind) -> Option<TaskState> {
        use EventKind::*;
        use TaskState::*;
        match (self, kind) {
            (Suspended, Activate) => Some(Ready),
            (Ready, Start) | (Ready, Resume) => Some(Running),
            (Running, Preempt) => Some(Ready),
            (Running, Terminate) => Some(Suspended),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    Activate,
    Start,
    Preempt,
    Resume,
    Terminate,
    DeadlineMiss,
    RunnableStart,
    RunnableEnd,
}

impl EventKind {
    pub const ALL: [EventKind; 8] = [
        EventKind::Activate,
        EventKind::Start,
        EventKind::Preempt,
        EventKind::Resume,
        EventKind::Terminate,
        EventKind::DeadlineMiss,
        EventKind::RunnableStart,
        EventKind::RunnableEnd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EventKind::Activate => "Activate",
            EventKind::Start => "Start",
            EventKind::Preempt => "Preempt",
            EventKind::Resume => "Resume",
            EventKind::Terminate => "Terminate",
            EventKind::DeadlineMiss => "DeadlineMiss",
            EventKind::RunnableStart => "RunnableStart",
            EventKind::RunnableEnd => "RunnableEnd",
        }
    }

    /// Position of the event within one tick of a time-aware trace.
    pub fn rank(self) -> u8 {
        match self {
            EventKind::RunnableEnd => 0,
            EventKind::Terminate => 1,
            EventKind::DeadlineMiss => 2,
            EventKind::Activate => 3,
            EventKind::Preempt => 4,
            EventKind::Start => 5,
            EventKind::Resume => 6,
            EventKind::RunnableStart => 7,
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EventKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EventKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown event kind {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub time: Tick,
    pub kind: EventKind,
    pub task: String,
    pub runnable: Option<String>,
    pub instance: u64,
}

/// Contiguous execution of one runnable of one task instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: Tick,
    pub end: Tick,
    pub runnable: String,
    pub instance: u64,
}

impl Segment {
    pub fn len(&self) -> u64 {
        self.end.0 - self.start.0
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskGantt {
    pub task: String,
    pub segments: Vec<Segment>,
}

/// Everything one simulation run observed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub semantics: Semantics,
    pub horizon: Tick,
    /// Task ids in spawn order.
    pub tasks: Vec<String>,
    pub runnables: Vec<String>,
    pub stores: Vec<String>,
    pub events: Vec<TraceEvent>,
    pub accesses: Vec<AccessEvent>,
    pub outputs: Vec<OutputEvent>,
    /// Execution segments per task, in `tasks` order.
    pub gantt: Vec<TaskGantt>,
}

impl Trace {
    /// A trace holding only scheduler events, e.g. one read back from an
    /// event log. Tasks are listed in order of first appearance.
    pub fn from_events(events: Vec<TraceEvent>) -> Trace {
        let mut tasks: Vec<String> = Vec::new();
        let mut runnables: Vec<String> = Vec::new();
        for e in &events {
            if !tasks.contains(&e.task) {
                tasks.push(e.task.clone());
            }
            if let Some(r) = &e.runnable {
                if !runnables.contains(r) {
                    runnables.push(r.clone());
                }
            }
        }
        Trace {
            semantics: Semantics::TimeAware,
            horizon: events.iter().map(|e| e.time).max().unwrap_or(Tick::ZERO),
            tasks,
            runnables,
            stores: Vec::new(),
            events,
            accesses: Vec::new(),
            outputs: Vec::new(),
            gantt: Vec::new(),
        }
    }

    pub fn deadline_misses(&self) -> impl Iterator<Item = &TraceEvent> {
        self.events
            .iter()
            .filter(|e| e.kind == EventKind::DeadlineMiss)
    }

    pub fn events_of<'a>(
        &'a self,
        task: &'a str,
        kind: EventKind,
    ) -> impl Iterator<Item = &'a TraceEvent> + 'a {
        self.events
            .iter()
            .filter(move |e| e.task == task && e.kind == kind)
    }

    pub fn completions(&self, task: &str) -> usize {
        self.events_of(task, EventKind::Terminate).count()
    }

    pub fn segments(&self, task: &str) -> &[Segment] {
        self.gantt
            .iter()
            .find(|g| g.task == task)
            .map(|g| g.segments.as_slice())
            .unwrap_or(&[])
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("simulation horizon must be positive")]
    ZeroHorizon,
    #[error("model is not simulable: {0}")]
    InvalidModel(ValidationReport),
}

/// Runs `model` under its configured semantics.
pub fn run(model: &SystemModel) -> Result<Trace, SimError> {
    match model.config.semantics {
        Semantics::TimeAware => simulate(model),
        Semantics::ZeroTime => simulate_zero_time(model),
    }
}

// ---------------------------------------------------------------------------
// State shared by both schedulers.

struct PreparedTask<'m> {
    id: &'m str,
    offset: u64,
    period: u64,
    jitter: u64,
    priority: i64,
    spawn_index: usize,
    runnables: Vec<&'m RunnableSpec>,
    /// Per runnable: positions of its predecessors within `runnables`.
    runnable_preds: Vec<Vec<usize>>,
    /// Task indices of predecessor tasks.
    preds: Vec<usize>,
}

impl PreparedTask<'_> {
    fn release(&self, k: u64) -> u64 {
        k * self.period + self.offset + self.jitter
    }

    fn deadline(&self, k: u64) -> u64 {
        (k + 1) * self.period + self.offset
    }
}

struct Instance {
    k: u64,
    deadline: u64,
    state: TaskState,
    remaining: Vec<u64>,
    done: Vec<bool>,
    current: Option<usize>,
    started: bool,
    missed: bool,
}

impl Instance {
    fn new(task: &PreparedTask<'_>, k: u64) -> Instance {
        Instance {
            k,
            deadline: task.deadline(k),
            state: TaskState::Suspended.apply(EventKind::Activate).unwrap(),
            remaining: task.runnables.iter().map(|r| r.wcet.0).collect(),
            done: vec![false; task.runnables.len()],
            current: None,
            started: false,
            missed: false,
        }
    }

    fn transition(&mut self, kind: EventKind) {
        self.state = self
            .state
            .apply(kind)
            .unwrap_or_else(|| panic!("illegal transition {:?} on {kind}", self.state));
    }

    /// Runnable to execute next: the one in progress, else the first
    /// unfinished runnable whose predecessors are done.
    fn next_runnable(&self, task: &PreparedTask<'_>) -> Option<usize> {
        self.current.or_else(|| {
            (0..self.done.len())
                .find(|&i| !self.done[i] && task.runnable_preds[i].iter().all(|&p| self.done[p]))
        })
    }

    fn finished(&self) -> bool {
        self.done.iter().all(|&d| d)
    }
}

struct Prepared<'m> {
    tasks: Vec<PreparedTask<'m>>,
    horizon: u64,
}

fn prepare(model: &SystemModel) -> Result<(SystemModel, Trace), SimError> {
    if model.config.horizon.0 == 0 {
        return Err(SimError::ZeroHorizon);
    }
    let report = validate(model);
    if !report.is_empty() {
        return Err(SimError::InvalidModel(report));
    }
    let model = assign_rm_priorities(model);
    let trace = Trace {
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
    };
    Ok((model, trace))
}

impl<'m> Prepared<'m> {
    fn new(model: &'m SystemModel) -> Prepared<'m> {
        let tasks = model
            .tasks
            .iter()
            .map(|t| {
                let runnables: Vec<&RunnableSpec> = t
                    .runnables
                    .iter()
                    .map(|r| model.runnable(r).expect("validated"))
                    .collect();
                let runnable_preds = runnables
                    .iter()
                    .map(|r| {
                        r.predecessors
                            .iter()
                            .map(|p| t.runnables.iter().position(|x| x == p).expect("validated"))
                            .collect()
                    })
                    .collect();
                let preds = t
                    .predecessors
                    .iter()
                    .map(|p| {
                        model
                            .tasks
                            .iter()
                            .position(|x| x.id == *p)
                            .expect("validated")
                    })
                    .collect();
                PreparedTask {
                    id: &t.id,
                    offset: t.offset.0,
                    period: t.period.0,
                    jitter: t.jitter.0,
                    priority: t.effective_priority(),
                    spawn_index: t.spawn_index,
                    runnables,
                    runnable_preds,
                    preds,
                }
            })
            .collect();
        Prepared {
            tasks,
            horizon: model.config.horizon.0,
        }
    }

    /// Highest-priority task whose queue head may run now.
    fn pick(&self, queues: &[VecDeque<Instance>]) -> Option<usize> {
        (0..self.tasks.len())
            .filter(|&i| match queues[i].front() {
                None => false,
                Some(head) => {
                    head.started || self.tasks[i].preds.iter().all(|&p| queues[p].is_empty())
                }
            })
            .max_by_key(|&i| (self.tasks[i].priority, Reverse(self.tasks[i].spawn_index)))
    }
}

fn event(time: u64, kind: EventKind, task: &str, runnable: Option<&str>, k: u64) -> TraceEvent {
    TraceEvent {
        time: Tick(time),
        kind,
        task: task.to_owned(),
        runnable: runnable.map(str::to_owned),
        instance: k,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_state_machine() {
        use EventKind::*;
        use TaskState::*;
        assert_eq!(Suspended.apply(Activate), Some(Ready));
        assert_eq!(Ready.apply(Start), Some(Running));
        assert_eq!(Running.apply(Preempt), Some(Ready));
        assert_eq!(Ready.apply(Resume), Some(Running));
        assert_eq!(Running.apply(Terminate), Some(Suspended));
        assert_eq!(Suspended.apply(Start), None);
        assert_eq!(Ready.apply(Terminate), None);
        assert_eq!(Running.apply(Activate), None);
    }

    #[test]
    fn event_kind_names_round_trip() {
        for k in EventKind::ALL {
            assert_eq!(k.name().parse::<EventKind>().unwrap(), k);
        }
        assert!("Stare".parse::<EventKind>().is_err());
    }
}
