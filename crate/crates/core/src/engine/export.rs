//! Line-oriented trace exports.
//!
//! Event log: `time<TAB>kind<TAB>task<TAB>runnable<TAB>instance`, one event
//! per line, `-` for an absent runnable. Access log:
//! `time<TAB>R|W<TAB>task<TAB>runnable<TAB>store<TAB>value`. Output log:
//! `time<TAB>task<TAB>runnable<TAB>value`. Gantt CSV:
//! `task,start,end,runnable` with a header row.

use std::fmt::Write;

use thiserror::Error;

use super::{TaskGantt, Trace, TraceEvent};
use crate::model::Tick;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct TraceFormatError {
    pub line: usize,
    pub message: String,
}

pub fn write_events_tsv(trace: &Trace) -> String {
    let mut out = String::new();
    for e in &trace.events {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            e.time,
            e.kind,
            e.task,
            e.runnable.as_deref().unwrap_or("-"),
            e.instance
        );
    }
    out
}

/// Parses an event log written by [`write_events_tsv`]. Blank lines are
/// skipped.
pub fn parse_events_tsv(text: &str) -> Result<Vec<TraceEvent>, TraceFormatError> {
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| TraceFormatError {
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [time, kind, task, runnable, instance] = fields[..] else {
            return Err(err(format!(
                "expected 5 tab-separated fields, got {}",
                fields.len()
            )));
        };
        let time = time
            .parse::<u64>()
            .map_err(|e| err(format!("bad time {time:?}: {e}")))?;
        let kind = kind.parse().map_err(err)?;
        let instance = instance
            .parse::<u64>()
            .map_err(|e| err(format!("bad instance {instance:?}: {e}")))?;
        if task.is_empty() {
            return Err(err("empty task id".into()));
        }
        events.push(TraceEvent {
            time: Tick(time),
            kind,
            task: task.to_owned(),
            runnable: (runnable != "-").then(|| runnable.to_owned()),
            instance,
        });
    }
    Ok(events)
}

pub fn write_accesses_tsv(trace: &Trace) -> String {
    let mut out = String::new();
    for a in &trace.accesses {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            a.time, a.kind, a.task, a.runnable, a.store, a.value
        );
    }
    out
}

pub fn write_outputs_tsv(trace: &Trace) -> String {
    let mut out = String::new();
    for o in &trace.outputs {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", o.time, o.task, o.runnable, o.value);
    }
    out
}

pub fn write_gantt_csv(gantt: &[TaskGantt]) -> String {
    let mut out = String::from("task,start,end,runnable\n");
    for g in gantt {
        for s in &g.segments {
            let _ = writeln!(out, "{},{},{},{}", g.task, s.start, s.end, s.runnable);
        }
    }
    out
}
