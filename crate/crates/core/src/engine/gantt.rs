use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use super::{EventKind, Segment, TaskGantt, Trace};
use crate::model::Tick;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("inconsistent trace at t={time}: {kind} on {task} {detail}")]
pub struct GanttError {
    pub time: Tick,
    pub kind: EventKind,
    pub task: String,
    pub detail: String,
}

#[derive(Default)]
struct Cursor {
    executing: Option<u64>,
    in_progress: Option<String>,
    open_since: Option<Tick>,
}

/// Rebuilds per-task execution segments from scheduler events alone.
///
/// Segments open at `RunnableStart` (or at `Resume` of a runnable that was
/// preempted mid-way) and close at `RunnableEnd` or `Preempt`. A segment
/// still open at the end of the trace is cut at the horizon. Zero-length
/// segments are dropped.
pub fn derive_gantt(trace: &Trace) -> Result<Vec<TaskGantt>, GanttError> {
    let mut order: Vec<String> = trace.tasks.clone();
    for e in &trace.events {
        if !order.contains(&e.task) {
            order.push(e.task.clone());
        }
    }
    let mut cursors: BTreeMap<&str, Cursor> = BTreeMap::new();
    let mut segments: BTreeMap<String, Vec<Segment>> = BTreeMap::new();

    for e in &trace.events {
        let fail = |detail: &str| GanttError {
            time: e.time,
            kind: e.kind,
            task: e.task.clone(),
            detail: detail.to_owned(),
        };
        let cur = cursors.entry(e.task.as_str()).or_default();
        let mut close = |cur: &mut Cursor, runnable: &str| {
            if let Some(start) = cur.open_since.take() {
                if start < e.time {
                    segments.entry(e.task.clone()).or_default().push(Segment {
                        start,
                        end: e.time,
                        runnable: runnable.to_owned(),
                        instance: e.instance,
                    });
                }
            }
        };
        match e.kind {
            EventKind::Activate | EventKind::DeadlineMiss => {}
            EventKind::Start => {
                if cur.executing.is_some() || cur.in_progress.is_some() {
                    return Err(fail("while already executing"));
                }
                cur.executing = Some(e.instance);
            }
            EventKind::Resume => {
                if cur.executing.is_some() {
                    return Err(fail("while already executing"));
                }
                cur.executing = Some(e.instance);
                if cur.in_progress.is_some() {
                    cur.open_since = Some(e.time);
                }
            }
            EventKind::RunnableStart => {
                if cur.executing != Some(e.instance) || cur.in_progress.is_some() {
                    return Err(fail("without an idle executing instance"));
                }
                cur.in_progress = e.runnable.clone();
                cur.open_since = Some(e.time);
            }
            EventKind::RunnableEnd => {
                let runnable = e.runnable.as_deref().unwrap_or_default();
                if cur.executing != Some(e.instance) || cur.in_progress.as_deref() != Some(runnable)
                {
                    return Err(fail("for a runnable that is not running"));
                }
                close(cur, runnable);
                cur.in_progress = None;
            }
            EventKind::Preempt => {
                if cur.executing != Some(e.instance) {
                    return Err(fail("while not executing"));
                }
                if let Some(r) = cur.in_progress.clone() {
                    close(cur, &r);
                }
                cur.executing = None;
            }
            EventKind::Terminate => {
                if cur.executing != Some(e.instance) || cur.in_progress.is_some() {
                    return Err(fail("with unfinished runnable or while not executing"));
                }
                cur.executing = None;
            }
        }
    }

    for (task, cur) in cursors {
        if let (Some(start), Some(runnable), Some(instance)) =
            (cur.open_since, cur.in_progress, cur.executing)
        {
            if start < trace.horizon {
                segments.entry(task.to_owned()).or_default().push(Segment {
                    start,
                    end: trace.horizon,
                    runnable,
                    instance,
                });
            }
        }
    }

    Ok(order
        .into_iter()
        .map(|task| TaskGantt {
            segments: segments.remove(&task).unwrap_or_default(),
            task,
        })
        .collect())
}

/// Tasks in order of execution, merging back-to-back segments of one task.
pub fn execution_order(gantt: &[TaskGantt]) -> Vec<String> {
    let mut all: Vec<(&Segment, &str)> = gantt
        .iter()
        .flat_map(|g| g.segments.iter().map(move |s| (s, g.task.as_str())))
        .collect();
    all.sort_by_key(|(s, _)| s.start);
    let mut order: Vec<String> = Vec::new();
    let mut last_end = None;
    for (s, task) in all {
        let contiguous = last_end == Some(s.start);
        if !(contiguous && order.last().map(String::as_str) == Some(task)) {
            order.push(task.to_owned());
        }
        last_end = Some(s.end);
    }
    order
}

/// One row per task, one column per tick, `#` where the task executes.
pub fn render_ascii(gantt: &[TaskGantt], horizon: Tick) -> String {
    let width = gantt.iter().map(|g| g.task.len()).max().unwrap_or(0).max(4);
    let mut out = String::new();
    let ruler: String = (0..horizon.0)
        .map(|t| char::from_digit((t % 10) as u32, 10).unwrap())
        .collect();
    let _ = writeln!(out, "{:<width$} |{}", "TASK", ruler);
    for g in gantt {
        let mut row = vec![' '; horizon.0 as usize];
        for s in &g.segments {
            for t in s.start.0..s.end.0.min(horizon.0) {
                row[t as usize] = '#';
            }
        }
        let row: String = row.into_iter().collect();
        let _ = writeln!(out, "{:<width$} |{}", g.task, row.trim_end());
    }
    let order = execution_order(gantt);
    if !order.is_empty() {
        let _ = writeln!(out, "order: {}", order.join(" "));
    }
    out
}

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#9c755f",
];
const TICK_PX: u64 = 20;
const ROW_PX: u64 = 28;
const LABEL_PX: u64 = 80;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Self-contained SVG Gantt chart.
pub fn render_svg(gantt: &[TaskGantt], horizon: Tick) -> String {
    let width = LABEL_PX + horizon.0 * TICK_PX + 20;
    let height = (gantt.len() as u64 + 1) * ROW_PX + 20;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="monospace" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
    let axis_y = gantt.len() as u64 * ROW_PX + 10;
    for t in 0..=horizon.0 {
        let x = LABEL_PX + t * TICK_PX;
        let _ = writeln!(
            out,
            r##"<line x1="{x}" y1="10" x2="{x}" y2="{axis_y}" stroke="#dddddd"/>"##
        );
        if t % 5 == 0 || horizon.0 <= 20 {
            let _ = writeln!(
                out,
                r#"<text x="{x}" y="{}" text-anchor="middle">{t}</text>"#,
                axis_y + 16
            );
        }
    }
    for (row, g) in gantt.iter().enumerate() {
        let y = 10 + row as u64 * ROW_PX;
        let color = PALETTE[row % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"<text x="4" y="{}">{}</text>"#,
            y + ROW_PX / 2 + 4,
            escape(&g.task)
        );
        for s in &g.segments {
            let x = LABEL_PX + s.start.0 * TICK_PX;
            let w = s.len() * TICK_PX;
            let _ = writeln!(
                out,
                r#"<rect x="{x}" y="{}" width="{w}" height="{}" fill="{color}" stroke="black"><title>{} #{} {} [{}, {})</title></rect>"#,
                y + 4,
                ROW_PX - 8,
                escape(&g.task),
                s.instance,
                escape(&s.runnable),
                s.start,
                s.end
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
