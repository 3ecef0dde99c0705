//! Campaign report tables.
//!
//! CSV layout: `class,mutants,kills_deadline,kills_access,kills_output,kills_total`
//! with one row per operator class and a closing `total` row. A class that
//! cannot change traces under the campaign's semantics has `N/A` in every
//! numeric column.

use std::fmt::Write;

use super::{AnalysisError, Score};
use crate::mutation::OperatorClass;

pub const CSV_HEADER: &str = "class,mutants,kills_deadline,kills_access,kills_output,kills_total";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub mutants: u64,
    pub kills_deadline: u64,
    pub kills_access: u64,
    pub kills_output: u64,
    pub kills_total: u64,
}

impl Counts {
    pub fn add(&mut self, other: &Counts) {
        self.mutants += other.mutants;
        self.kills_deadline += other.kills_deadline;
        self.kills_access += other.kills_access;
        self.kills_output += other.kills_output;
        self.kills_total += other.kills_total;
    }

    pub fn score(&self) -> Option<Score> {
        Score::new(self.kills_total, self.mutants).ok()
    }
}

/// Per-class campaign results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRow {
    pub class: OperatorClass,
    /// `None` when the class is not applicable (N/A).
    pub counts: Option<Counts>,
    /// Candidate sites dropped because the mutant would be invalid.
    pub inapplicable: u64,
}

/// One line of a rendered table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    /// Class key, or `total`.
    pub label: String,
    pub counts: Option<Counts>,
}

pub fn write_report_csv(rows: &[TableRow]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        match &r.counts {
            Some(c) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.label,
                    c.mutants,
                    c.kills_deadline,
                    c.kills_access,
                    c.kills_output,
                    c.kills_total
                );
            }
            None => {
                let _ = writeln!(out, "{},N/A,N/A,N/A,N/A,N/A", r.label);
            }
        }
    }
    out
}

/// Reads a report CSV back into table rows.
pub fn parse_report_csv(text: &str) -> Result<Vec<TableRow>, AnalysisError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == CSV_HEADER => {}
        Some((i, _)) => {
            return Err(AnalysisError::ReportFormat {
                line: i + 1,
                message: format!("expected header {CSV_HEADER:?}"),
            })
        }
        None => {
            return Err(AnalysisError::ReportFormat {
                line: 1,
                message: "empty report".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let err = |message: String| AnalysisError::ReportFormat {
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 6 {
            return Err(err(format!("expected 6 fields, got {}", fields.len())));
        }
        let label = fields[0];
        if label != "total" {
            label.parse::<OperatorClass>().map_err(err)?;
        }
        let counts = if fields[1..].iter().all(|f| *f == "N/A") {
            None
        } else {
            let mut n = [0u64; 5];
            for (slot, f) in n.iter_mut().zip(&fields[1..]) {
                *slot = f
                    .parse()
                    .map_err(|e| err(format!("bad count {f:?}: {e}")))?;
            }
            let c = Counts {
                mutants: n[0],
                kills_deadline: n[1],
                kills_access: n[2],
                kills_output: n[3],
                kills_total: n[4],
            };
            if c.kills_total > c.mutants {
                return Err(err("more kills than mutants".into()));
            }
            Some(c)
        };
        rows.push(TableRow {
            label: label.to_owned(),
            counts,
        });
    }
    Ok(rows)
}

fn display_label(label: &str) -> String {
    match label.parse::<OperatorClass>() {
        Ok(c) => c.name().to_owned(),
        Err(_) if label == "total" => "Total".to_owned(),
        Err(_) => label.to_owned(),
    }
}

/// Aligned text table with a score column.
pub fn render_table(rows: &[TableRow]) -> String {
    let header = [
        "Class", "Mutants", "Deadline", "Access", "Output", "Killed", "Score",
    ];
    let mut cells: Vec<[String; 7]> = vec![header.map(str::to_owned)];
    for r in rows {
        let label = display_label(&r.label);
        cells.push(match &r.counts {
            Some(c) => [
                label,
                c.mutants.to_string(),
                c.kills_deadline.to_string(),
                c.kills_access.to_string(),
                c.kills_output.to_string(),
                c.kills_total.to_string(),
                super::render_score(c.score()),
            ],
            None => [
                label,
                "N/A".into(),
                "N/A".into(),
                "N/A".into(),
                "N/A".into(),
                "N/A".into(),
                "N/A".into(),
            ],
        });
    }
    let mut widths = [0usize; 7];
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    for row in &cells {
        let mut line = format!("{:<w$}", row[0], w = widths[0]);
        for (c, w) in row[1..].iter().zip(&widths[1..]) {
            let pad = w - c.chars().count();
            let _ = write!(line, "  {}{}", " ".repeat(pad), c);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
