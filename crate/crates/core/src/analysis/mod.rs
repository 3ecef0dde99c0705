//! Kill oracles, mutation campaigns and their reports.

mod campaign;
mod oracle;
mod report;
mod score;

use thiserror::Error;

use crate::engine::SimError;
use crate::mutation::MutationError;

pub use campaign::{run_campaign, Baseline, CampaignOptions, CampaignReport, MutantOutcome};
pub use oracle::{access_sequence, compare, schedulable, KillReason, OraclePolicy, Verdict};
pub use report::{
    parse_report_csv, render_table, write_report_csv, ClassRow, Counts, TableRow, CSV_HEADER,
};
pub use score::{mutation_score, render_score, Score};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Mutation(#[from] MutationError),
    #[error(transparent)]
    Simulation(#[from] SimError),
    #[error("unknown store {0:?}")]
    UnknownStore(String),
    #[error("baseline and mutant traces differ in their {0}")]
    NamespaceMismatch(String),
    #[error("mutation score is undefined for a campaign without mutants")]
    UndefinedScore,
    #[error("cannot start worker threads: {0}")]
    ThreadPool(String),
    #[error("report line {line}: {message}")]
    ReportFormat { line: usize, message: String },
}
