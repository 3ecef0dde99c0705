//! Timed task-set scheduling simulator with a model-level mutation-testing
//! framework.
//!
//! A [`SystemModel`] describes periodic tasks built from runnables that
//! exchange data through shared stores. The [`engine`] simulates it either
//! with execution-time-aware preemptive fixed-priority scheduling or with a
//! zero-execution-time baseline. The [`mutation`] module derives first-order
//! mutants of a model, and [`analysis`] runs mutants against the baseline
//! and scores the operators by how many of their mutants the oracles kill.

pub mod analysis;
pub mod behavior;
pub mod cli;
pub mod engine;
pub mod model;
pub mod mutation;

pub use analysis::{
    access_sequence, compare, mutation_score, run_campaign, schedulable, CampaignOptions,
    CampaignReport, KillReason, OraclePolicy, Score, Verdict,
};
pub use engine::{derive_gantt, simulate, simulate_zero_time, Trace, TraceEvent};
pub use model::{
    assign_rm_priorities, hyperperiod, parse_model, serialize_model, validate, Semantics,
    SystemModel, Tick,
};
pub use mutation::{apply_mutant, enumerate_mutants, DeltaConfig, MutationDescriptor, Operator};
