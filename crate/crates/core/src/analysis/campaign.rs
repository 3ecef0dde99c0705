use std::fmt::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{write_report_csv, ClassRow, Counts, TableRow};
use super::{
    compare, render_score, render_table, AnalysisError, KillReason, OraclePolicy, Score, Verdict,
};
use crate::engine::{run, Trace};
use crate::model::{Semantics, SystemModel};
use crate::mutation::{
    apply_mutant, enumerate_sites, DeltaConfig, MutationDescriptor, OperatorClass, OperatorSet,
};

/// What mutants are compared against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Baseline {
    /// The original model under the mutants' semantics.
    #[default]
    Same,
    /// The original model under zero-time semantics.
    ZeroTime,
}

impl FromStr for Baseline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "same" => Ok(Baseline::Same),
            "zero-time" => Ok(Baseline::ZeroTime),
            _ => Err(format!(
                "unknown baseline {s:?} (expected same or zero-time)"
            )),
        }
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Baseline::Same => "same",
            Baseline::ZeroTime => "zero-time",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignOptions {
    pub deltas: DeltaConfig,
    pub enabled: OperatorSet,
    pub policy: OraclePolicy,
    pub baseline: Baseline,
    /// Worker threads; `None` uses one per core. Results do not depend on it.
    pub threads: Option<usize>,
}

impl Default for CampaignOptions {
    fn default() -> Self {
        CampaignOptions {
            deltas: DeltaConfig::default(),
            enabled: OperatorSet::all(),
            policy: OraclePolicy::all(),
            baseline: Baseline::Same,
            threads: None,
        }
    }
}

/// Result for one mutant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutantOutcome {
    pub descriptor: MutationDescriptor,
    /// `None` when the mutant's class is not applicable and it was not run.
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignReport {
    pub semantics: Semantics,
    pub baseline: Baseline,
    /// Enabled classes in catalog order.
    pub rows: Vec<ClassRow>,
    /// Mutants in enumeration order.
    pub outcomes: Vec<MutantOutcome>,
}

impl CampaignReport {
    /// Sum over applicable classes.
    pub fn total(&self) -> Counts {
        let mut total = Counts::default();
        for c in self.rows.iter().filter_map(|r| r.counts.as_ref()) {
            total.add(c);
        }
        total
    }

    pub fn score(&self) -> Option<Score> {
        self.total().score()
    }

    pub fn table_rows(&self) -> Vec<TableRow> {
        let mut rows: Vec<TableRow> = self
            .rows
            .iter()
            .map(|r| TableRow {
                label: r.class.key().to_owned(),
                counts: r.counts,
            })
            .collect();
        rows.push(TableRow {
            label: "total".into(),
            counts: Some(self.total()),
        });
        rows
    }

    pub fn to_csv(&self) -> String {
        write_report_csv(&self.table_rows())
    }

    /// The class table followed by inapplicable-site counts and the score.
    pub fn render(&self) -> String {
        let mut out = render_table(&self.table_rows());
        let skipped: Vec<String> = self
            .rows
            .iter()
            .filter(|r| r.inapplicable > 0)
            .map(|r| format!("{} {}", r.class.key(), r.inapplicable))
            .collect();
        let total_skipped: u64 = self.rows.iter().map(|r| r.inapplicable).sum();
        if skipped.is_empty() {
            out.push_str("inapplicable sites: 0\n");
        } else {
            let _ = writeln!(
                out,
                "inapplicable sites: {total_skipped} ({})",
                skipped.join(", ")
            );
        }
        let total = self.total();
        let _ = writeln!(
            out,
            "mutation score: {} ({}/{})",
            render_score(self.score()),
            total.kills_total,
            total.mutants
        );
        out
    }

    /// One line per mutant: id, operator, target, verdict, first failure time.
    pub fn details_tsv(&self) -> String {
        let mut out = String::from("mutant\toperator\ttarget\tverdict\tfirst_failure\n");
        for o in &self.outcomes {
            let d = &o.descriptor;
            let (verdict, first) = match &o.verdict {
                Some(v) => (
                    v.to_string(),
                    v.first_failure.map_or("-".to_owned(), |t| t.to_string()),
                ),
                None => ("N/A".to_owned(), "-".to_owned()),
            };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                d.id, d.operator, d.target, verdict, first
            );
        }
        out
    }
}

fn not_applicable(semantics: Semantics, class: OperatorClass) -> bool {
    // Zero-time semantics ignores execution times altogether.
    semantics == Semantics::ZeroTime && class == OperatorClass::ExecutionTime
}

fn baseline_trace(model: &SystemModel, baseline: Baseline) -> Result<Trace, AnalysisError> {
    let trace = match baseline {
        Baseline::Same => run(model)?,
        Baseline::ZeroTime => run(&model.clone().with_semantics(Semantics::ZeroTime))?,
    };
    Ok(trace)
}

/// Enumerates the enabled mutants of `model`, simulates each under the
/// model's semantics and judges it against the baseline.
pub fn run_campaign(
    model: &SystemModel,
    opts: &CampaignOptions,
) -> Result<CampaignReport, AnalysisError> {
    let semantics = model.config.semantics;
    let enumeration = enumerate_sites(model, &opts.deltas, &opts.enabled)?;
    let base = baseline_trace(model, opts.baseline)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.unwrap_or(0))
        .build()
        .map_err(|e| AnalysisError::ThreadPool(e.to_string()))?;
    let judge = |d: &MutationDescriptor| -> Result<MutantOutcome, AnalysisError> {
        let verdict = if not_applicable(semantics, d.operator.class()) {
            None
        } else {
            let mutant = apply_mutant(model, d)?;
            Some(compare(&base, &run(&mutant)?, &opts.policy)?)
        };
        Ok(MutantOutcome {
            descriptor: d.clone(),
            verdict,
        })
    };
    let outcomes = pool.install(|| {
        enumeration
            .mutants
            .par_iter()
            .map(judge)
            .collect::<Result<Vec<_>, _>>()
    })?;

    let rows = opts
        .enabled
        .classes()
        .into_iter()
        .map(|class| {
            let inapplicable = enumeration.inapplicable.get(&class).copied().unwrap_or(0) as u64;
            if not_applicable(semantics, class) {
                return ClassRow {
                    class,
                    counts: None,
                    inapplicable,
                };
            }
            let mut c = Counts::default();
            for o in outcomes
                .iter()
                .filter(|o| o.descriptor.operator.class() == class)
            {
                c.mutants += 1;
                let Some(v) = &o.verdict else { continue };
                let has = |r| u64::from(v.reasons.contains(&r));
                c.kills_deadline += has(KillReason::DeadlineMiss);
                c.kills_access += has(KillReason::AccessSequenceDivergence);
                c.kills_output += has(KillReason::OutputDivergence);
                c.kills_total += u64::from(v.killed());
            }
            ClassRow {
                class,
                counts: Some(c),
                inapplicable,
            }
        })
        .collect();

    Ok(CampaignReport {
        semantics,
        baseline: opts.baseline,
        rows,
        outcomes,
    })
}
