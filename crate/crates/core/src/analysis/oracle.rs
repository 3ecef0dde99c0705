use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::engine::Trace;
use crate::model::Tick;

/// Why a mutant was killed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum KillReason {
    #[serde(alias = "deadline")]
    DeadlineMiss,
    #[serde(alias = "access")]
    AccessSequenceDivergence,
    #[serde(alias = "output")]
    OutputDivergence,
}

impl KillReason {
    pub const ALL: [KillReason; 3] = [
        KillReason::DeadlineMiss,
        KillReason::AccessSequenceDivergence,
        KillReason::OutputDivergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KillReason::DeadlineMiss => "DeadlineMiss",
            KillReason::AccessSequenceDivergence => "AccessSequenceDivergence",
            KillReason::OutputDivergence => "OutputDivergence",
        }
    }

    /// Short name used on the command line.
    pub fn key(self) -> &'static str {
        match self {
            KillReason::DeadlineMiss => "deadline",
            KillReason::AccessSequenceDivergence => "access",
            KillReason::OutputDivergence => "output",
        }
    }
}

impl fmt::Display for KillReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KillReason {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        KillReason::ALL
            .into_iter()
            .find(|r| r.key().eq_ignore_ascii_case(s) || r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown oracle {s:?}"))
    }
}

/// The set of oracles a campaign consults.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OraclePolicy(BTreeSet<KillReason>);

impl Default for OraclePolicy {
    fn default() -> Self {
        OraclePolicy::all()
    }
}

impl OraclePolicy {
    pub fn all() -> OraclePolicy {
        OraclePolicy(KillReason::ALL.into_iter().collect())
    }

    pub fn none() -> OraclePolicy {
        OraclePolicy(BTreeSet::new())
    }

    pub fn contains(&self, r: KillReason) -> bool {
        self.0.contains(&r)
    }

    pub fn insert(&mut self, r: KillReason) {
        self.0.insert(r);
    }

    pub fn iter(&self) -> impl Iterator<Item = KillReason> + '_ {
        self.0.iter().copied()
    }

    /// Comma-separated oracle names, or `all`.
    pub fn parse(spec: &str) -> Result<OraclePolicy, String> {
        let mut p = OraclePolicy::none();
        for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if token.eq_ignore_ascii_case("all") {
                p = OraclePolicy::all();
            } else {
                p.insert(token.parse()?);
            }
        }
        Ok(p)
    }
}

impl FromIterator<KillReason> for OraclePolicy {
    fn from_iter<I: IntoIterator<Item = KillReason>>(iter: I) -> Self {
        OraclePolicy(iter.into_iter().collect())
    }
}

/// Outcome of comparing a mutant trace with its baseline.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub reasons: BTreeSet<KillReason>,
    /// Earliest time at which a consulted oracle saw a failure.
    pub first_failure: Option<Tick>,
}

impl Verdict {
    pub fn killed(&self) -> bool {
        !self.reasons.is_empty()
    }

    fn record(&mut self, reason: KillReason, at: Option<Tick>) {
        self.reasons.insert(reason);
        self.first_failure = match (self.first_failure, at) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
}

/// `Survived` or `Killed{DeadlineMiss,OutputDivergence}`.
impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.killed() {
            return f.write_str("Survived");
        }
        let names: Vec<&str> = self.reasons.iter().map(|r| r.name()).collect();
        write!(f, "Killed{{{}}}", names.join(","))
    }
}

/// Read/write pattern of one store, e.g. `"WRWR"`.
pub fn access_sequence(trace: &Trace, store: &str) -> Result<String, AnalysisError> {
    if !trace.stores.iter().any(|s| s == store) {
        return Err(AnalysisError::UnknownStore(store.to_owned()));
    }
    Ok(trace
        .accesses
        .iter()
        .filter(|a| a.store == store)
        .map(|a| a.kind.symbol())
        .collect())
}

/// True when no deadline was missed.
pub fn schedulable(trace: &Trace) -> bool {
    trace.deadline_misses().next().is_none()
}

fn output_sequences(trace: &Trace) -> BTreeMap<&str, Vec<(Tick, i64)>> {
    let mut out: BTreeMap<&str, Vec<(Tick, i64)>> = BTreeMap::new();
    for o in &trace.outputs {
        out.entry(o.runnable.as_str())
            .or_default()
            .push((o.time, o.value));
    }
    out
}

/// Index of the first position where the sequences differ, if any.
fn divergence<T: PartialEq>(a: &[T], b: &[T]) -> Option<usize> {
    let common = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    (common < a.len().max(b.len())).then_some(common)
}

/// Time of element `i` in whichever sequence has it, preferring the mutant.
fn time_at(mutant: &[Tick], baseline: &[Tick], i: usize) -> Option<Tick> {
    mutant.get(i).or_else(|| baseline.get(i)).copied()
}

/// Judges `mutant` against `baseline` with the oracles in `policy`.
///
/// The deadline oracle looks at the mutant alone. The access oracle compares
/// per-store R/W patterns. The output oracle compares per-runnable value
/// sequences in completion order, ignoring when the values were produced.
pub fn compare(
    baseline: &Trace,
    mutant: &Trace,
    policy: &OraclePolicy,
) -> Result<Verdict, AnalysisError> {
    let same = |a: &[String], b: &[String]| {
        a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>()
    };
    if !same(&baseline.stores, &mutant.stores) {
        return Err(AnalysisError::NamespaceMismatch("stores".into()));
    }
    if !same(&baseline.runnables, &mutant.runnables) {
        return Err(AnalysisError::NamespaceMismatch("runnables".into()));
    }

    let mut v = Verdict::default();
    if policy.contains(KillReason::DeadlineMiss) {
        if let Some(miss) = mutant.deadline_misses().next() {
            v.record(KillReason::DeadlineMiss, Some(miss.time));
        }
    }
    if policy.contains(KillReason::AccessSequenceDivergence) {
        for store in &baseline.stores {
            let pattern = |t: &Trace| -> (Vec<char>, Vec<Tick>) {
                t.accesses
                    .iter()
                    .filter(|a| &a.store == store)
                    .map(|a| (a.kind.symbol(), a.time))
                    .unzip()
            };
            let (b, bt) = pattern(baseline);
            let (m, mt) = pattern(mutant);
            if let Some(i) = divergence(&b, &m) {
                v.record(KillReason::AccessSequenceDivergence, time_at(&mt, &bt, i));
            }
        }
    }
    if policy.contains(KillReason::OutputDivergence) {
        let b = output_sequences(baseline);
        let m = output_sequences(mutant);
        let keys: BTreeSet<&str> = b.keys().chain(m.keys()).copied().collect();
        for k in keys {
            let (bv, bt): (Vec<i64>, Vec<Tick>) = b
                .get(k)
                .into_iter()
                .flatten()
                .map(|(t, x)| (*x, *t))
                .unzip();
            let (mv, mt): (Vec<i64>, Vec<Tick>) = m
                .get(k)
                .into_iter()
                .flatten()
                .map(|(t, x)| (*x, *t))
                .unzip();
            if let Some(i) = divergence(&bv, &mv) {
                v.record(KillReason::OutputDivergence, time_at(&mt, &bt, i));
            }
        }
    }
    Ok(v)
}
