//! Worked examples: small task sets and single mutations with known
//! schedules.

mod common;

use common::fixture;
use mutsched::analysis::{access_sequence, KillReason};
use mutsched::engine::{execution_order, run, EventKind};
use mutsched::mutation::Target;
use mutsched::{
    apply_mutant, compare, MutationDescriptor, Operator, OraclePolicy, SystemModel, Tick, Trace,
};

fn task(id: &str) -> Target {
    Target::Task { task: id.into() }
}

fn runnable(task: &str, runnable: &str) -> Target {
    Target::Runnable {
        task: task.into(),
        runnable: runnable.into(),
    }
}

fn mutate(model: &SystemModel, op: Operator, target: Target, delta: Option<u64>) -> SystemModel {
    apply_mutant(model, &MutationDescriptor::new(op, target, delta, None)).unwrap()
}

fn times(trace: &Trace, task: &str, kind: EventKind) -> Vec<u64> {
    trace.events_of(task, kind).map(|e| e.time.0).collect()
}

fn outputs(trace: &Trace, runnable: &str) -> Vec<i64> {
    trace
        .outputs
        .iter()
        .filter(|o| o.runnable == runnable)
        .map(|o| o.value)
        .collect()
}

fn verdict(base: &SystemModel, mutant: &SystemModel) -> mutsched::Verdict {
    compare(
        &run(base).unwrap(),
        &run(mutant).unwrap(),
        &OraclePolicy::all(),
    )
    .unwrap()
}

#[test]
fn running_example_schedule() {
    let trace = run(&fixture("table3")).unwrap();
    let starts: Vec<(u64, &str)> = trace
        .events
        .iter()
        .filter(|e| e.kind == EventKind::RunnableStart && e.time.0 < 10)
        .map(|e| (e.time.0, e.runnable.as_deref().unwrap()))
        .collect();
    assert_eq!(starts, [(0, "R1"), (3, "R2"), (6, "R3")]);
    assert!(trace.events.iter().all(|e| e.kind != EventKind::Preempt));
    assert_eq!(outputs(&trace, "R3"), [10, 10]);
}

#[test]
fn longer_period_preempts_second_instance() {
    let m = mutate(
        &fixture("table3"),
        Operator::IncreasePeriod,
        task("T1"),
        Some(1),
    );
    let trace = run(&m).unwrap();
    assert_eq!(times(&trace, "T2", EventKind::Preempt), [22]);
}

#[test]
fn shorter_period_preempts_first_instance() {
    let m = mutate(
        &fixture("table3"),
        Operator::DecreasePeriod,
        task("T1"),
        Some(4),
    );
    let trace = run(&m).unwrap();
    assert_eq!(times(&trace, "T2", EventKind::Preempt).first(), Some(&6));
}

#[test]
fn much_shorter_period_makes_t2_miss() {
    let base = fixture("table3");
    let m = mutate(&base, Operator::DecreasePeriod, task("T1"), Some(6));
    let trace = run(&m).unwrap();
    assert!(trace.deadline_misses().all(|e| e.task == "T2"));
    assert!(trace.deadline_misses().next().is_some());
    assert!(verdict(&base, &m)
        .reasons
        .contains(&KillReason::DeadlineMiss));
}

#[test]
fn longer_runnable_preempted_at_next_release() {
    let m = mutate(
        &fixture("table3"),
        Operator::IncreaseExecutionTime,
        runnable("T2", "R2"),
        Some(4),
    );
    let trace = run(&m).unwrap();
    assert_eq!(m.wcet(m.task("T2").unwrap()), Tick(10));
    assert_eq!(times(&trace, "T2", EventKind::Preempt).first(), Some(&10));
}

#[test]
fn shorter_runnable_changes_nothing_observable() {
    let base = fixture("table3");
    let m = mutate(
        &base,
        Operator::DecreaseExecutionTime,
        runnable("T1", "R1"),
        Some(1),
    );
    let trace = run(&m).unwrap();
    assert!(times(&trace, "T2", EventKind::Preempt).is_empty());
    assert!(!verdict(&base, &m).killed());
}

#[test]
fn longer_write_inserts_extra_write() {
    let base = fixture("table3");
    let m = mutate(
        &base,
        Operator::IncreaseExecutionTime,
        runnable("T1", "R1"),
        Some(3),
    );
    let original = access_sequence(&run(&base).unwrap(), "A").unwrap();
    let mutated = access_sequence(&run(&m).unwrap(), "A").unwrap();
    assert!(original.starts_with("WRWR"), "{original}");
    assert!(mutated.starts_with("WRWWR"), "{mutated}");
    assert!(verdict(&base, &m)
        .reasons
        .contains(&KillReason::AccessSequenceDivergence));
}

#[test]
fn second_example_order() {
    let trace = run(&fixture("table4")).unwrap();
    let order = execution_order(&trace.gantt);
    assert_eq!(order[..4], ["T1", "T2", "T1", "T3"]);
}

#[test]
fn added_task_precedence_exposes_preemption() {
    let base = fixture("table4");
    let target = Target::TaskPrecedence {
        task: "T2".into(),
        predecessor: "T3".into(),
    };
    let m = mutate(&base, Operator::AddTaskPrecedence, target, None);
    let trace = run(&m).unwrap();
    assert!(times(&run(&base).unwrap(), "T2", EventKind::Preempt).is_empty());
    assert_eq!(times(&trace, "T2", EventKind::Preempt).first(), Some(&5));
    assert_eq!(execution_order(&trace.gantt)[..4], ["T1", "T3", "T2", "T1"]);
}

#[test]
fn added_runnable_precedence_flips_overwrite() {
    let base = fixture("table5");
    let target = Target::RunnablePrecedence {
        task: "T1".into(),
        runnable: "R4".into(),
        predecessor: "R1".into(),
    };
    let m = mutate(&base, Operator::AddRunnablePrecedence, target, None);
    let before = run(&base).unwrap();
    let after = run(&m).unwrap();
    assert!(outputs(&before, "R2").iter().all(|&v| v == 10));
    assert!(outputs(&after, "R2").iter().all(|&v| v == 20));
    assert!(verdict(&base, &m)
        .reasons
        .contains(&KillReason::OutputDivergence));
}

#[test]
fn removed_runnable_precedence_keeps_declaration_order() {
    let base = fixture("table3");
    let target = Target::RunnablePrecedence {
        task: "T2".into(),
        runnable: "R3".into(),
        predecessor: "R2".into(),
    };
    let m = mutate(&base, Operator::RemoveRunnablePrecedence, target, None);
    assert!(!verdict(&base, &m).killed());
}

#[test]
fn raised_priority_runs_first() {
    let m = mutate(
        &fixture("table6"),
        Operator::IncreasePriority,
        task("T3"),
        Some(3),
    );
    assert_eq!(m.task("T3").unwrap().priority, Some(5));
    let order = execution_order(&run(&m).unwrap().gantt);
    assert_eq!(order[..3], ["T3", "T1", "T2"]);
}

#[test]
fn lowered_priority_runs_last() {
    let m = mutate(
        &fixture("table6"),
        Operator::DecreasePriority,
        task("T1"),
        Some(3),
    );
    assert_eq!(m.task("T1").unwrap().priority, Some(1));
    let order = execution_order(&run(&m).unwrap().gantt);
    assert_eq!(order[..3], ["T2", "T3", "T1"]);
}

#[test]
fn jitter_lets_t1_preempt_t2() {
    let base = fixture("table3");
    let m = mutate(&base, Operator::IncreaseJitter, task("T1"), Some(2));
    assert_eq!(
        times(&run(&m).unwrap(), "T2", EventKind::Preempt).first(),
        Some(&2)
    );
    let m = mutate(&m, Operator::DecreaseJitter, task("T1"), Some(1));
    assert_eq!(
        times(&run(&m).unwrap(), "T2", EventKind::Preempt).first(),
        Some(&1)
    );
}

#[test]
fn removed_initialization_flattens_output() {
    let base = fixture("table3");
    let target = Target::Action {
        task: "T1".into(),
        runnable: "R1".into(),
        index: 0,
        store: "A".into(),
    };
    let m = mutate(&base, Operator::RemoveDefinitionSharedMemory, target, None);
    let out = outputs(&run(&m).unwrap(), "R3");
    assert!(out.windows(2).all(|w| w[0] == w[1]), "{out:?}");
    assert!(verdict(&base, &m)
        .reasons
        .contains(&KillReason::OutputDivergence));
}

#[test]
fn removed_read_outputs_zero() {
    let base = fixture("table3");
    let target = Target::Action {
        task: "T2".into(),
        runnable: "R3".into(),
        index: 0,
        store: "A".into(),
    };
    let m = mutate(&base, Operator::RemoveSharedMemoryReference, target, None);
    assert!(outputs(&run(&m).unwrap(), "R3").iter().all(|&v| v == 0));
}

#[test]
fn added_read_keeps_schedule() {
    let base = fixture("table3");
    let target = Target::TaskStore {
        task: "T1".into(),
        store: "A".into(),
    };
    let m = mutate(&base, Operator::ReferenceSharedMemory, target, None);
    let trace = run(&m).unwrap();
    // The read follows R1's own write.
    let r1: Vec<(char, i64)> = trace
        .accesses
        .iter()
        .filter(|a| a.runnable == "R1")
        .take(2)
        .map(|a| (a.kind.symbol(), a.value))
        .collect();
    assert_eq!(r1, [('W', 10), ('R', 10)]);
    assert_eq!(trace.gantt, run(&base).unwrap().gantt);
    let v = verdict(&base, &m);
    assert_eq!(
        v.reasons.iter().collect::<Vec<_>>(),
        [&KillReason::AccessSequenceDivergence]
    );
}

#[test]
fn throttle_shape() {
    let trace = run(&fixture("throttle")).unwrap();
    assert_eq!(times(&trace, "T2", EventKind::Preempt), [5, 15]);
    assert_eq!(times(&trace, "T2", EventKind::Resume), [9, 19]);
    assert_eq!(times(&trace, "T1", EventKind::Terminate)[..2], [4, 9]);
    assert!(trace.deadline_misses().next().is_none());
}

#[test]
fn throttle_starves_t2_with_shorter_period() {
    let base = fixture("throttle");
    let m = mutate(&base, Operator::DecreasePeriod, task("T1"), Some(1));
    let m = m.clone().with_horizon(mutsched::model::default_horizon(&m));
    let trace = run(&m).unwrap();
    assert_eq!(trace.completions("T2"), 0);
    assert!(times(&trace, "T2", EventKind::Start).is_empty());
    let v = verdict(&base, &m);
    assert!(v.reasons.contains(&KillReason::DeadlineMiss));
}

#[test]
fn throttle_added_runnable_precedence_reorders_t2() {
    let base = fixture("throttle");
    let target = Target::RunnablePrecedence {
        task: "T2".into(),
        runnable: "TPSPrimary".into(),
        predecessor: "APPSnsr".into(),
    };
    let m = mutate(&base, Operator::AddRunnablePrecedence, target, None);
    let trace = run(&m).unwrap();
    let t2: Vec<&str> = trace
        .events_of("T2", EventKind::RunnableStart)
        .map(|e| e.runnable.as_deref().unwrap())
        .take(2)
        .collect();
    assert_eq!(t2, ["APPSnsr", "TPSPrimary"]);
}
