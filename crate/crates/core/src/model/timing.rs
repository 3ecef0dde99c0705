use super::{SystemModel, Tick};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Least common multiple of all task periods. Saturates at `u64::MAX`.
pub fn hyperperiod(model: &SystemModel) -> Tick {
    let lcm = model
        .tasks
        .iter()
        .map(|t| t.period.0)
        .filter(|&p| p > 0)
        .fold(1u64, |acc, p| (acc / gcd(acc, p)).saturating_mul(p));
    Tick(lcm)
}

/// Two hyperperiods plus the largest release delay, long enough to reach
/// steady-state preemption patterns.
pub fn default_horizon(model: &SystemModel) -> Tick {
    let delay = model
        .tasks
        .iter()
        .map(|t| t.offset + t.jitter)
        .max()
        .unwrap_or(Tick::ZERO);
    Tick(
        hyperperiod(model)
            .0
            .saturating_mul(2)
            .saturating_add(delay.0),
    )
}

/// Rate-monotonic priorities for tasks without an explicit one: the
/// shortest period gets the largest value, equal periods share a value.
/// Explicit priorities are left alone.
pub fn assign_rm_priorities(model: &SystemModel) -> SystemModel {
    let mut out = model.clone();
    if out.tasks.iter().all(|t| t.priority.is_some()) {
        return out;
    }
    let mut periods: Vec<u64> = out.tasks.iter().map(|t| t.period.0).collect();
    periods.sort_unstable_by(|a, b| b.cmp(a));
    periods.dedup();
    for task in out.tasks.iter_mut().filter(|t| t.priority.is_none()) {
        let rank = periods.iter().position(|&p| p == task.period.0).unwrap();
        task.priority = Some(rank as i64 + 1);
    }
    out
}
