//! Seeded random models.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mutsched::model::{Action, DataStoreSpec, Expr, RunnableSpec, TaskSpec};
use mutsched::{hyperperiod, SystemModel, Tick};

pub struct Limits {
    pub max_tasks: usize,
    pub max_period: u64,
    pub max_horizon: u64,
    pub max_runnables: usize,
    pub max_wcet: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_tasks: 3,
            max_period: 12,
            max_horizon: 60,
            max_runnables: 3,
            max_wcet: 3,
        }
    }
}

const STORES: [&str; 2] = ["A", "B"];
const REGS: [&str; 2] = ["x", "y"];

fn expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    match rng.random_range(0..if depth == 0 { 3 } else { 5 }) {
        0 => Expr::Const(rng.random_range(-5..=20)),
        1 => Expr::reg(REGS[rng.random_range(0..2)]),
        2 => Expr::delayed(REGS[rng.random_range(0..2)]),
        3 => Expr::add(expr(rng, depth - 1), expr(rng, depth - 1)),
        _ => Expr::sub(expr(rng, depth - 1), expr(rng, depth - 1)),
    }
}

fn action(rng: &mut ChaCha8Rng) -> Action {
    let store = STORES[rng.random_range(0..2)].to_owned();
    match rng.random_range(0..4) {
        0 => Action::Read {
            store,
            register: REGS[rng.random_range(0..2)].to_owned(),
        },
        1 => Action::Write {
            store,
            expr: expr(rng, 2),
        },
        2 => Action::Output(expr(rng, 2)),
        _ => Action::LatchDelay(REGS[rng.random_range(0..2)].to_owned()),
    }
}

/// A valid time-aware model: acyclic precedences, jitter below the period,
/// horizon within the limits.
pub fn random_model(seed: u64, limits: &Limits) -> SystemModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=limits.max_tasks);
    let mut tasks = Vec::new();
    let mut runnables = Vec::new();
    for i in 0..n {
        let period = rng.random_range(1..=limits.max_period);
        let m = rng.random_range(1..=limits.max_runnables);
        let ids: Vec<String> = (0..m).map(|j| format!("R{}_{}", i + 1, j + 1)).collect();
        // Runnable precedence only follows a random topological order.
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(&mut rng);
        for (j, id) in ids.iter().enumerate() {
            let rank = order.iter().position(|&x| x == j).unwrap();
            let predecessors = order[..rank]
                .iter()
                .filter(|_| rng.random_bool(0.3))
                .map(|&p| ids[p].clone())
                .collect();
            let actions = (0..rng.random_range(0..=4))
                .map(|_| action(&mut rng))
                .collect();
            runnables.push(RunnableSpec {
                id: id.clone(),
                wcet: Tick(rng.random_range(1..=limits.max_wcet)),
                actions,
                predecessors,
            });
        }
        let predecessors = (0..i)
            .filter(|_| rng.random_bool(0.2))
            .map(|p| format!("T{}", p + 1))
            .collect();
        tasks.push(TaskSpec {
            id: format!("T{}", i + 1),
            offset: Tick(rng.random_range(0..period.min(4))),
            period: Tick(period),
            priority: if rng.random_bool(0.5) {
                Some(rng.random_range(1..=4))
            } else {
                None
            },
            jitter: Tick(if rng.random_bool(0.3) {
                rng.random_range(0..period)
            } else {
                0
            }),
            predecessors,
            runnables: ids,
            spawn_index: i,
        });
    }
    let stores = STORES
        .iter()
        .map(|s| DataStoreSpec {
            id: (*s).to_owned(),
            initial_value: rng.random_range(0..10),
        })
        .collect();
    let model = SystemModel::new(tasks, runnables, stores);
    let horizon = rng.random_range(1..=limits.max_horizon);
    model.with_horizon(Tick(horizon))
}

/// A task set with total utilization above one, no offsets and no jitter,
/// simulated over three hyperperiods.
pub fn overloaded_model(seed: u64) -> SystemModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.random_range(1..=4);
        let mut tasks = Vec::new();
        let mut runnables = Vec::new();
        for i in 0..n {
            let period = rng.random_range(2..=12u64);
            let wcet = rng.random_range(1..=period);
            runnables.push(RunnableSpec {
                id: format!("R{}", i + 1),
                wcet: Tick(wcet),
                actions: vec![],
                predecessors: vec![],
            });
            tasks.push(TaskSpec {
                id: format!("T{}", i + 1),
                offset: Tick(0),
                period: Tick(period),
                priority: None,
                jitter: Tick(0),
                predecessors: vec![],
                runnables: vec![format!("R{}", i + 1)],
                spawn_index: i,
            });
        }
        let model = SystemModel::new(tasks, runnables, vec![]);
        let h = hyperperiod(&model).0;
        // Demand over one hyperperiod against the time available.
        let demand: u64 = model
            .tasks
            .iter()
            .map(|t| h / t.period.0 * model.wcet(t).0)
            .sum();
        if demand > h {
            return model.with_horizon(Tick(3 * h));
        }
    }
}
