//! Runnable behavior: evaluates action lists against shared stores and
//! runnable-local registers.

use std::collections::BTreeMap;
use std::fmt;

use crate::model::{Action, Expr, RunnableSpec, SystemModel, Tick};

/// Current value of every data store in a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoreState {
    values: BTreeMap<String, i64>,
}

impl StoreState {
    pub fn new(model: &SystemModel) -> StoreState {
        StoreState {
            values: model
                .stores
                .iter()
                .map(|s| (s.id.clone(), s.initial_value))
                .collect(),
        }
    }

    pub fn get(&self, store: &str) -> Option<i64> {
        self.values.get(store).copied()
    }

    fn set(&mut self, store: &str, value: i64) {
        // Writes only ever target declared stores; the key set never grows.
        if let Some(slot) = self.values.get_mut(store) {
            *slot = value;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// A register and its unit-delay shadow.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Register {
    pub current: i64,
    pub delayed: i64,
}

/// Registers of one runnable. Missing registers read as `(0, 0)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegisterBank {
    regs: BTreeMap<String, Register>,
}

impl RegisterBank {
    pub fn get(&self, name: &str) -> Register {
        self.regs.get(name).copied().unwrap_or_default()
    }

    pub fn set(&mut self, name: &str, reg: Register) {
        self.regs.insert(name.to_owned(), reg);
    }

    fn entry(&mut self, name: &str) -> &mut Register {
        self.regs.entry(name.to_owned()).or_default()
    }
}

/// Per-runnable register banks, persistent across instances within one run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegisterFile {
    banks: BTreeMap<String, RegisterBank>,
}

impl RegisterFile {
    pub fn bank(&self, runnable: &str) -> Option<&RegisterBank> {
        self.banks.get(runnable)
    }

    pub fn bank_mut(&mut self, runnable: &str) -> &mut RegisterBank {
        self.banks.entry(runnable.to_owned()).or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AccessKind {
    Read,
    Write,
}

impl AccessKind {
    pub fn symbol(self) -> char {
        match self {
            AccessKind::Read => 'R',
            AccessKind::Write => 'W',
        }
    }
}

impl fmt::Display for AccessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// One read or write of a data store. Reads carry the value read, writes
/// the value written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessEvent {
    pub time: Tick,
    pub task: String,
    pub runnable: String,
    pub store: String,
    pub kind: AccessKind,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputEvent {
    pub time: Tick,
    pub task: String,
    pub runnable: String,
    pub value: i64,
}

/// Evaluates `e` against one runnable's registers. Arithmetic wraps so the
/// function is total.
pub fn eval_expr(e: &Expr, regs: &RegisterBank) -> i64 {
    match e {
        Expr::Const(v) => *v,
        Expr::Reg(r) => regs.get(r).current,
        Expr::Delayed(r) => regs.get(r).delayed,
        Expr::Add(a, b) => eval_expr(a, regs).wrapping_add(eval_expr(b, regs)),
        Expr::Sub(a, b) => eval_expr(a, regs).wrapping_sub(eval_expr(b, regs)),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActionEffects {
    pub accesses: Vec<AccessEvent>,
    pub outputs: Vec<OutputEvent>,
}

/// Applies one completed instance of `runnable` at time `t`.
///
/// Reads, writes and outputs run in declaration order; latches run after
/// all of them, in declaration order.
pub fn run_actions(
    runnable: &RunnableSpec,
    task: &str,
    store: &mut StoreState,
    regs: &mut RegisterFile,
    t: Tick,
) -> ActionEffects {
    let bank = regs.bank_mut(&runnable.id);
    let mut fx = ActionEffects::default();
    let access = |store_id: &str, kind, value| AccessEvent {
        time: t,
        task: task.to_owned(),
        runnable: runnable.id.clone(),
        store: store_id.to_owned(),
        kind,
        value,
    };
    for action in &runnable.actions {
        match action {
            Action::Read {
                store: id,
                register,
            } => {
                let value = store.get(id).unwrap_or_default();
                bank.entry(register).current = value;
                fx.accesses.push(access(id, AccessKind::Read, value));
            }
            Action::Write { store: id, expr } => {
                let value = eval_expr(expr, bank);
                store.set(id, value);
                fx.accesses.push(access(id, AccessKind::Write, value));
            }
            Action::Output(expr) => fx.outputs.push(OutputEvent {
                time: t,
                task: task.to_owned(),
                runnable: runnable.id.clone(),
                value: eval_expr(expr, bank),
            }),
            Action::LatchDelay(_) => {}
        }
    }
    for action in &runnable.actions {
        if let Action::LatchDelay(name) = action {
            let reg = bank.entry(name);
            reg.delayed = reg.current;
        }
    }
    fx
}
