#![allow(dead_code)]

pub mod gen;
pub mod reference;

use std::path::PathBuf;

use mutsched::{parse_model, SystemModel};

pub const FIXTURES: [&str; 6] = [
    "table3",
    "table4",
    "table5",
    "table6",
    "three_servo",
    "throttle",
];

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> SystemModel {
    let path = corpus_path(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_model(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}
