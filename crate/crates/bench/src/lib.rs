//! Shared fixtures for the benchmarks.

use verlinde_core::index::{EngineOptions, IndexEngine, IndexTask};
use verlinde_core::lie::RootSystem;

/// Engine for the trivial test class with default options.
pub fn engine(group: &str, genus: u32, level: i64) -> IndexEngine {
    let rs = RootSystem::from_name(group).expect("known group");
    IndexEngine::new(IndexTask::new(&rs, genus, level), EngineOptions::default()).expect("valid task")
}

/// Tasks timed by every benchmark group.
pub const TASKS: [(&str, u32, i64); 4] = [("A1", 2, 3), ("A1", 3, 3), ("A2", 2, 4), ("B2", 2, 4)];
