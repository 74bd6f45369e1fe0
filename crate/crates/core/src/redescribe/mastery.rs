use crate::ir::ConceptUnit;
use crate::tasks::Outcome;
use std::collections::BTreeSet;

/// One attempt of a unit at a task world. `task` names the world, e.g.
/// `T3#2` for task T3 with seed 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasteryEntry {
    pub unit: String,
    pub task: String,
    pub outcome: Outcome,
    pub tick: u64,
}

/// Append-only record of attempts with strictly increasing ticks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MasteryLog {
    entries: Vec<MasteryEntry>,
}

impl MasteryLog {
    pub fn entries(&self) -> &[MasteryEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    fn next_tick(&self) -> u64 {
        self.entries.last().map_or(1, |e| e.tick + 1)
    }

    pub fn record(&mut self, unit: &str, task: &str, outcome: Outcome) -> u64 {
        let tick = self.next_tick();
        self.entries.push(MasteryEntry { unit: unit.to_string(), task: task.to_string(), outcome, tick });
        tick
    }

    /// Append an entry with a given tick; refused unless it is later than
    /// every tick already logged.
    pub fn push(&mut self, entry: MasteryEntry) -> Result<(), MasteryEntry> {
        if self.entries.last().is_some_and(|e| e.tick >= entry.tick) {
            return Err(entry);
        }
        self.entries.push(entry);
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Readiness {
    Ready,
    NotReady(usize),
}

/// Ready once the unit has succeeded in at least `threshold` distinct worlds.
pub fn mastery_check(log: &MasteryLog, unit: &ConceptUnit, threshold: usize) -> Readiness {
    let worlds: BTreeSet<&str> = log
        .entries
        .iter()
        .filter(|e| e.unit == unit.name && e.outcome.is_solved())
        .map(|e| e.task.as_str())
        .collect();
    if worlds.len() >= threshold.max(1) {
        Readiness::Ready
    } else {
        Readiness::NotReady(worlds.len())
    }
}
