//! Knowledge base: units of every level and domain, the practice log, and
//! automatic advancement between levels.

mod record;
mod store;

pub use record::{demonstration, world_key};

use crate::fixtures;
use crate::interp::{ExecOptions, World};
use crate::ir::{validate, ConceptUnit, Level, TypeRegistry, UnitKind, GLOBALS};
use crate::redescribe::{
    antiunify_instances, decompose_to_e3, generalize_to_e2, mastery_check, MasteryLog, PhaseReport, Readiness,
};
use crate::tasks::{build_task, run_task_with, Outcome, TaskId};
use std::collections::{BTreeMap, BTreeSet};

/// Successful distinct worlds needed before a phase fires on its own.
pub const DEFAULT_THRESHOLD: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KbError {
    #[error("I/O failure: {0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("two units named {0} at level {1}")]
    DuplicateUnit(String, Level),
    #[error("unit {0} is invalid: {1}")]
    Invalid(String, String),
    #[error("cannot record an instance from an empty trace")]
    EmptyTrace,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    units: BTreeMap<(String, Level), ConceptUnit>,
    pub log: MasteryLog,
    pub registry: TypeRegistry,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        KnowledgeBase::default()
    }

    /// Add a validated unit under a fresh `(name, level)` key.
    pub fn insert(&mut self, unit: ConceptUnit) -> Result<(), KbError> {
        let key = (unit.name.clone(), unit.level);
        if self.units.contains_key(&key) {
            return Err(KbError::DuplicateUnit(key.0, key.1));
        }
        let diags = validate(&unit);
        if let Some(d) = diags.first() {
            return Err(KbError::Invalid(unit.name.clone(), d.to_string()));
        }
        self.units.insert(key, unit);
        Ok(())
    }

    pub fn get(&self, name: &str, level: Level) -> Option<&ConceptUnit> {
        self.units.get(&(name.to_string(), level))
    }

    pub fn contains(&self, name: &str, level: Level) -> bool {
        self.get(name, level).is_some()
    }

    /// Every unit, ordered by name then level.
    pub fn units(&self) -> impl Iterator<Item = &ConceptUnit> {
        self.units.values()
    }

    /// Owned copy of every unit, for the interpreter and the task harness.
    pub fn all(&self) -> Vec<ConceptUnit> {
        self.units.values().cloned().collect()
    }

    pub fn at_level(&self, level: Level) -> Vec<&ConceptUnit> {
        self.units.values().filter(|u| u.level == level).collect()
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Units of one name across levels, lowest level first.
    pub fn named(&self, name: &str) -> Vec<&ConceptUnit> {
        self.units.values().filter(|u| u.name == name).collect()
    }

    pub fn globals(&self) -> Option<&ConceptUnit> {
        self.units.values().find(|u| u.is_globals())
    }

    /// Unit counts per level.
    pub fn census(&self) -> BTreeMap<Level, usize> {
        let mut out: BTreeMap<Level, usize> = Level::ALL.into_iter().map(|l| (l, 0)).collect();
        for u in self.units.values() {
            *out.entry(u.level).or_default() += 1;
        }
        out
    }

    /// Friends that name neither a unit nor a shared constant.
    pub fn dangling_friends(&self) -> Vec<(String, String)> {
        let shared: BTreeSet<&str> = self.globals().map(|g| g.attributes.iter().map(|a| a.name.as_str()).collect()).unwrap_or_default();
        self.units
            .values()
            .flat_map(|u| u.friends.iter().map(move |f| (u, f)))
            .filter(|(_, f)| !shared.contains(f.as_str()) && !self.units.values().any(|o| o.name == **f))
            .map(|(u, f)| (u.name.clone(), f.clone()))
            .collect()
    }

    /// Log an outcome for a unit in a named world.
    pub fn log_outcome(&mut self, unit: &str, world: &str, outcome: Outcome) {
        self.log.record(unit, world, outcome);
    }

    /// Run the tasks of one level for `seeds` and log each outcome against
    /// the unit that answers counting queries in the task's domain.
    pub fn practice(&mut self, level: Level, tasks: &[TaskId], seeds: &[u64], opts: &ExecOptions) -> Vec<(TaskId, u64, Outcome)> {
        let kb = self.all();
        let mut out = Vec::new();
        for &t in tasks {
            for &seed in seeds {
                let task = build_task(t, seed);
                let outcome = run_task_with(&task, &kb, level, opts).outcome;
                if let Some(unit) = self.answering_unit(level, &task.caller_domain) {
                    self.log.record(&unit, &format!("{t}#{seed}"), outcome.clone());
                }
                out.push((t, seed, outcome));
            }
        }
        out
    }

    /// The class at `level` offering `Counting()`, preferring the domain.
    fn answering_unit(&self, level: Level, domain: &str) -> Option<String> {
        let offers = |u: &&ConceptUnit| u.level == level && u.kind == UnitKind::Class && u.operation("Counting").is_some_and(|o| o.params.is_empty());
        let units: Vec<&ConceptUnit> = self.units.values().filter(offers).collect();
        units.iter().find(|u| u.domain == domain).or(units.first()).map(|u| u.name.clone())
    }

    /// Fire, per domain, the next phase whose inputs have been mastered.
    /// Inputs stay in the knowledge base; at most one phase per domain.
    pub fn advance(&mut self, threshold: usize) -> Vec<PhaseReport> {
        let domains: BTreeSet<String> = self.units.values().filter(|u| !u.is_globals()).map(|u| u.domain.clone()).collect();
        let mut reports = Vec::new();
        for domain in domains {
            if let Some(r) = self.advance_domain(&domain, threshold) {
                reports.push(r);
            }
        }
        reports
    }

    fn top_level(&self, domain: &str) -> Option<Level> {
        self.units.values().filter(|u| u.domain == domain && !u.is_globals()).map(|u| u.level).max()
    }

    fn advance_domain(&mut self, domain: &str, threshold: usize) -> Option<PhaseReport> {
        match self.top_level(domain)? {
            Level::I => {
                let instances: Vec<ConceptUnit> = self
                    .units
                    .values()
                    .filter(|u| u.domain == domain && u.kind == UnitKind::Instance && u.level == Level::I)
                    .cloned()
                    .collect();
                let mastered: usize = instances
                    .iter()
                    .map(|u| match mastery_check(&self.log, u, usize::MAX) {
                        Readiness::NotReady(n) => n,
                        Readiness::Ready => 0,
                    })
                    .sum();
                if instances.len() < 2 || mastered < threshold {
                    return None;
                }
                let (unit, report) = antiunify_instances(&instances).ok()?;
                self.adopt(vec![unit]).then_some(report)
            }
            Level::E1 => {
                if self.units.values().any(|u| u.level == Level::E2 && !u.is_globals()) {
                    return None;
                }
                let e1 = self.units.values().find(|u| u.domain == domain && u.level == Level::E1)?.clone();
                if mastery_check(&self.log, &e1, threshold) != Readiness::Ready {
                    return None;
                }
                let (units, report) = generalize_to_e2(&e1).ok()?;
                self.adopt(units).then_some(report)
            }
            Level::E2 => {
                if self.units.values().any(|u| u.level == Level::E3 && u.domain == domain) {
                    return None;
                }
                let e2: Vec<ConceptUnit> =
                    self.units.values().filter(|u| u.level == Level::E2 && (u.domain == domain || u.is_globals())).cloned().collect();
                let main = e2.iter().find(|u| u.operation("Counting").is_some() && u.domain == domain)?;
                if mastery_check(&self.log, main, threshold) != Readiness::Ready {
                    return None;
                }
                let (units, report) = decompose_to_e3(&e2).ok()?;
                self.adopt(units).then_some(report)
            }
            Level::E3 => None,
        }
    }

    /// Insert pass outputs whose keys are new. Returns whether any was new.
    fn adopt(&mut self, units: Vec<ConceptUnit>) -> bool {
        let mut added = false;
        for u in units {
            if u.name == GLOBALS && self.globals().is_some() {
                continue;
            }
            added |= self.insert(u).is_ok();
        }
        added
    }

    /// The knowledge of the whole chain: every fixture plus one recorded
    /// demonstration of counting four apples.
    pub fn canonical() -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        for (_, text) in fixtures::ALL {
            for u in fixtures::load(text) {
                kb.insert(u).expect("fixtures are distinct and valid");
            }
        }
        let world = crate::tasks::scene(4, "ROOM1", "TABLE1", "apples", "APPLE", "Apple", crate::interp::Arrangement::Line, 0);
        let trace = demonstration(&world, &crate::interp::numerals());
        kb.record_instance(&trace, &world, "apples").expect("demonstration is not empty");
        kb
    }

    /// Training worlds of the canonical chain, for callers that want to
    /// replay the level-I instances.
    pub fn training_worlds() -> Vec<World> {
        vec![
            crate::tasks::training_world(),
            crate::tasks::scene(4, "ROOM1", "TABLE1", "apples", "APPLE", "Apple", crate::interp::Arrangement::Line, 0),
        ]
    }
}
