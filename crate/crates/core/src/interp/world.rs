use std::collections::BTreeMap;
use std::fmt;

pub type EntityId = String;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrangement {
    Line,
    Square,
    Circle,
    Scattered,
}

impl Arrangement {
    pub const ALL: [Arrangement; 4] = [Arrangement::Line, Arrangement::Square, Arrangement::Circle, Arrangement::Scattered];

    /// Setup predicate recorded for a group in this arrangement.
    pub fn predicate(self) -> &'static str {
        match self {
            Arrangement::Line => "InLine",
            Arrangement::Square => "InSquare",
            Arrangement::Circle => "InCircle",
            Arrangement::Scattered => "Scattered",
        }
    }

    pub fn from_predicate(name: &str) -> Option<Arrangement> {
        Arrangement::ALL.into_iter().find(|a| a.predicate() == name)
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Entity {
    pub kind: String,
    pub group: Option<String>,
}

/// A relational fact such as `On(APPLE1, TABLE1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fact {
    pub pred: String,
    pub args: Vec<EntityId>,
}

impl Fact {
    pub fn new(pred: &str, args: &[&str]) -> Self {
        Fact { pred: pred.to_string(), args: args.iter().map(|a| a.to_string()).collect() }
    }
}

/// Simulated environment. Worlds are plain values; execution works on a copy.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct World {
    pub entities: BTreeMap<EntityId, Entity>,
    pub arrangements: BTreeMap<String, Arrangement>,
    pub containers: BTreeMap<String, Vec<EntityId>>,
    /// Facts in the order they were stated.
    pub facts: Vec<Fact>,
    /// Container a counting query is about.
    pub focus: Option<String>,
    /// Cardinal sums established earlier, by container.
    pub known_sums: BTreeMap<String, i64>,
    pub rng_seed: u64,
}

impl World {
    pub fn new(rng_seed: u64) -> Self {
        World { rng_seed, ..World::default() }
    }

    pub fn add_entity(&mut self, id: &str, kind: &str, group: Option<&str>) {
        self.entities.insert(id.to_string(), Entity { kind: kind.to_string(), group: group.map(str::to_string) });
    }

    /// Add `n` entities `PREFIX1..PREFIXn` of one kind as a group and a
    /// container of the same name.
    pub fn add_group(&mut self, container: &str, prefix: &str, kind: &str, n: usize, arrangement: Arrangement) -> Vec<EntityId> {
        let ids: Vec<EntityId> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        for id in &ids {
            self.add_entity(id, kind, Some(container));
        }
        self.arrangements.insert(container.to_string(), arrangement);
        self.containers.insert(container.to_string(), ids.clone());
        ids
    }

    pub fn add_fact(&mut self, pred: &str, args: &[&str]) {
        self.facts.push(Fact::new(pred, args));
    }

    pub fn has_fact(&self, pred: &str, args: &[EntityId]) -> bool {
        self.facts.iter().any(|f| f.pred == pred && f.args == args)
    }

    pub fn kind_of(&self, id: &str) -> Option<&str> {
        self.entities.get(id).map(|e| e.kind.as_str())
    }

    /// Members of a group, in container order when the group has a container.
    pub fn group_members(&self, group: &str) -> Vec<EntityId> {
        if let Some(c) = self.containers.get(group) {
            return c.iter().filter(|id| self.entities.get(*id).and_then(|e| e.group.as_deref()) == Some(group)).cloned().collect();
        }
        self.entities.iter().filter(|(_, e)| e.group.as_deref() == Some(group)).map(|(id, _)| id.clone()).collect()
    }

    /// First entity of the given kind, by id.
    pub fn first_of_kind(&self, kind: &str) -> Option<EntityId> {
        self.entities.iter().find(|(_, e)| e.kind == kind).map(|(id, _)| id.clone())
    }

    pub fn focus_members(&self) -> Vec<EntityId> {
        self.focus.as_ref().and_then(|f| self.containers.get(f)).cloned().unwrap_or_default()
    }

    /// Remove an entity from every container (it has been taken away).
    pub fn take_away(&mut self, id: &str) {
        for c in self.containers.values_mut() {
            c.retain(|e| e != id);
        }
    }

    /// Check the structural invariants: container members exist and
    /// arrangements refer to groups that have members.
    pub fn check(&self) -> Result<(), String> {
        for (name, ids) in &self.containers {
            if let Some(id) = ids.iter().find(|id| !self.entities.contains_key(*id)) {
                return Err(format!("container `{name}` holds unknown entity `{id}`"));
            }
        }
        for g in self.arrangements.keys() {
            if !self.entities.values().any(|e| e.group.as_deref() == Some(g.as_str())) {
                return Err(format!("arrangement for empty group `{g}`"));
            }
        }
        Ok(())
    }
}
