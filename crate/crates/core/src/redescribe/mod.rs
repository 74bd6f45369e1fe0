//! The three phase changes between representation levels, as passes over
//! concept units.

mod decompose;
mod generalize;
mod loop_roll;
mod mastery;
mod antiunify;

pub use antiunify::antiunify_instances;
pub use decompose::decompose_to_e3;
pub use generalize::generalize_to_e2;
pub use loop_roll::{find_region, loop_roll, Region, MAX_PERIOD};
pub use mastery::{mastery_check, MasteryEntry, MasteryLog, Readiness};

use crate::dsl::{parse, SourceText};
use crate::ir::{validate, ConceptUnit, Diagnostic};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    P1,
    P2,
    P3,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// What a pass did, rule by rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseReport {
    pub phase: Phase,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    /// `(rule, detail)` in the order the rules fired.
    pub rules_applied: Vec<(String, String)>,
    /// `(member or predicate, reason)`.
    pub dropped: Vec<(String, String)>,
}

impl PhaseReport {
    fn new(phase: Phase, inputs: Vec<String>) -> Self {
        PhaseReport { phase, inputs, outputs: Vec::new(), rules_applied: Vec::new(), dropped: Vec::new() }
    }

    fn rule(&mut self, rule: &str, detail: impl Into<String>) {
        self.rules_applied.push((rule.to_string(), detail.into()));
    }

    fn drop(&mut self, what: impl Into<String>, reason: &str) {
        self.dropped.push((what.into(), reason.to_string()));
    }

    /// One `rule<TAB>detail` line per entry.
    pub fn to_text(&self) -> String {
        let mut out = format!("phase\t{}\n", self.phase);
        for i in &self.inputs {
            out.push_str(&format!("input\t{i}\n"));
        }
        for (rule, detail) in &self.rules_applied {
            out.push_str(&format!("{rule}\t{detail}\n"));
        }
        for (what, why) in &self.dropped {
            out.push_str(&format!("drop\t{what}: {why}\n"));
        }
        for o in &self.outputs {
            out.push_str(&format!("output\t{o}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RedescribeError {
    #[error("anti-unification needs at least 2 instances, got {0}")]
    TooFewInstances(usize),
    #[error("`{0}` is not a level-I instance")]
    NotInstance(String),
    #[error("instances come from different domains: {0} and {1}")]
    DomainMismatch(String, String),
    #[error("no common skeleton: {0}")]
    NoCommonSkeleton(String),
    #[error("input is not a valid E1 unit: {0}")]
    NotE1(String),
    #[error("input is not a valid E2 unit set: {0}")]
    NotE2(String),
}

fn diagnostics_text(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}

/// Parse text a pass synthesized and check it at its own level.
fn synthesize(text: &str) -> Result<Vec<ConceptUnit>, String> {
    let units = parse(&SourceText::memory(text)).map_err(|errs| format!("synthesized text does not parse: {}", errs[0]))?;
    for u in &units {
        let d = validate(u);
        if !d.is_empty() {
            return Err(diagnostics_text(&d));
        }
    }
    Ok(units)
}

fn capitalized(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}
