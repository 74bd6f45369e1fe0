use super::run::{answer_of, count, scoped};
use super::scene;
use crate::interp::{numeral_value, pointed_entities, said_tokens, Arrangement, ExecOptions, TraceEvent, World};
use crate::ir::{ConceptUnit, Level};

/// Which counting principles a single counting trace obeys.
///
/// `order_irrelevance` and `object_irrelevance` compare several traces, so
/// [`check_principles`] leaves them `false`; see [`judge_order_irrelevance`]
/// and [`judge_object_irrelevance`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PrincipleReport {
    /// Every counted object is pointed to exactly once.
    pub one_to_one: bool,
    /// Numerals are said in the fixed order starting at the first.
    pub stable_order: bool,
    /// The last numeral said names the size of the collection.
    pub cardinality: bool,
    pub order_irrelevance: bool,
    pub object_irrelevance: bool,
}

impl PrincipleReport {
    pub fn single_trace_ok(&self) -> bool {
        self.one_to_one && self.stable_order && self.cardinality
    }
}

/// Said tokens with a final repetition (the answer restated) removed.
fn counted_words<'t>(trace: &'t [TraceEvent]) -> Vec<&'t str> {
    let mut said = said_tokens(trace);
    if said.len() >= 2 && said[said.len() - 1] == said[said.len() - 2] {
        said.pop();
    }
    said
}

/// Check the per-trace principles of a counting run over the world's focus.
pub fn check_principles(trace: &[TraceEvent], world: &World, numerals: &[String]) -> PrincipleReport {
    let mut targets = world.focus_members();
    targets.sort();
    let mut pointed: Vec<&str> = pointed_entities(trace);
    pointed.sort_unstable();
    let one_to_one = pointed.len() == targets.len() && pointed.iter().zip(&targets).all(|(p, t)| *p == t.as_str());
    let words = counted_words(trace);
    let stable_order = words.len() <= numerals.len() && words.iter().zip(numerals).all(|(w, n)| *w == n.as_str());
    let cardinality = said_tokens(trace)
        .last()
        .and_then(|t| numeral_value(numerals, t))
        .is_some_and(|v| v == targets.len() as i64);
    PrincipleReport { one_to_one, stable_order, cardinality, order_irrelevance: false, object_irrelevance: false }
}

/// Sizes used when comparing counts across traces.
const PROBE_SIZES: [usize; 3] = [2, 5, 9];

/// Does the knowledge count the same objects to the same number whatever
/// their arrangement and counting order (seed)?
pub fn judge_order_irrelevance(kb: &[ConceptUnit], level: Level, opts: &ExecOptions) -> bool {
    let kb = &scoped(kb, level);
    PROBE_SIZES.iter().all(|&n| {
        let mut answers = Vec::new();
        for (i, arrangement) in Arrangement::ALL.into_iter().enumerate() {
            let w = scene(n, "ROOM2", "TABLE2", "apples", "APPLE", "Apple", arrangement, i as u64 + 1);
            match count(kb, level, &w, "apples", opts) {
                Ok(r) => answers.push(answer_of(&r, opts)),
                Err(_) => return false,
            }
        }
        answers.iter().all(|a| *a == Some(n as i64))
    })
}

/// Does the knowledge count collections of different kinds of object that
/// have the same size to the same number?
pub fn judge_object_irrelevance(kb: &[ConceptUnit], level: Level, opts: &ExecOptions) -> bool {
    let kb = &scoped(kb, level);
    let kinds = [("apples", "APPLE", "Apple"), ("pencils", "PENCIL", "Pencil"), ("cups", "CUP", "Cup")];
    PROBE_SIZES.iter().all(|&n| {
        kinds.iter().all(|(container, prefix, kind)| {
            let w = scene(n, "ROOM2", "TABLE2", container, prefix, kind, Arrangement::Line, 3);
            count(kb, level, &w, container, opts).is_ok_and(|r| answer_of(&r, opts) == Some(n as i64))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{numerals, Event};

    fn trace(events: Vec<Event>) -> Vec<TraceEvent> {
        events.into_iter().enumerate().map(|(i, event)| TraceEvent { seq: i + 1, event }).collect()
    }

    #[test]
    fn restated_answer_is_allowed() {
        let w = super::super::training_world();
        let mut ev = Vec::new();
        for (a, n) in ["APPLE1", "APPLE2", "APPLE3"].iter().zip(["ONE", "TWO", "THREE"]) {
            ev.push(Event::PointedTo(a.to_string()));
            ev.push(Event::Said(n.into()));
        }
        ev.push(Event::Said("THREE".into()));
        let r = check_principles(&trace(ev), &w, &numerals());
        assert!(r.single_trace_ok(), "{r:?}");
    }

    #[test]
    fn double_pointing_and_skipped_numerals_are_caught() {
        let w = super::super::training_world();
        let ev = vec![
            Event::PointedTo("APPLE1".into()),
            Event::Said("ONE".into()),
            Event::PointedTo("APPLE1".into()),
            Event::Said("THREE".into()),
        ];
        let r = check_principles(&trace(ev), &w, &numerals());
        assert!(!r.one_to_one && !r.stable_order && r.cardinality);
    }
}
