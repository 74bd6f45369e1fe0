use super::{KbError, KnowledgeBase};
use crate::interp::{Event, TraceEvent, World};
use crate::ir::{
    AtomicAction, Attribute, ConceptUnit, Expr, Level, Literal, Operation, Statement, UnitKind, Verb, Visibility, IMPLICIT_OP,
};
use crate::tasks::Outcome;

/// Concept every recorded episode is filed under.
const RECORDED_CONCEPT: &str = "Counting";

/// Short description of a counting world, used to tell worlds apart in the
/// practice log.
pub fn world_key(world: &World) -> String {
    let focus = world.focus.clone().unwrap_or_default();
    let n = world.focus_members().len();
    let arrangement = world.arrangements.get(&focus).map(|a| a.to_string()).unwrap_or_default();
    let places: Vec<String> = world.facts.iter().filter(|f| f.pred == "In").map(|f| f.args.join(":")).collect();
    format!("{focus}:{n}:{arrangement}:{}", places.join(","))
}

/// What a teacher does when counting the focus aloud: before each object a
/// hand movement, then point and say the next numeral, and finally repeat
/// the last numeral as the answer.
pub fn demonstration(world: &World, numerals: &[String]) -> Vec<TraceEvent> {
    let mut events = Vec::new();
    let hand = world.first_of_kind("Hand");
    for (i, id) in world.focus_members().iter().enumerate() {
        if let Some(h) = &hand {
            events.push(Event::Moved(h.clone()));
        }
        events.push(Event::PointedTo(id.clone()));
        events.push(Event::Said(numerals[i].clone()));
    }
    if let Some(Event::Said(last)) = events.last().cloned() {
        events.push(Event::Said(last));
    }
    events.into_iter().enumerate().map(|(i, event)| TraceEvent { seq: i + 1, event }).collect()
}

fn is_identifier(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn push_unique(v: &mut Vec<String>, s: &str) {
    if !v.iter().any(|x| x == s) {
        v.push(s.to_string());
    }
}

impl KnowledgeBase {
    /// Code one observed episode as a level-I instance: a constant for each
    /// entity and word involved, the facts that held, and the actions in
    /// order. The instance is added to the knowledge base and its world is
    /// logged as a success.
    pub fn record_instance(&mut self, trace: &[TraceEvent], world: &World, domain: &str) -> Result<ConceptUnit, KbError> {
        if trace.is_empty() {
            return Err(KbError::EmptyTrace);
        }
        let actor = world.first_of_kind("Person").unwrap_or_else(|| "ME".to_string());

        let mut words = Vec::new();
        let mut pointed = Vec::new();
        let mut moved = Vec::new();
        let mut taken = Vec::new();
        for e in trace {
            match &e.event {
                Event::Said(t) if is_identifier(t) => push_unique(&mut words, t),
                Event::Said(_) => {}
                Event::PointedTo(id) => push_unique(&mut pointed, id),
                Event::Moved(id) => push_unique(&mut moved, id),
                Event::TookAway(id) => push_unique(&mut taken, id),
            }
        }
        let involved = |id: &String| *id == actor || pointed.contains(id) || taken.contains(id);
        let facts: Vec<&crate::interp::Fact> = world.facts.iter().filter(|f| f.args.iter().any(involved)).collect();
        let mut context = Vec::new();
        for f in &facts {
            for a in &f.args {
                if !involved(a) && !moved.contains(a) {
                    push_unique(&mut context, a);
                }
            }
        }

        let mut attributes = Vec::new();
        let mut declare = |names: &[String], ty: &dyn Fn(&str) -> String| {
            for n in names {
                if !attributes.iter().any(|a: &Attribute| a.name == *n) {
                    attributes.push(Attribute::named_const(n.clone(), ty(n), Visibility::Private));
                }
            }
        };
        let kind = |id: &str| world.kind_of(id).unwrap_or("Object").to_string();
        declare(&words, &|_| "Sound".to_string());
        declare(std::slice::from_ref(&actor), &kind);
        declare(&context, &kind);
        declare(&pointed, &kind);
        declare(&taken, &kind);
        declare(&moved, &kind);

        let mut body: Vec<Statement> =
            facts.iter().map(|f| Statement::SetupPredicate { name: f.pred.clone(), args: f.args.clone() }).collect();
        // The arrangement of the objects pointed at, when they form a group.
        if let Some(group) = pointed.first().and_then(|p| world.entities.get(p)).and_then(|e| e.group.clone()) {
            let members = world.group_members(&group);
            if let (Some(arr), true) = (world.arrangements.get(&group), !members.is_empty()) {
                body.push(Statement::SetupPredicate { name: arr.predicate().to_string(), args: members });
            }
        }
        for e in trace {
            let (verb, arg) = match &e.event {
                Event::PointedTo(id) => (Verb::PointTo, Expr::name(id)),
                Event::Said(t) if is_identifier(t) => (Verb::Say, Expr::name(t)),
                Event::Said(t) => (Verb::Say, Expr::Lit(Literal::Str(t.clone()))),
                Event::Moved(id) => (Verb::Move, Expr::name(id)),
                Event::TookAway(id) => (Verb::TakeAway, Expr::name(id)),
            };
            body.push(Statement::action(AtomicAction::verb(&actor, verb, arg)));
        }

        let ordinal = (1..).find(|i| !self.contains(&format!("{RECORDED_CONCEPT}_{domain}_{i}"), Level::I)).unwrap_or(1);
        let name = format!("{RECORDED_CONCEPT}_{domain}_{ordinal}");
        let mut unit = ConceptUnit::new(&name, UnitKind::Instance, Level::I, domain);
        unit.attributes = attributes;
        let mut script = Operation::new(IMPLICIT_OP, Visibility::Private);
        script.implicit = true;
        script.body = body;
        unit.operations.push(script);
        self.insert(unit.clone())?;
        self.log.record(&name, &world_key(world), Outcome::Solved);
        Ok(unit)
    }
}
