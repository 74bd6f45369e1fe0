use crate::ir::{called_operations, walk_statements, AtomicAction, Binding, ConceptUnit, Level, Statement, UnitKind, Visibility};
use std::fmt::Write as _;

fn level_phrase(level: Level) -> &'static str {
    match level {
        Level::I => "a memorized episode (implicit knowledge)",
        Level::E1 => "a procedure for one kind of object",
        Level::E2 => "a general skill, shared across domains",
        Level::E3 => "a set of related concepts that cooperate",
    }
}

fn members(unit: &ConceptUnit, vis: Visibility) -> Vec<String> {
    let mut out: Vec<String> = unit
        .attributes
        .iter()
        .filter(|a| a.visibility == vis)
        .map(|a| match &a.binding {
            Binding::Const(_) => format!("{} (fixed {})", a.name, a.type_ref),
            Binding::Var(_) => format!("{} ({})", a.name, a.type_ref),
        })
        .collect();
    out.extend(unit.operations.iter().filter(|o| o.visibility == vis && !o.implicit).map(|o| {
        let params: Vec<String> = o.params.iter().map(|p| p.name.clone()).collect();
        format!("{}({})", o.name, params.join(", "))
    }));
    out
}

/// Plain-English account of what a unit knows and who may use it.
pub fn verbalize(unit: &ConceptUnit) -> String {
    let mut out = String::new();
    let kind = match unit.kind {
        UnitKind::Instance => "instance",
        UnitKind::Class => "concept",
    };
    let _ = writeln!(out, "{} is a level {} {kind} about {}: {}.", unit.name, unit.level, unit.domain, level_phrase(unit.level));

    if let Some(script) = unit.implicit_operation() {
        let mut actions = 0;
        let mut facts = 0;
        for s in &script.body {
            match s {
                Statement::Action(_) => actions += 1,
                Statement::SetupPredicate { .. } => facts += 1,
                _ => {}
            }
        }
        let _ = writeln!(
            out,
            "It replays {actions} recorded action(s) and only works where its {facts} remembered fact(s) hold."
        );
    }

    for (vis, who) in [
        (Visibility::Public, "Anyone can use"),
        (Visibility::Protected, "Units of the same domain can use"),
        (Visibility::Private, "Only the unit itself uses"),
    ] {
        let m = members(unit, vis);
        if !m.is_empty() {
            let _ = writeln!(out, "{who}: {}.", m.join(", "));
        }
    }
    if !unit.friends.is_empty() {
        let _ = writeln!(out, "It trusts: {}.", unit.friends.join(", "));
    }

    for op in unit.operations.iter().filter(|o| !o.implicit) {
        let mut loops = 0;
        let mut verbs: Vec<&'static str> = Vec::new();
        walk_statements(&op.body, &mut |s| match s {
            Statement::While { .. } => loops += 1,
            Statement::Action(AtomicAction::Verb { verb, .. }) => {
                if !verbs.contains(&verb.keyword()) {
                    verbs.push(verb.keyword());
                }
            }
            _ => {}
        });
        let mut parts = Vec::new();
        if loops > 0 {
            parts.push(format!("repeats {loops} loop(s)"));
        }
        if !verbs.is_empty() {
            parts.push(format!("acts by {}", verbs.join("/")));
        }
        let calls = called_operations(op);
        if !calls.is_empty() {
            parts.push(format!("relies on {}", calls.join(", ")));
        }
        if let Some(r) = &op.returns {
            parts.push(format!("returns {r}"));
        }
        if parts.is_empty() {
            parts.push("does nothing observable".into());
        }
        let _ = writeln!(out, "{} {}.", op.name, parts.join("; "));
    }
    out
}
