use super::loop_roll::{arg_of, find_region};
use super::{capitalized, synthesize, Phase, PhaseReport, RedescribeError};
use crate::dsl::print_expr;
use crate::interp::numerals;
use crate::ir::{AtomicAction, ConceptUnit, Expr, Level, Statement, TypeRegistry, UnitKind, Verb};
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// What a slot of the repeated pattern does across copies and instances.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Slot {
    /// Same argument everywhere.
    Const(Expr),
    /// Walks through the counted objects of one kind.
    Objects(String),
    /// Walks through the numerals in order.
    Numerals,
}

/// Verb actions of an instance script, without a final restated word.
fn actions(unit: &ConceptUnit) -> (Vec<Statement>, bool) {
    let mut acts: Vec<Statement> = unit
        .implicit_operation()
        .map(|op| op.body.iter().filter(|s| matches!(s, Statement::Action(AtomicAction::Verb { .. }))).cloned().collect())
        .unwrap_or_default();
    let restated = acts.len() >= 2 && {
        let (a, b) = (&acts[acts.len() - 2], &acts[acts.len() - 1]);
        matches!(b, Statement::Action(AtomicAction::Verb { verb: Verb::Say, .. })) && a == b
    };
    if restated {
        acts.pop();
    }
    (acts, restated)
}

fn verb_parts(s: &Statement) -> Option<(&str, Verb)> {
    match s {
        Statement::Action(AtomicAction::Verb { actor, verb, .. }) => Some((actor, *verb)),
        _ => None,
    }
}

fn type_of<'u>(unit: &'u ConceptUnit, e: &Expr) -> Option<&'u str> {
    match e {
        Expr::Name(n) => unit.attribute(n).map(|a| a.type_ref.as_str()),
        _ => None,
    }
}

/// Concept name without an instance suffix or a domain tail.
fn concept_of(name: &str, domain: &str) -> String {
    let base = name.split('_').next().unwrap_or(name);
    base.strip_suffix(&capitalized(domain)).filter(|b| !b.is_empty()).unwrap_or(base).to_string()
}

/// Compress several level-I instances of one domain into an E1 class.
///
/// The instances must repeat one action pattern; arguments that change
/// from copy to copy become walks over a collection attribute or over the
/// numeral list, constants used as arguments are kept, and everything else
/// (the room, the table, the facts about them) is dropped as occasional.
pub fn antiunify_instances(instances: &[ConceptUnit]) -> Result<(ConceptUnit, PhaseReport), RedescribeError> {
    if instances.len() < 2 {
        return Err(RedescribeError::TooFewInstances(instances.len()));
    }
    if let Some(u) = instances.iter().find(|u| u.level != Level::I || u.kind != UnitKind::Instance) {
        return Err(RedescribeError::NotInstance(u.name.clone()));
    }
    let domain = instances[0].domain.clone();
    if let Some(u) = instances.iter().find(|u| u.domain != domain) {
        return Err(RedescribeError::DomainMismatch(domain, u.domain.clone()));
    }
    let mut report = PhaseReport::new(Phase::P1, instances.iter().map(|u| u.name.clone()).collect());
    let no_skeleton = |m: String| RedescribeError::NoCommonSkeleton(m);

    // Find the repeated pattern.
    let scripts: Vec<(Vec<Statement>, bool)> = instances.iter().map(actions).collect();
    let mut pattern: Option<Vec<(String, Verb)>> = None;
    for (acts, _) in &scripts {
        if let Some(r) = find_region(acts) {
            if r.start != 0 || r.len() != acts.len() {
                continue;
            }
            let p: Vec<(String, Verb)> =
                acts[..r.period].iter().filter_map(verb_parts).map(|(a, v)| (a.to_string(), v)).collect();
            if pattern.as_ref().is_some_and(|q| *q != p) {
                return Err(no_skeleton("instances repeat different action patterns".into()));
            }
            pattern = Some(p);
        }
    }
    let pattern = pattern.ok_or_else(|| no_skeleton("no instance repeats an action pattern over its whole script".into()))?;
    let period = pattern.len();
    for ((acts, _), u) in scripts.iter().zip(instances) {
        let fits = acts.len() % period == 0
            && !acts.is_empty()
            && acts.iter().enumerate().all(|(i, s)| verb_parts(s).is_some_and(|(a, v)| a == pattern[i % period].0 && v == pattern[i % period].1));
        if !fits {
            return Err(no_skeleton(format!("{} does not follow the common pattern", u.name)));
        }
    }
    let verbs: Vec<&str> = pattern.iter().map(|(_, v)| v.keyword()).collect();
    report.rule("loop_roll", format!("pattern {} repeated", verbs.join("/")));
    report.rule("anti_unify", format!("{} instances share the pattern", instances.len()));

    // The actor.
    let actor = pattern[0].0.clone();
    if pattern.iter().any(|(a, _)| *a != actor) {
        return Err(no_skeleton("more than one actor".into()));
    }
    let actor_type = instances[0].attribute(&actor).map(|a| a.type_ref.to_string()).unwrap_or_else(|| "Person".into());
    let actor_var: String = actor_type.chars().next().map_or("p".into(), |c| c.to_ascii_lowercase().to_string());
    report.rule("generalize", format!("{actor} -> {actor_type} {actor_var}"));

    // Classify every slot.
    let words = numerals();
    let mut slots = Vec::with_capacity(period);
    for j in 0..period {
        let per_instance: Vec<Vec<&Expr>> =
            scripts.iter().map(|(acts, _)| acts.iter().skip(j).step_by(period).map(arg_of).collect()).collect();
        let first = per_instance[0][0];
        let slot = if per_instance.iter().flatten().all(|e| *e == first) {
            Slot::Const(first.clone())
        } else if per_instance.iter().zip(instances).all(|(args, u)| {
            args.iter().enumerate().all(|(i, e)| type_of(u, e) == Some("Sound") && **e == Expr::name(&words[i]))
        }) {
            Slot::Numerals
        } else {
            let kinds: BTreeSet<Option<&str>> =
                per_instance.iter().zip(instances).flat_map(|(args, u)| args.iter().map(move |e| type_of(u, e))).collect();
            let distinct = per_instance.iter().all(|args| args.iter().map(|e| print_expr(e)).collect::<BTreeSet<_>>().len() == args.len());
            match kinds.into_iter().collect::<Vec<_>>()[..] {
                [Some(kind)] if distinct && kind != "Sound" => Slot::Objects(kind.to_string()),
                _ => return Err(no_skeleton(format!("argument {} of {} varies irregularly", j + 1, verbs[j]))),
            }
        };
        slots.push(slot);
    }
    let kinds: BTreeSet<&String> = slots.iter().filter_map(|s| if let Slot::Objects(k) = s { Some(k) } else { None }).collect();
    let [kind] = kinds.into_iter().collect::<Vec<_>>()[..] else {
        return Err(no_skeleton("the pattern does not walk through exactly one kind of object".into()));
    };
    let set_type = TypeRegistry::set_type_for(kind);
    let set_name = set_type.to_ascii_lowercase();
    report.rule("generalize", format!("{kind} constants -> {set_type} {set_name}"));
    let counts_aloud = slots.contains(&Slot::Numerals);
    if counts_aloud {
        report.rule("generalize", "numeral constants -> const intList numlist");
    }

    // Attributes kept: constants that stay action arguments.
    let kept: Vec<&Expr> = slots.iter().filter_map(|s| if let Slot::Const(e) = s { Some(e) } else { None }).collect();
    let mut text = format!("@level(E1)\n@domain({domain})\nclass {}{} {{\nprivate:\n", concept_of(&instances[0].name, &domain), capitalized(&domain));
    if counts_aloud {
        text.push_str("    const intList numlist;\n");
    }
    let mut kept_names = BTreeSet::new();
    for e in &kept {
        if let Expr::Name(n) = e {
            let Some(a) = instances[0].attribute(n) else { continue };
            if kept_names.insert(n.clone()) {
                let _ = writeln!(text, "    const {} {n};", a.type_ref);
            }
        }
    }
    let _ = write!(text, "    {actor_type} {actor_var};\n    {set_type} {set_name};\n    int result;\n");
    report.rule("synthesize_result", "int result counts the copies");

    let iteration = |step: &str| -> String {
        let mut s = String::new();
        for (j, slot) in slots.iter().enumerate() {
            let arg = match slot {
                Slot::Const(e) => print_expr(e),
                Slot::Objects(_) => format!("{set_name}.{step}()"),
                Slot::Numerals => format!("numlist.{step}()"),
            };
            let _ = writeln!(s, "{{i}}{actor_var}.{}({arg});", verbs[j]);
        }
        s.push_str("{i}result++;\n");
        s
    };
    let body_first = iteration("First").replace("{i}", "        ");
    let body_next = iteration("Next").replace("{i}", "            ");
    let _ = write!(
        text,
        "protected:\n    int Counting() {{\n        result = 0;\n{body_first}        while ({set_name}.Next() != NULL) {{\n{body_next}        }}\n        return result;\n    }}\n}}\n"
    );
    if scripts.iter().any(|(_, restated)| *restated) {
        report.rule("return_result", "restated final word becomes `return result`");
    }
    report.rule("protect", "Counting is protected");

    // Everything not carried over.
    let mut reported = BTreeSet::new();
    for u in instances {
        for a in &u.attributes {
            let used = a.name == actor
                || kept_names.contains(&a.name)
                || (a.type_ref.as_str() == kind)
                || (counts_aloud && a.type_ref.as_str() == "Sound");
            if !used && reported.insert(a.name.clone()) {
                report.drop(a.name.clone(), "occasional, never an action argument");
            }
        }
        for s in u.implicit_operation().map(|o| o.body.as_slice()).unwrap_or_default() {
            if let Statement::SetupPredicate { name, args } = s {
                let key = format!("{name}({})", args.join(", "));
                if !reported.insert(key.clone()) {
                    continue;
                }
                let about_dropped = args.iter().any(|x| u.attribute(x).is_some_and(|a| {
                    a.name != actor && !kept_names.contains(&a.name) && a.type_ref.as_str() != kind
                }));
                report.drop(key, if about_dropped { "occasional, over a dropped constant" } else { "generalized away with the objects" });
            }
        }
    }

    let unit = synthesize(&text).map_err(RedescribeError::NoCommonSkeleton)?.remove(0);
    report.outputs.push(unit.name.clone());
    Ok((unit, report))
}
