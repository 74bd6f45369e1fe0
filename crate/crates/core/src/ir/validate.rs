use super::{
    walk_exprs, walk_statements, AtomicAction, Binding, ConceptUnit, Expr, Level, Operation, Statement, UnitKind,
    Visibility, GLOBALS,
};
use std::collections::{BTreeSet, HashSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    LevelDiscipline,
    FriendBelowE2,
    DuplicateMember,
    DuplicateParam,
    DuplicateUnit,
    UnresolvedName,
    EmptyWhile,
    ReturnWithoutType,
    BadActionArgument,
    Cooperation,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: Rule,
    /// `Unit` or `Unit.member`.
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.location, self.rule, self.message)
    }
}

struct Checker<'a> {
    unit: &'a ConceptUnit,
    out: Vec<Diagnostic>,
}

impl Checker<'_> {
    fn report(&mut self, rule: Rule, member: Option<&str>, message: impl Into<String>) {
        let location = match member {
            Some(m) => format!("{}.{m}", self.unit.name),
            None => self.unit.name.clone(),
        };
        self.out.push(Diagnostic { rule, location, message: message.into() });
    }
}

/// Check one unit against the structural invariants and its level discipline.
/// Names that could only resolve to other units are left to [`validate_set`].
pub fn validate(unit: &ConceptUnit) -> Vec<Diagnostic> {
    let mut c = Checker { unit, out: Vec::new() };
    check_members(&mut c);
    for op in &unit.operations {
        check_operation(&mut c, op);
    }
    if !unit.friends.is_empty() && unit.level < Level::E2 {
        c.report(Rule::FriendBelowE2, None, format!("friend declarations need level E2 or above, unit is {}", unit.level));
    }
    if !unit.is_globals() {
        check_level(&mut c);
    }
    c.out
}

fn check_members(c: &mut Checker) {
    let mut seen = HashSet::new();
    let names = c.unit.attributes.iter().map(|a| a.name.as_str()).chain(c.unit.operations.iter().map(|o| o.name.as_str()));
    let dups: Vec<String> = names.filter(|n| !seen.insert(*n)).map(str::to_string).collect();
    for d in dups {
        c.report(Rule::DuplicateMember, Some(&d), "member declared more than once");
    }
}

fn check_level(c: &mut Checker) {
    let u = c.unit;
    let ops = &u.operations;
    match u.level {
        Level::I => {
            if u.kind != UnitKind::Instance {
                c.report(Rule::LevelDiscipline, None, "level I units must be instances");
            }
            for a in &u.attributes {
                if !a.is_const() {
                    c.report(Rule::LevelDiscipline, Some(&a.name), "level I attributes must be constants");
                }
                if a.visibility != Visibility::Private {
                    c.report(Rule::LevelDiscipline, Some(&a.name), "level I members must be private");
                }
            }
            for op in ops {
                if op.visibility != Visibility::Private {
                    c.report(Rule::LevelDiscipline, Some(&op.name), "level I members must be private");
                }
                if !op.params.is_empty() {
                    c.report(Rule::LevelDiscipline, Some(&op.name), "level I operations take no parameters");
                }
                if !op.body.iter().all(Statement::is_straight_line) {
                    c.report(
                        Rule::LevelDiscipline,
                        Some(&op.name),
                        "level I bodies hold only atomic actions and setup predicates",
                    );
                }
            }
        }
        Level::E1 => {
            if u.kind != UnitKind::Class {
                c.report(Rule::LevelDiscipline, None, "level E1 units must be classes");
            }
            for op in ops.iter().filter(|o| o.visibility == Visibility::Public) {
                c.report(Rule::LevelDiscipline, Some(&op.name), "level E1 operations are at most protected");
            }
            if !u.attributes.iter().any(|a| matches!(a.binding, Binding::Var(_))) {
                c.report(Rule::LevelDiscipline, None, "level E1 needs at least one variable attribute");
            }
            if !ops.iter().any(|o| contains_loop(&o.body)) {
                c.report(Rule::LevelDiscipline, None, "level E1 needs at least one loop");
            }
        }
        Level::E2 => {
            if u.kind != UnitKind::Class {
                c.report(Rule::LevelDiscipline, None, "level E2 units must be classes");
            }
            for op in ops.iter().filter(|o| o.visibility != Visibility::Public) {
                c.report(Rule::LevelDiscipline, Some(&op.name), "level E2 operations must be public");
            }
            for a in u.attributes.iter().filter(|a| a.visibility == Visibility::Public) {
                c.report(Rule::LevelDiscipline, Some(&a.name), "level E2 attributes are at most protected");
            }
            let distinct: HashSet<_> = ops.iter().map(|o| &o.name).collect();
            if distinct.len() < 2 {
                c.report(Rule::LevelDiscipline, None, "level E2 needs at least two operations");
            }
        }
        Level::E3 => {
            if u.kind != UnitKind::Class {
                c.report(Rule::LevelDiscipline, None, "level E3 units must be classes");
            }
            let private = u
                .attributes
                .iter()
                .map(|a| (&a.name, a.visibility))
                .chain(ops.iter().map(|o| (&o.name, o.visibility)))
                .filter(|(_, v)| *v != Visibility::Public)
                .map(|(n, _)| n.clone())
                .collect::<Vec<_>>();
            for n in private {
                c.report(Rule::LevelDiscipline, Some(&n), "level E3 members must be public");
            }
        }
    }
}

fn contains_loop(body: &[Statement]) -> bool {
    let mut found = false;
    walk_statements(body, &mut |s| found |= matches!(s, Statement::While { .. }));
    found
}

fn check_operation(c: &mut Checker, op: &Operation) {
    let mut params = HashSet::new();
    for p in &op.params {
        if !params.insert(p.name.as_str()) {
            c.report(Rule::DuplicateParam, Some(&op.name), format!("parameter `{}` repeated", p.name));
        }
    }
    let mut scope: HashSet<&str> = params;
    scope.extend(c.unit.attributes.iter().map(|a| a.name.as_str()));
    scope.extend(c.unit.friends.iter().map(String::as_str));
    walk_statements(&op.body, &mut |s| {
        if let Statement::LocalDecl { name, .. } = s {
            scope.insert(name);
        }
    });

    let mut issues: Vec<(Rule, String)> = Vec::new();
    walk_statements(&op.body, &mut |s| {
        match s {
            Statement::While { body, .. } if body.is_empty() => {
                issues.push((Rule::EmptyWhile, "while body is empty".into()));
            }
            Statement::Return(Some(_)) if op.returns.is_none() => {
                issues.push((Rule::ReturnWithoutType, "value returned from an operation without a return type".into()));
            }
            Statement::SetupPredicate { args, .. } => {
                for a in args.iter().filter(|a| !scope.contains(a.as_str())) {
                    issues.push((Rule::UnresolvedName, format!("setup predicate names unknown constant `{a}`")));
                }
            }
            Statement::Action(a) => check_action(a, &scope, &mut issues),
            Statement::Assign { target, .. } => {
                if let Expr::Name(n) = target {
                    if !scope.contains(n.as_str()) {
                        issues.push((Rule::UnresolvedName, format!("assignment to unknown name `{n}`")));
                    }
                }
            }
            _ => {}
        }
        walk_exprs(s, &mut |e| match e {
            Expr::Prim(a) => check_action(a, &scope, &mut issues),
            Expr::Name(n) if !scope.contains(n.as_str()) && !is_deferred(s, n) => {
                issues.push((Rule::UnresolvedName, format!("unknown name `{n}`")));
            }
            _ => {}
        });
    });
    for (rule, msg) in issues {
        c.report(rule, Some(&op.name), msg);
    }
}

/// A bare name used as a field base may denote another unit.
fn is_deferred(stmt: &Statement, name: &str) -> bool {
    let mut base = false;
    walk_exprs(stmt, &mut |e| {
        if let Expr::Field(b, _) = e {
            if matches!(b.as_ref(), Expr::Name(n) if n == name) {
                base = true;
            }
        }
    });
    if let Statement::Assign { target: Expr::Field(b, _), .. } = stmt {
        if matches!(b.as_ref(), Expr::Name(n) if n == name) {
            base = true;
        }
    }
    base
}

fn check_action(a: &AtomicAction, scope: &HashSet<&str>, issues: &mut Vec<(Rule, String)>) {
    match a {
        AtomicAction::Verb { actor, verb, arg } => {
            if !scope.contains(actor.as_str()) {
                issues.push((Rule::UnresolvedName, format!("unknown actor `{actor}`")));
            }
            if matches!(arg, Expr::List(_) | Expr::Null) {
                issues.push((Rule::BadActionArgument, format!("{} takes a single entity or token", verb.keyword())));
            }
        }
        AtomicAction::Collection { collection, op, item } => {
            if !scope.contains(collection.as_str()) {
                issues.push((Rule::UnresolvedName, format!("unknown collection `{collection}`")));
            }
            if op.takes_item() != item.is_some() {
                issues.push((Rule::BadActionArgument, format!("wrong argument count for {}", op.keyword())));
            }
        }
    }
}

/// Names a unit refers to that are not its own members: friends, call
/// targets, field bases and types.
fn external_refs(unit: &ConceptUnit) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = unit.friends.iter().cloned().collect();
    for a in &unit.attributes {
        out.insert(a.type_ref.0.clone());
    }
    for op in &unit.operations {
        let mut local: HashSet<&str> = op.params.iter().map(|p| p.name.as_str()).collect();
        for p in &op.params {
            out.insert(p.type_ref.0.clone());
        }
        walk_statements(&op.body, &mut |s| {
            if let Statement::LocalDecl { name, type_ref } = s {
                local.insert(name);
                out.insert(type_ref.0.clone());
            }
        });
        let is_member = |n: &str| local.contains(n) || unit.attribute(n).is_some() || unit.friends.iter().any(|f| f == n);
        walk_statements(&op.body, &mut |s| {
            if let Statement::Call { target: Some(t), .. } = s {
                if !is_member(t) {
                    out.insert(t.clone());
                }
            }
            let mut visit = |e: &Expr| match e {
                Expr::Call { target: Some(t), .. } if !is_member(t) => {
                    out.insert(t.clone());
                }
                Expr::Field(b, _) => {
                    if let Expr::Name(n) = b.as_ref() {
                        if !is_member(n) {
                            out.insert(n.clone());
                        }
                    }
                }
                _ => {}
            };
            walk_exprs(s, &mut visit);
            if let Statement::Assign { target, .. } = s {
                visit(target);
            }
        });
    }
    out
}

/// Validate a set of units together: per-unit checks, key uniqueness,
/// cross-unit references, friends, and E3 cooperation.
pub fn validate_set(units: &[ConceptUnit]) -> Vec<Diagnostic> {
    let mut out: Vec<Diagnostic> = units.iter().flat_map(validate).collect();
    let mut keys = HashSet::new();
    for u in units {
        if !keys.insert((u.name.as_str(), u.level)) {
            out.push(Diagnostic {
                rule: Rule::DuplicateUnit,
                location: u.name.clone(),
                message: format!("two units named `{}` at level {}", u.name, u.level),
            });
        }
    }
    let names: HashSet<&str> = units.iter().map(|u| u.name.as_str()).collect();
    let global_attrs: HashSet<&str> =
        units.iter().filter(|u| u.name == GLOBALS).flat_map(|u| u.attributes.iter().map(|a| a.name.as_str())).collect();
    let refs: Vec<BTreeSet<String>> = units.iter().map(external_refs).collect();
    for (u, r) in units.iter().zip(&refs) {
        for f in &u.friends {
            if !names.contains(f.as_str()) && !global_attrs.contains(f.as_str()) {
                out.push(Diagnostic {
                    rule: Rule::UnresolvedName,
                    location: u.name.clone(),
                    message: format!("friend `{f}` is neither a unit nor a global"),
                });
            }
        }
        // Call targets and field bases must be units; types are nominal tags.
        for t in r.iter().filter(|t| is_value_reference(u, t)) {
            if !names.contains(t.as_str()) {
                out.push(Diagnostic {
                    rule: Rule::UnresolvedName,
                    location: u.name.clone(),
                    message: format!("reference to unknown unit `{t}`"),
                });
            }
        }
        if u.level == Level::E3 {
            let cooperates = units.iter().zip(&refs).any(|(other, other_refs)| {
                other.name != u.name && (r.contains(&other.name) || other_refs.contains(&u.name))
            });
            if !cooperates {
                out.push(Diagnostic {
                    rule: Rule::Cooperation,
                    location: u.name.clone(),
                    message: "an E3 unit must cooperate with at least one other unit".into(),
                });
            }
        }
    }
    out
}

/// True if `name` is used as a call target or field base (not only as a type).
fn is_value_reference(unit: &ConceptUnit, name: &str) -> bool {
    let mut hit = false;
    for op in &unit.operations {
        walk_statements(&op.body, &mut |s| {
            if let Statement::Call { target: Some(t), .. } = s {
                hit |= t == name;
            }
            let mut visit = |e: &Expr| match e {
                Expr::Call { target: Some(t), .. } => hit |= t == name,
                Expr::Field(b, _) => hit |= matches!(b.as_ref(), Expr::Name(n) if n == name),
                _ => {}
            };
            walk_exprs(s, &mut visit);
            if let Statement::Assign { target, .. } = s {
                visit(target);
            }
        });
    }
    hit && !unit.operations.iter().any(|o| {
        o.params.iter().any(|p| p.name == name) || {
            let mut local = false;
            walk_statements(&o.body, &mut |s| {
                local |= matches!(s, Statement::LocalDecl { name: n, .. } if n == name)
            });
            local
        }
    }) && unit.attribute(name).is_none()
}
