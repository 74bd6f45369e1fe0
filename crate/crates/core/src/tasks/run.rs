use super::{check_principles, Outcome, Task, TaskId, TaskParams};
use crate::fixtures;
use crate::interp::{
    execute_with, numeral_value, pointed_entities, said_tokens, Event, ExecError, ExecOptions, ExecResult, Trace, TraceEvent,
    Value, World,
};
use crate::ir::{ConceptUnit, Level, UnitKind, IMPLICIT_OP};
use std::collections::BTreeSet;

/// Everything a task run produced, for display and for the acceptance suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskRun {
    pub outcome: Outcome,
    /// Events of every execution the protocol made, renumbered in order.
    pub trace: Trace,
    /// Value of the last execution, if any ran to completion.
    pub value: Option<Value>,
}

pub fn run_task(task: &Task, kb: &[ConceptUnit], level: Level) -> Outcome {
    run_task_with(task, kb, level, &ExecOptions::default()).outcome
}

/// Run the task's protocol against the units of `kb` at `level`.
pub fn run_task_with(task: &Task, kb: &[ConceptUnit], level: Level, opts: &ExecOptions) -> TaskRun {
    let scope = scoped(kb, level);
    let mut log = Log::default();
    let outcome = match protocol(task, &scope, level, opts, &mut log) {
        Ok(()) => Outcome::Solved,
        Err(o) => o,
    };
    TaskRun { outcome, trace: log.trace, value: log.value }
}

#[derive(Default)]
struct Log {
    trace: Trace,
    value: Option<Value>,
}

impl Log {
    fn push(&mut self, r: &ExecResult) {
        let base = self.trace.len();
        self.trace.extend(r.trace.iter().enumerate().map(|(i, e)| TraceEvent { seq: base + i + 1, event: e.event.clone() }));
        self.value = Some(r.value.clone());
    }
}

/// Units of one level, plus the shared constants.
pub(crate) fn scoped(kb: &[ConceptUnit], level: Level) -> Vec<ConceptUnit> {
    kb.iter().filter(|u| u.level == level || u.is_globals()).cloned().collect()
}

fn map_err(e: ExecError) -> Outcome {
    match e {
        ExecError::AccessViolation { .. } | ExecError::UnknownOperation { .. } | ExecError::UnknownUnit(_) => Outcome::Inaccessible,
        other => Outcome::Failed(format!("{}: {other}", other.kind())),
    }
}

fn fail(reason: impl Into<String>) -> Outcome {
    Outcome::Failed(reason.into())
}

/// Pick the unit offering `op` with `arity` parameters, preferring the
/// caller's domain and then kb order.
fn resolve<'k>(kb: &'k [ConceptUnit], op: &str, arity: usize, domain: &str) -> Option<&'k ConceptUnit> {
    let offers = |u: &&ConceptUnit| u.kind == UnitKind::Class && u.operations.iter().any(|o| o.name == op && o.params.len() == arity);
    kb.iter().filter(offers).find(|u| u.domain == domain).or_else(|| kb.iter().find(offers))
}

/// Ask the knowledge to count the focus of `world`.
///
/// At level I the only way to count is to replay a memorized instance of
/// the same domain; the first whose setup holds is used.
pub(crate) fn count(kb: &[ConceptUnit], level: Level, world: &World, domain: &str, opts: &ExecOptions) -> Result<ExecResult, Outcome> {
    if level == Level::I {
        let mut mismatch = None;
        for inst in kb.iter().filter(|u| u.kind == UnitKind::Instance && u.domain == domain) {
            match execute_with(kb, inst, IMPLICIT_OP, &[], world, domain, opts) {
                Ok(r) => return Ok(r),
                Err(e @ ExecError::SetupMismatch(_)) => mismatch = mismatch.or(Some(e)),
                Err(e) => return Err(map_err(e)),
            }
        }
        return Err(mismatch.map_or(Outcome::Inaccessible, map_err));
    }
    let unit = resolve(kb, "Counting", 0, domain).ok_or(Outcome::Inaccessible)?;
    execute_with(kb, unit, "Counting", &[], world, domain, opts).map_err(map_err)
}

/// The number a counting run arrived at: its integer value, else the last
/// numeral it said.
pub(crate) fn answer_of(r: &ExecResult, opts: &ExecOptions) -> Option<i64> {
    match r.value {
        Value::Int(n) => Some(n),
        _ => said_tokens(&r.trace).last().and_then(|t| numeral_value(&opts.numerals, t)),
    }
}

/// A counting run succeeds when it obeys the principles and gets it right.
fn judge_count(r: &ExecResult, world: &World, opts: &ExecOptions) -> Result<(), Outcome> {
    let n = world.focus_members().len() as i64;
    let p = check_principles(&r.trace, world, &opts.numerals);
    if !p.one_to_one {
        return Err(fail("objects not pointed to exactly once"));
    }
    if !p.stable_order {
        return Err(fail("numerals out of order"));
    }
    match answer_of(r, opts) {
        Some(a) if a == n => Ok(()),
        Some(a) => Err(fail(format!("answered {a}, expected {n}"))),
        None => Err(fail("no answer")),
    }
}

fn took_away(trace: &[TraceEvent]) -> Vec<String> {
    trace
        .iter()
        .filter_map(|e| match &e.event {
            Event::TookAway(id) => Some(id.clone()),
            _ => None,
        })
        .collect()
}

fn fetch(kb: &[ConceptUnit], task: &Task, world: &World, container: &str, k: i64, opts: &ExecOptions, log: &mut Log) -> Result<Vec<String>, Outcome> {
    let unit = resolve(kb, "FetchObjects", 2, &task.caller_domain).ok_or(Outcome::Inaccessible)?;
    let args = [Value::Token(container.to_string()), Value::Int(k)];
    let r = execute_with(kb, unit, "FetchObjects", &args, world, &task.caller_domain, opts).map_err(map_err)?;
    log.push(&r);
    if said_tokens(&r.trace).contains(&"Error") {
        return Err(fail("said Error"));
    }
    let taken = took_away(&r.trace);
    let source: BTreeSet<&String> = world.containers.get(container).into_iter().flatten().collect();
    let distinct: BTreeSet<&String> = taken.iter().collect();
    if taken.len() as i64 != k || distinct.len() != taken.len() || !taken.iter().all(|t| source.contains(t)) {
        return Err(fail(format!("took {} object(s), expected {k} distinct from `{container}`", taken.len())));
    }
    Ok(taken)
}

fn protocol(task: &Task, kb: &[ConceptUnit], level: Level, opts: &ExecOptions, log: &mut Log) -> Result<(), Outcome> {
    let domain = task.caller_domain.as_str();
    match task.id {
        TaskId::T1 | TaskId::T2 | TaskId::T3 | TaskId::T4 => {
            let r = count(kb, level, &task.world, domain, opts)?;
            log.push(&r);
            judge_count(&r, &task.world, opts)
        }
        TaskId::T5 => {
            let k = task.query.args.get(1).and_then(Value::as_int).unwrap_or(super::FETCH_COUNT);
            let container = task.query.args[0].to_string();
            fetch(kb, task, &task.world, &container, k, opts, log).map(|_| ())
        }
        TaskId::T6 => {
            let (a, b) = TaskParams::default().compare;
            let first = fetch(kb, task, &task.world, "pile", a, opts, log)?;
            let mut after = task.world.clone();
            for id in &first {
                after.take_away(id);
            }
            let second = fetch(kb, task, &after, "pile", b, opts, log)?;
            // Count each fetched heap and compare the results.
            let mut counted = Vec::new();
            for (name, ids) in [("fetched_a", first), ("fetched_b", second)] {
                let mut w = after.clone();
                w.containers.insert(name.to_string(), ids);
                w.focus = Some(name.to_string());
                let r = count(kb, level, &w, domain, opts)?;
                log.push(&r);
                counted.push(answer_of(&r, opts).ok_or_else(|| fail("no answer"))?);
            }
            if counted[0] == a && counted[1] == b && (counted[1] > counted[0]) == (b > a) {
                Ok(())
            } else {
                Err(fail(format!("counted {} and {}, expected {a} and {b}", counted[0], counted[1])))
            }
        }
        TaskId::T7 => {
            let mut units = kb.to_vec();
            let driver = fixtures::load_one(fixtures::BUS_SEATS);
            if !units.iter().any(|u| u.name == driver.name) {
                units.push(driver.clone());
            }
            let r = execute_with(&units, &driver, &task.query.op, &task.query.args, &task.world, domain, opts).map_err(map_err)?;
            log.push(&r);
            let seats = task.world.known_sums.get("Seats_of_Car").copied();
            match (r.value.as_int(), seats) {
                (Some(v), Some(s)) if v == s => Ok(()),
                (v, _) => Err(fail(format!("answered {}", v.map_or("nothing".into(), |v| v.to_string())))),
            }
        }
        TaskId::T8 => {
            let r1 = count(kb, level, &task.world, domain, opts)?;
            log.push(&r1);
            judge_count(&r1, &task.world, opts)?;
            let n = answer_of(&r1, opts).unwrap_or_default();
            let focus = task.world.focus.clone().unwrap_or_default();
            let mut moved = r1.world.clone();
            moved.known_sums.insert(focus.clone(), n);
            moved.arrangements.insert(focus, crate::interp::Arrangement::Circle);
            let r2 = count(kb, level, &moved, domain, opts)?;
            log.push(&r2);
            if !pointed_entities(&r2.trace).is_empty() {
                return Err(fail("counted again after the rearrangement"));
            }
            match answer_of(&r2, opts) {
                Some(m) if m == n => Ok(()),
                m => Err(fail(format!("recalled {m:?}, expected {n}"))),
            }
        }
        TaskId::T9 => {
            let unit = resolve(kb, "OneToOneMap", 2, domain).ok_or(Outcome::Inaccessible)?;
            let r = execute_with(kb, unit, "OneToOneMap", &task.query.args, &task.world, domain, opts).map_err(map_err)?;
            log.push(&r);
            let len = |c: &str| task.world.containers.get(c).map_or(0, Vec::len);
            let (h1, h2) = (len("heap1"), len("heap2"));
            let expected = if h1 > h2 { 1 } else { 2 };
            let said = said_tokens(&r.trace).len();
            if said >= h1.min(h2) {
                return Err(fail(format!("said {said} numerals")));
            }
            match r.value.as_int() {
                Some(v) if v == expected => Ok(()),
                v => Err(fail(format!("answered {v:?}, expected {expected}"))),
            }
        }
    }
}
