#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rr_core::fixtures;
use rr_core::interp::{execute, ExecError, Value};
use rr_core::ir::{check_access, Access, AtomicAction, ConceptUnit, Expr, Level, Statement, Visibility};
use rr_core::redescribe::{Region, MAX_PERIOD};
use rr_core::tasks::scene;

pub fn fixture_units() -> Vec<ConceptUnit> {
    fixtures::ALL.iter().flat_map(|(_, text)| fixtures::load(text)).collect()
}

const DOMAINS: [&str; 8] = ["apples", "pencils", "cups", "numbers", "transport", "candy", "kitchen", "music"];

/// One member use from outside the owning unit's domain.
#[derive(Debug, Clone)]
pub struct AccessCase {
    pub unit: String,
    pub level: Level,
    pub member: String,
    pub visibility: Visibility,
    pub is_operation: bool,
    pub caller_domain: String,
}

/// `n` cross-domain member uses drawn from the reference units.
pub fn access_cases(seed: u64, n: usize) -> Vec<AccessCase> {
    let units: Vec<ConceptUnit> = fixture_units().into_iter().filter(|u| !u.is_globals()).collect();
    let mut members = Vec::new();
    for u in &units {
        for a in &u.attributes {
            members.push((u.name.clone(), u.level, u.domain.clone(), a.name.clone(), a.visibility, false));
        }
        for o in u.operations.iter().filter(|o| !o.implicit) {
            members.push((u.name.clone(), u.level, u.domain.clone(), o.name.clone(), o.visibility, true));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let (unit, level, domain, member, visibility, is_operation) = members.choose(&mut rng).unwrap().clone();
            let others: Vec<&str> = DOMAINS.iter().copied().filter(|d| *d != domain).collect();
            let caller_domain = others[rng.gen_range(0..others.len())].to_string();
            AccessCase { unit, level, member, visibility, is_operation, caller_domain }
        })
        .collect()
}

/// Whether the use was refused with an access violation. Operations are
/// really executed; attributes go through the same access check the
/// interpreter applies to field reads.
pub fn violates(kb: &[ConceptUnit], case: &AccessCase) -> bool {
    let kb: Vec<ConceptUnit> = kb.iter().filter(|u| u.level == case.level || u.is_globals()).cloned().collect();
    let unit = kb.iter().find(|u| u.name == case.unit).expect("case names a reference unit");
    if !case.is_operation {
        return matches!(check_access(&case.caller_domain, "", unit, &case.member), Ok(Access::Denied(_)));
    }
    let op = unit.operations.iter().find(|o| o.name == case.member).unwrap();
    let world = scene(3, "ROOM1", "TABLE1", "apples", "APPLE", "Apple", rr_core::interp::Arrangement::Line, 0);
    let args: Vec<Value> = op.params.iter().map(|_| Value::Token("apples".into())).collect();
    matches!(execute(&kb, unit, &op.name, &args, &world, &case.caller_domain, 2000), Err(ExecError::AccessViolation { .. }))
}

fn shape(s: &Statement) -> Option<(String, String)> {
    match s {
        Statement::Action(AtomicAction::Verb { actor, verb, arg: Expr::Name(_) | Expr::Lit(_) }) => {
            Some((actor.clone(), verb.keyword().to_string()))
        }
        _ => None,
    }
}

fn arg(s: &Statement) -> &Expr {
    match s {
        Statement::Action(AtomicAction::Verb { arg, .. }) => arg,
        _ => unreachable!(),
    }
}

/// Brute force over every (period, start, k): all covered statements are
/// plain actions, copies share actor and verb slot by slot, some slot
/// changes its argument. Prefer coverage, then short period, then early start.
pub fn oracle_region(body: &[Statement]) -> Option<Region> {
    let mut cands = Vec::new();
    for period in 1..=MAX_PERIOD {
        for start in 0..body.len() {
            for k in 2..=(body.len() - start) / period {
                let ok = (0..k * period).all(|i| {
                    let s = &body[start + i];
                    shape(s).is_some() && shape(s) == shape(&body[start + i % period])
                });
                let varies = (0..period).any(|j| (1..k).any(|c| arg(&body[start + c * period + j]) != arg(&body[start + j])));
                if ok && varies {
                    cands.push((period * k, std::cmp::Reverse(period), std::cmp::Reverse(start), k));
                }
            }
        }
    }
    cands.into_iter().max().map(|(_, p, s, k)| Region { start: s.0, period: p.0, k })
}
