use crate::ir::{AtomicAction, BinOp, CollectionOp, Expr, Statement, Verb};

/// Longest period considered.
pub const MAX_PERIOD: usize = 5;

/// A repeated region: `k` copies of a `period`-long verb pattern from `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub start: usize,
    pub period: usize,
    pub k: usize,
}

impl Region {
    pub fn len(&self) -> usize {
        self.period * self.k
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Actor and verb of a plain action statement.
fn shape(s: &Statement) -> Option<(&str, Verb)> {
    match s {
        Statement::Action(AtomicAction::Verb { actor, verb, arg }) if matches!(arg, Expr::Name(_) | Expr::Lit(_)) => {
            Some((actor.as_str(), *verb))
        }
        _ => None,
    }
}

pub(crate) fn arg_of(s: &Statement) -> &Expr {
    match s {
        Statement::Action(AtomicAction::Verb { arg, .. }) => arg,
        _ => unreachable!("checked by shape"),
    }
}

/// Number of consecutive copies of the pattern at `start` (at least 1 when
/// the pattern itself is made of actions).
fn copies(body: &[Statement], start: usize, period: usize) -> usize {
    if start + period > body.len() || body[start..start + period].iter().any(|s| shape(s).is_none()) {
        return 0;
    }
    let mut k = 1;
    while start + (k + 1) * period <= body.len()
        && (0..period).all(|j| shape(&body[start + k * period + j]) == shape(&body[start + j]))
    {
        k += 1;
    }
    k
}

/// Slots whose argument is not the same in every copy.
pub(crate) fn varying_slots(body: &[Statement], r: Region) -> Vec<usize> {
    (0..r.period)
        .filter(|&j| {
            let first = arg_of(&body[r.start + j]);
            (1..r.k).any(|i| arg_of(&body[r.start + i * r.period + j]) != first)
        })
        .collect()
}

/// The best rollable region: most statements covered, then shortest
/// period, then earliest start. Needs two copies and a varying slot.
pub fn find_region(body: &[Statement]) -> Option<Region> {
    let mut best: Option<Region> = None;
    for period in 1..=MAX_PERIOD {
        for start in 0..body.len() {
            let k = copies(body, start, period);
            if k < 2 {
                continue;
            }
            let r = Region { start, period, k };
            if varying_slots(body, r).is_empty() {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => (r.len(), std::cmp::Reverse(r.period), std::cmp::Reverse(r.start))
                    > (b.len(), std::cmp::Reverse(b.period), std::cmp::Reverse(b.start)),
            };
            if better {
                best = Some(r);
            }
        }
    }
    best
}

/// Replace the best repeated region of a straight-line body by a loop over
/// the sequences its varying arguments run through. Bodies that are not
/// straight-line, or have no such region, come back unchanged.
///
/// ```
/// use rr_core::ir::{AtomicAction, Expr, Statement, Verb};
/// use rr_core::redescribe::loop_roll;
///
/// let point = |a: &str| Statement::action(AtomicAction::verb("ME", Verb::PointTo, Expr::name(a)));
/// let body = vec![point("A1"), point("A2"), point("A3")];
/// let rolled = loop_roll(&body);
/// assert!(rolled.iter().any(|s| matches!(s, Statement::While { .. })));
/// assert_eq!(loop_roll(&rolled), rolled);
/// ```
pub fn loop_roll(body: &[Statement]) -> Vec<Statement> {
    if !body.iter().all(Statement::is_straight_line) {
        return body.to_vec();
    }
    let Some(r) = find_region(body) else {
        return body.to_vec();
    };
    let slots = varying_slots(body, r);
    let seq = |i: usize| format!("seq_{i}");
    let item = |i: usize| format!("item_{i}");
    let mut out: Vec<Statement> = body[..r.start].to_vec();
    for (i, &j) in slots.iter().enumerate() {
        let values = (0..r.k).map(|c| arg_of(&body[r.start + c * r.period + j]).clone()).collect();
        out.push(Statement::local(seq(i), "List"));
        out.push(Statement::assign(seq(i), Expr::List(values)));
    }
    for i in 0..slots.len() {
        out.push(Statement::local(item(i), "Object"));
        out.push(Statement::assign(item(i), Expr::prim(AtomicAction::coll(seq(i), CollectionOp::First, None))));
    }
    let mut loop_body: Vec<Statement> = (0..r.period)
        .map(|j| match slots.iter().position(|&s| s == j) {
            Some(i) => {
                let Some((actor, verb)) = shape(&body[r.start + j]) else { unreachable!("region holds actions") };
                Statement::action(AtomicAction::verb(actor, verb, Expr::name(item(i))))
            }
            None => body[r.start + j].clone(),
        })
        .collect();
    for i in 0..slots.len() {
        loop_body.push(Statement::assign(item(i), Expr::prim(AtomicAction::coll(seq(i), CollectionOp::Next, None))));
    }
    out.push(Statement::While { cond: Expr::bin(BinOp::Ne, Expr::name(item(0)), Expr::Null), body: loop_body });
    out.extend_from_slice(&body[r.start + r.len()..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn say(t: &str) -> Statement {
        Statement::action(AtomicAction::verb("ME", Verb::Say, Expr::name(t)))
    }

    #[test]
    fn single_statement_is_unchanged() {
        assert_eq!(loop_roll(&[say("ONE")]), vec![say("ONE")]);
    }

    #[test]
    fn repeated_identical_statements_are_not_rolled() {
        assert_eq!(find_region(&[say("ONE"), say("ONE"), say("ONE")]), None);
    }

    #[test]
    fn ties_prefer_the_shorter_period() {
        let body = [say("A"), say("B"), say("C"), say("D")];
        assert_eq!(find_region(&body), Some(Region { start: 0, period: 1, k: 4 }));
    }
}
