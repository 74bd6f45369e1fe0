use super::{Event, ExecError, Value, World};
use crate::ir::{AtomicAction, CollectionOp, Expr, Literal, Verb};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Implicit cursor of an ordered collection variable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Cursor {
    /// `None` before the first element has been visited.
    pos: Option<usize>,
    /// Loop iteration in which the cursor last moved.
    epoch: Option<u64>,
}

/// Bindings for evaluating a primitive on its own.
#[derive(Debug, Clone)]
pub struct Env {
    pub bindings: BTreeMap<String, Value>,
    pub cursors: BTreeMap<String, Cursor>,
    pub rng: ChaCha8Rng,
    /// Current loop iteration; `None` outside loops.
    pub epoch: Option<u64>,
}

impl Env {
    pub fn new(seed: u64) -> Self {
        Env { bindings: BTreeMap::new(), cursors: BTreeMap::new(), rng: ChaCha8Rng::seed_from_u64(seed), epoch: None }
    }

    pub fn bind(&mut self, name: &str, value: Value) -> &mut Self {
        self.bindings.insert(name.to_string(), value);
        self
    }
}

/// Evaluate one primitive whose arguments are names or literals.
///
/// ```
/// use rr_core::interp::{eval_primitive, Env, Event, Value, World};
/// use rr_core::ir::{AtomicAction, Expr, Verb};
///
/// let mut env = Env::new(0);
/// env.bind("ME", Value::Entity("ME".into())).bind("ONE", Value::Token("ONE".into()));
/// let say = AtomicAction::verb("ME", Verb::Say, Expr::name("ONE"));
/// let (event, value) = eval_primitive(&say, &mut env, &mut World::new(0)).unwrap();
/// assert_eq!(event, Some(Event::Said("ONE".into())));
/// assert_eq!(value, Value::Nothing);
/// ```
pub fn eval_primitive(action: &AtomicAction, env: &mut Env, world: &mut World) -> Result<(Option<Event>, Value), ExecError> {
    let simple = |env: &Env, e: &Expr| -> Result<Value, ExecError> {
        match e {
            Expr::Name(n) => env.bindings.get(n).cloned().ok_or_else(|| ExecError::UnboundName(n.clone())),
            Expr::Null => Ok(Value::Nothing),
            Expr::Lit(l) => Ok(literal_value(l)),
            _ => Err(ExecError::TypeMismatch("primitive arguments must be names or literals".into())),
        }
    };
    match action {
        AtomicAction::Verb { actor, verb, arg } => {
            let actor_v = env.bindings.get(actor).cloned().ok_or_else(|| ExecError::UnboundName(actor.clone()))?;
            let arg = simple(env, arg)?;
            let event = verb_event(*verb, actor, &actor_v, &arg, world)?;
            Ok((Some(event), Value::Nothing))
        }
        AtomicAction::Collection { collection, op, item } => {
            let item = item.as_ref().map(|i| simple(env, i)).transpose()?;
            let Env { bindings, cursors, rng, epoch } = env;
            let coll = bindings.get_mut(collection).ok_or_else(|| ExecError::UnboundName(collection.clone()))?;
            let cursor = cursors.entry(collection.clone()).or_default();
            let v = collection_op(collection, *op, coll, cursor, item, rng, *epoch)?;
            Ok((None, v))
        }
    }
}

/// Literal as a value; symbols and strings are tokens.
pub(crate) fn literal_value(l: &Literal) -> Value {
    match l {
        Literal::Int(v) => Value::Int(*v),
        Literal::Bool(b) => Value::Bool(*b),
        Literal::Str(s) | Literal::Symbol(s) => Value::Token(s.clone()),
    }
}

pub(crate) fn verb_event(verb: Verb, actor: &str, actor_v: &Value, arg: &Value, world: &mut World) -> Result<Event, ExecError> {
    if !matches!(actor_v, Value::Entity(_) | Value::Token(_)) {
        return Err(ExecError::UnboundName(actor.to_string()));
    }
    let mismatch = |want: &str| ExecError::TypeMismatch(format!("{} needs {want}, got {}", verb.keyword(), arg.type_name()));
    match verb {
        Verb::Move => Ok(Event::Moved(arg.to_string())),
        Verb::PointTo => match arg {
            Value::Entity(id) => Ok(Event::PointedTo(id.clone())),
            _ => Err(mismatch("an entity")),
        },
        Verb::Say => match arg {
            Value::Token(t) => Ok(Event::Said(t.clone())),
            Value::Int(v) => Ok(Event::Said(v.to_string())),
            _ => Err(mismatch("a token")),
        },
        Verb::TakeAway => match arg {
            Value::Entity(id) => {
                world.take_away(id);
                Ok(Event::TookAway(id.clone()))
            }
            _ => Err(mismatch("an entity")),
        },
    }
}

pub(crate) fn coll_len(v: &Value) -> Option<usize> {
    match v {
        Value::EntityList(items) | Value::TokenList(items) => Some(items.len()),
        _ => None,
    }
}

pub(crate) fn coll_get(v: &Value, i: usize) -> Option<Value> {
    match v {
        Value::EntityList(items) => items.get(i).cloned().map(Value::Entity),
        Value::TokenList(items) => items.get(i).cloned().map(Value::Token),
        _ => None,
    }
}

pub(crate) fn collection_op(
    name: &str,
    op: CollectionOp,
    coll: &mut Value,
    cursor: &mut Cursor,
    item: Option<Value>,
    rng: &mut ChaCha8Rng,
    epoch: Option<u64>,
) -> Result<Value, ExecError> {
    let Some(len) = coll_len(coll) else {
        return Err(ExecError::TypeMismatch(format!("`{name}` is a {}, not a collection", coll.type_name())));
    };
    let empty = || ExecError::EmptyCollection { op: op.keyword().to_string(), collection: name.to_string() };
    match op {
        CollectionOp::Empty => Ok(Value::Bool(len == 0)),
        CollectionOp::SelectOneRandom => {
            if len == 0 {
                return Err(empty());
            }
            let i = rng.gen_range(0..len);
            Ok(coll_get(coll, i).unwrap_or(Value::Nothing))
        }
        CollectionOp::First => {
            if len == 0 {
                return Err(empty());
            }
            *cursor = Cursor { pos: Some(0), epoch };
            Ok(coll_get(coll, 0).unwrap_or(Value::Nothing))
        }
        CollectionOp::Next => {
            // Within one loop iteration the cursor moves at most once.
            if epoch.is_none() || cursor.epoch != epoch {
                let next = cursor.pos.map_or(0, |p| p + 1).min(len);
                *cursor = Cursor { pos: Some(next), epoch };
            }
            Ok(cursor.pos.and_then(|p| coll_get(coll, p)).unwrap_or(Value::Nothing))
        }
        CollectionOp::Append => {
            match (&mut *coll, item) {
                (Value::EntityList(items), Some(Value::Entity(id))) => items.push(id),
                (Value::TokenList(items), Some(Value::Token(t))) => items.push(t),
                (Value::EntityList(items), Some(Value::Token(t))) if items.is_empty() => *coll = Value::TokenList(vec![t]),
                (_, other) => {
                    let got = other.map_or("nothing", |v| v.type_name());
                    return Err(ExecError::TypeMismatch(format!("cannot append {got} to `{name}`")));
                }
            }
            Ok(Value::Nothing)
        }
        CollectionOp::Delete => {
            match (&mut *coll, item) {
                (Value::EntityList(items), Some(Value::Entity(id))) | (Value::TokenList(items), Some(Value::Token(id))) => {
                    if let Some(i) = items.iter().position(|x| *x == id) {
                        items.remove(i);
                    }
                }
                (_, other) => {
                    let got = other.map_or("nothing", |v| v.type_name());
                    return Err(ExecError::TypeMismatch(format!("cannot delete {got} from `{name}`")));
                }
            }
            Ok(Value::Nothing)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Value {
        Value::EntityList(vec!["a".into(), "b".into(), "c".into()])
    }

    #[test]
    fn select_is_deterministic_per_seed() {
        let pick = || {
            let mut env = Env::new(0);
            env.bind("s", abc());
            eval_primitive(&AtomicAction::coll("s", CollectionOp::SelectOneRandom, None), &mut env, &mut World::new(0)).unwrap().1
        };
        assert_eq!(pick(), pick());
    }

    #[test]
    fn delete_then_empty() {
        let mut env = Env::new(0);
        env.bind("s", Value::EntityList(vec!["a".into()])).bind("a", Value::Entity("a".into()));
        let mut w = World::new(0);
        eval_primitive(&AtomicAction::coll("s", CollectionOp::Delete, Some(Expr::name("a"))), &mut env, &mut w).unwrap();
        let (ev, v) = eval_primitive(&AtomicAction::coll("s", CollectionOp::Empty, None), &mut env, &mut w).unwrap();
        assert_eq!((ev, v), (None, Value::Bool(true)));
    }

    #[test]
    fn first_on_empty_fails() {
        let mut env = Env::new(0);
        env.bind("s", Value::EntityList(vec![]));
        let err = eval_primitive(&AtomicAction::coll("s", CollectionOp::First, None), &mut env, &mut World::new(0)).unwrap_err();
        assert!(matches!(err, ExecError::EmptyCollection { .. }));
    }

    #[test]
    fn next_moves_once_per_iteration_and_ends_with_nothing() {
        let mut c = Cursor::default();
        let mut coll = abc();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut next = |c: &mut Cursor, epoch| collection_op("s", CollectionOp::Next, &mut coll, c, None, &mut rng, epoch).unwrap();
        assert_eq!(next(&mut c, None), Value::Entity("a".into()));
        assert_eq!(next(&mut c, Some(1)), Value::Entity("b".into()));
        assert_eq!(next(&mut c, Some(1)), Value::Entity("b".into()));
        assert_eq!(next(&mut c, Some(2)), Value::Entity("c".into()));
        assert_eq!(next(&mut c, None), Value::Nothing);
        assert_eq!(next(&mut c, None), Value::Nothing);
    }
}
