use super::prim::{collection_op, literal_value, verb_event, Cursor};
use super::{Event, ExecError, ExecOptions, ExecResult, TraceEvent, Value, World};
use crate::ir::{
    check_access, Access, AtomicAction, BinOp, Binding, CollectionShape, ConceptUnit, ElementConstraint, Expr,
    Literal, Operation, Statement, GLOBALS,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Name of the class whose objects wrap world containers.
const SET_CLASS: &str = "Set";

/// Run `op` of `target` with the default numerals and type registry.
pub fn execute(
    kb: &[ConceptUnit],
    target: &ConceptUnit,
    op: &str,
    args: &[Value],
    world: &World,
    caller_domain: &str,
    step_limit: usize,
) -> Result<ExecResult, ExecError> {
    let opts = ExecOptions { step_limit, ..ExecOptions::default() };
    execute_with(kb, target, op, args, world, caller_domain, &opts)
}

pub fn execute_with(
    kb: &[ConceptUnit],
    target: &ConceptUnit,
    op: &str,
    args: &[Value],
    world: &World,
    caller_domain: &str,
    opts: &ExecOptions,
) -> Result<ExecResult, ExecError> {
    let mut units: Vec<&ConceptUnit> = vec![target];
    units.extend(kb.iter().filter(|u| u.name != target.name));
    let mut s = Session {
        units,
        opts,
        world: world.clone(),
        trace: Vec::new(),
        steps: 0,
        rng: ChaCha8Rng::seed_from_u64(world.rng_seed),
        objects: Vec::new(),
        singletons: BTreeMap::new(),
    };
    let operation = find_operation(target, op, args.len())?;
    // Replaying a recorded script is how an instance is used at all; it is
    // not a call from outside.
    if !operation.implicit {
        deny_unless(check_access(caller_domain, "", target, op), target, op)?;
    }
    let this = s.singleton(&target.name)?;
    let value = s.invoke(target, this, operation, args.to_vec())?;
    Ok(ExecResult { trace: s.trace, value, steps: s.steps, world: s.world })
}

fn find_operation<'u>(unit: &'u ConceptUnit, op: &str, arity: usize) -> Result<&'u Operation, ExecError> {
    let mut named = unit.operations.iter().filter(|o| o.name == op).peekable();
    let first_arity = named.peek().map(|o| o.params.len());
    if let Some(found) = named.find(|o| o.params.len() == arity) {
        return Ok(found);
    }
    match first_arity {
        Some(expected) => Err(ExecError::ArityMismatch { op: op.to_string(), expected, got: arity }),
        None => Err(ExecError::UnknownOperation { unit: unit.name.clone(), op: op.to_string(), arity }),
    }
}

fn deny_unless(access: Result<Access, crate::ir::AccessError>, target: &ConceptUnit, member: &str) -> Result<(), ExecError> {
    match access {
        Ok(Access::Allowed) => Ok(()),
        Ok(Access::Denied(reason)) => {
            Err(ExecError::AccessViolation { unit: target.name.clone(), member: member.to_string(), reason })
        }
        Err(_) => Err(ExecError::UnboundName(format!("{}.{member}", target.name))),
    }
}

#[derive(Debug)]
struct Object {
    unit: String,
    fields: BTreeMap<String, Value>,
    /// World container a Set object was made from.
    container: Option<String>,
}

struct Frame {
    unit: String,
    domain: String,
    this: usize,
    locals: BTreeMap<String, Value>,
    cursors: BTreeMap<String, Cursor>,
    epochs: u64,
    epoch: Option<u64>,
}

enum Flow {
    Normal,
    Return(Value),
}

enum Place {
    Local(String),
    Field(usize, String),
}

struct Session<'a> {
    units: Vec<&'a ConceptUnit>,
    opts: &'a ExecOptions,
    world: World,
    trace: Vec<TraceEvent>,
    steps: usize,
    rng: ChaCha8Rng,
    objects: Vec<Object>,
    singletons: BTreeMap<String, usize>,
}

type R<T> = Result<T, ExecError>;

impl<'a> Session<'a> {
    fn unit(&self, name: &str) -> Option<&'a ConceptUnit> {
        self.units.iter().copied().find(|u| u.name == name)
    }

    fn tick(&mut self) -> R<()> {
        self.steps += 1;
        if self.steps > self.opts.step_limit {
            return Err(ExecError::StepLimitExceeded(self.opts.step_limit));
        }
        Ok(())
    }

    fn emit(&mut self, event: Event) {
        let seq = self.trace.len() + 1;
        self.trace.push(TraceEvent { seq, event });
    }

    /// The one object of a unit in this session, created on first use.
    fn singleton(&mut self, name: &str) -> R<usize> {
        if let Some(&i) = self.singletons.get(name) {
            return Ok(i);
        }
        let unit = self.unit(name).ok_or_else(|| ExecError::UnknownUnit(name.to_string()))?;
        let idx = self.objects.len();
        self.objects.push(Object { unit: name.to_string(), fields: BTreeMap::new(), container: None });
        self.singletons.insert(name.to_string(), idx);
        for a in &unit.attributes {
            let v = self.init_attribute(a.type_ref.as_str(), &a.binding)?;
            self.objects[idx].fields.insert(a.name.clone(), v);
        }
        Ok(idx)
    }

    fn symbol(&self, s: &str) -> Value {
        if self.world.entities.contains_key(s) {
            Value::Entity(s.to_string())
        } else {
            Value::Token(s.to_string())
        }
    }

    fn init_attribute(&mut self, ty: &str, binding: &Binding) -> R<Value> {
        let token_list = matches!(self.opts.registry.collection(ty), Some(c) if c.element == ElementConstraint::Token);
        match binding {
            Binding::Const(Literal::Symbol(_)) if token_list => Ok(Value::TokenList(self.opts.numerals.clone())),
            Binding::Const(Literal::Symbol(s)) | Binding::Var(Some(Literal::Symbol(s))) => Ok(self.symbol(s)),
            Binding::Const(l) | Binding::Var(Some(l)) => Ok(literal_value(l)),
            Binding::Var(None) => self.default_attribute(ty),
        }
    }

    /// Variables of set type see the focus container; lists start empty.
    fn default_attribute(&mut self, ty: &str) -> R<Value> {
        if let Some(spec) = self.opts.registry.collection(ty) {
            if spec.shape == CollectionShape::Set {
                let members = self.world.focus_members();
                self.admit(ty, &members)?;
                return Ok(Value::EntityList(members));
            }
        }
        if ty == SET_CLASS {
            return match self.world.focus.clone() {
                Some(f) => self.make_set(Some(&f), self.world.focus_members()),
                None => Ok(Value::Nothing),
            };
        }
        if ty == "Person" {
            return Ok(self.world.first_of_kind("Person").map_or(Value::Nothing, Value::Entity));
        }
        Ok(self.default_local(ty))
    }

    fn default_local(&self, ty: &str) -> Value {
        match self.opts.registry.collection(ty) {
            Some(c) if c.element == ElementConstraint::Token => Value::TokenList(Vec::new()),
            Some(_) => Value::EntityList(Vec::new()),
            None => match ty {
                "int" => Value::Int(0),
                "Boolean" => Value::Bool(false),
                _ => Value::Nothing,
            },
        }
    }

    fn admit(&self, ty: &str, members: &[String]) -> R<()> {
        for id in members {
            let kind = self.world.kind_of(id).unwrap_or("?");
            if !self.opts.registry.admits(ty, kind) {
                return Err(ExecError::TypeMismatch(format!("{ty} does not admit {kind} `{id}`")));
            }
        }
        Ok(())
    }

    /// A Set object over some entities, carrying any known cardinal sum.
    fn make_set(&mut self, container: Option<&str>, members: Vec<String>) -> R<Value> {
        let mut fields = BTreeMap::new();
        if let Some(set_unit) = self.unit(SET_CLASS) {
            for a in &set_unit.attributes {
                let v = self.init_attribute(a.type_ref.as_str(), &a.binding)?;
                fields.insert(a.name.clone(), v);
            }
        }
        fields.insert("objlist".to_string(), Value::EntityList(members));
        let sum = container.and_then(|c| self.world.known_sums.get(c)).map_or(Value::Nothing, |v| Value::Int(*v));
        fields.insert("cardinalSum".to_string(), sum);
        self.objects.push(Object { unit: SET_CLASS.to_string(), fields, container: container.map(str::to_string) });
        Ok(Value::UnitRef(self.objects.len() - 1))
    }

    /// Fit an argument to a parameter type: container names become their
    /// contents or a Set object, and set contents are type-checked.
    fn convert(&mut self, value: Value, ty: &str) -> R<Value> {
        if let Some(spec) = self.opts.registry.collection(ty) {
            let members = match value {
                Value::Token(name) if self.world.containers.contains_key(&name) => self.world.containers[&name].clone(),
                Value::EntityList(m) => m,
                Value::UnitRef(o) => match self.objects[o].fields.get("objlist") {
                    Some(Value::EntityList(m)) => m.clone(),
                    _ => return Err(ExecError::TypeMismatch(format!("object does not fit {ty}"))),
                },
                Value::TokenList(t) if spec.element != ElementConstraint::Any || ty == "List" => return Ok(Value::TokenList(t)),
                other => return Err(ExecError::TypeMismatch(format!("{} does not fit {ty}", other.type_name()))),
            };
            self.admit(ty, &members)?;
            return Ok(Value::EntityList(members));
        }
        match (ty, value) {
            (SET_CLASS, Value::Token(name)) if self.world.containers.contains_key(&name) => {
                let members = self.world.containers[&name].clone();
                self.make_set(Some(&name), members)
            }
            (SET_CLASS, Value::EntityList(m)) => self.make_set(None, m),
            ("int", v @ Value::Int(_)) => Ok(v),
            ("int", other) => Err(ExecError::TypeMismatch(format!("{} does not fit int", other.type_name()))),
            (_, v) => Ok(v),
        }
    }

    fn invoke(&mut self, unit: &'a ConceptUnit, this: usize, op: &'a Operation, args: Vec<Value>) -> R<Value> {
        let mut frame = Frame {
            unit: unit.name.clone(),
            domain: unit.domain.clone(),
            this,
            locals: BTreeMap::new(),
            cursors: BTreeMap::new(),
            epochs: 0,
            epoch: None,
        };
        for (p, v) in op.params.iter().zip(args) {
            let v = self.convert(v, p.type_ref.as_str())?;
            frame.locals.insert(p.name.clone(), v);
        }
        match self.block(&mut frame, &op.body)? {
            Flow::Return(v) => Ok(v),
            Flow::Normal => Ok(Value::Nothing),
        }
    }

    fn block(&mut self, f: &mut Frame, body: &'a [Statement]) -> R<Flow> {
        for s in body {
            if let Flow::Return(v) = self.statement(f, s)? {
                return Ok(Flow::Return(v));
            }
        }
        Ok(Flow::Normal)
    }

    fn statement(&mut self, f: &mut Frame, s: &'a Statement) -> R<Flow> {
        self.tick()?;
        match s {
            Statement::SetupPredicate { name, args } => {
                self.check_setup(f, name, args)?;
            }
            Statement::Action(a) => {
                self.action(f, a)?;
            }
            Statement::Assign { target, value } => {
                let v = self.eval(f, value)?;
                let place = match target {
                    Expr::Name(n) => self.place(f, n)?,
                    Expr::Field(base, field) => self.field_place(f, base, field)?,
                    _ => return Err(ExecError::TypeMismatch("assignment to a non-name".into())),
                };
                let (Place::Local(n) | Place::Field(_, n)) = &place;
                f.cursors.remove(n);
                *self.slot(f, &place) = v;
            }
            Statement::While { cond, body } => {
                let outer = f.epoch;
                loop {
                    f.epochs += 1;
                    f.epoch = Some(f.epochs);
                    self.tick()?;
                    if !self.truth(f, cond)? {
                        break;
                    }
                    let flow = self.block(f, body)?;
                    if let Flow::Return(v) = flow {
                        f.epoch = outer;
                        return Ok(Flow::Return(v));
                    }
                }
                f.epoch = outer;
            }
            Statement::If { cond, then_body, else_body } => {
                let branch = if self.truth(f, cond)? { then_body } else { else_body };
                return self.block(f, branch);
            }
            Statement::Call { target, op, args } => {
                self.call(f, target.as_deref(), op, args)?;
            }
            Statement::Return(e) => {
                let v = match e {
                    Some(e) => self.eval(f, e)?,
                    None => Value::Nothing,
                };
                return Ok(Flow::Return(v));
            }
            Statement::LocalDecl { name, type_ref } => {
                let v = self.default_local(type_ref.as_str());
                f.locals.insert(name.clone(), v);
                f.cursors.remove(name);
            }
            Statement::Labeled { body, .. } => return self.block(f, body),
        }
        Ok(Flow::Normal)
    }

    fn check_setup(&mut self, f: &Frame, name: &str, args: &[String]) -> R<()> {
        let mut ids = Vec::with_capacity(args.len());
        for a in args {
            ids.push(self.read(f, a)?.to_string());
        }
        let shown = || format!("{name}({})", args.join(", "));
        let holds = match super::Arrangement::from_predicate(name) {
            Some(arrangement) => {
                let group = ids.first().and_then(|id| self.world.entities.get(id)).and_then(|e| e.group.clone());
                match group {
                    Some(g) => {
                        let mut members = self.world.group_members(&g);
                        let mut wanted = ids.clone();
                        members.sort();
                        wanted.sort();
                        self.world.arrangements.get(&g) == Some(&arrangement) && members == wanted
                    }
                    None => false,
                }
            }
            None => self.world.has_fact(name, &ids),
        };
        if holds {
            Ok(())
        } else {
            Err(ExecError::SetupMismatch(shown()))
        }
    }

    fn action(&mut self, f: &mut Frame, a: &'a AtomicAction) -> R<Value> {
        match a {
            AtomicAction::Verb { actor, verb, arg } => {
                let actor_v = self.read(f, actor)?;
                let mut arg_v = self.eval(f, arg)?;
                if let Value::UnitRef(o) = arg_v {
                    let obj = &self.objects[o];
                    arg_v = Value::Token(obj.container.clone().unwrap_or_else(|| obj.unit.clone()));
                }
                let event = verb_event(*verb, actor, &actor_v, &arg_v, &mut self.world)?;
                self.emit(event);
                Ok(Value::Nothing)
            }
            AtomicAction::Collection { collection, op, item } => {
                let item = match item {
                    Some(e) => Some(self.eval(f, e)?),
                    None => None,
                };
                let place = self.place(f, collection)?;
                let epoch = f.epoch;
                let cursor = f.cursors.entry(collection.clone()).or_default();
                let (coll, rng) = match &place {
                    Place::Local(n) => (f.locals.get_mut(n).expect("place resolved"), &mut self.rng),
                    Place::Field(o, n) => (self.objects[*o].fields.get_mut(n).expect("place resolved"), &mut self.rng),
                };
                collection_op(collection, *op, coll, cursor, item, rng, epoch)
            }
        }
    }

    /// Where a bare name lives: locals, own fields, then globals.
    fn place(&mut self, f: &Frame, name: &str) -> R<Place> {
        if f.locals.contains_key(name) {
            return Ok(Place::Local(name.to_string()));
        }
        if self.objects[f.this].fields.contains_key(name) {
            return Ok(Place::Field(f.this, name.to_string()));
        }
        if self.unit(GLOBALS).is_some() {
            let g = self.singleton(GLOBALS)?;
            if self.objects[g].fields.contains_key(name) {
                return Ok(Place::Field(g, name.to_string()));
            }
        }
        Err(ExecError::UnboundName(name.to_string()))
    }

    fn field_place(&mut self, f: &mut Frame, base: &'a Expr, field: &str) -> R<Place> {
        let value = match base {
            Expr::Name(n) => self.read(f, n).map_err(|e| unknown_unit(e, n))?,
            _ => self.eval(f, base)?,
        };
        let o = match value {
            Value::UnitRef(o) => o,
            other => return Err(ExecError::TypeMismatch(format!("field `{field}` of a {}", other.type_name()))),
        };
        self.check_member(f, o, field)?;
        if !self.objects[o].fields.contains_key(field) {
            return Err(ExecError::UnboundName(format!("{}.{field}", self.objects[o].unit)));
        }
        Ok(Place::Field(o, field.to_string()))
    }

    /// Members of other units are subject to their visibility.
    fn check_member(&self, f: &Frame, o: usize, member: &str) -> R<()> {
        let owner = &self.objects[o].unit;
        if *owner == f.unit {
            return Ok(());
        }
        match self.unit(owner) {
            Some(u) if u.member_visibility(member).is_some() => deny_unless(check_access(&f.domain, &f.unit, u, member), u, member),
            _ => Ok(()),
        }
    }

    fn slot<'s>(&'s mut self, f: &'s mut Frame, place: &Place) -> &'s mut Value {
        match place {
            Place::Local(n) => f.locals.get_mut(n).expect("place resolved"),
            Place::Field(o, n) => self.objects[*o].fields.get_mut(n).expect("place resolved"),
        }
    }

    fn read(&mut self, f: &Frame, name: &str) -> R<Value> {
        match self.place(f, name) {
            Ok(Place::Local(n)) => Ok(f.locals[&n].clone()),
            Ok(Place::Field(o, n)) => Ok(self.objects[o].fields[&n].clone()),
            Err(e) => {
                if self.unit(name).is_some() {
                    Ok(Value::UnitRef(self.singleton(name)?))
                } else {
                    Err(e)
                }
            }
        }
    }

    fn truth(&mut self, f: &mut Frame, e: &'a Expr) -> R<bool> {
        match self.eval(f, e)? {
            Value::Bool(b) => Ok(b),
            Value::Nothing => Ok(false),
            other => Err(ExecError::TypeMismatch(format!("condition is a {}", other.type_name()))),
        }
    }

    fn eval(&mut self, f: &mut Frame, e: &'a Expr) -> R<Value> {
        match e {
            Expr::Lit(l) => Ok(literal_value(l)),
            Expr::Null => Ok(Value::Nothing),
            Expr::Name(n) => self.read(f, n),
            Expr::Field(base, field) => {
                let place = self.field_place(f, base, field)?;
                Ok(self.slot(f, &place).clone())
            }
            Expr::List(items) => {
                let mut vals = Vec::with_capacity(items.len());
                for i in items {
                    vals.push(self.eval(f, i)?);
                }
                list_value(vals)
            }
            Expr::Not(inner) => Ok(Value::Bool(!self.truth(f, inner)?)),
            Expr::Binary(op, l, r) => self.binary(f, *op, l, r),
            Expr::Call { target, op, args } => self.call(f, target.as_deref(), op, args),
            Expr::Prim(a) => self.action(f, a),
        }
    }

    fn binary(&mut self, f: &mut Frame, op: BinOp, l: &'a Expr, r: &'a Expr) -> R<Value> {
        match op {
            BinOp::And => return Ok(Value::Bool(self.truth(f, l)? && self.truth(f, r)?)),
            BinOp::Or => return Ok(Value::Bool(self.truth(f, l)? || self.truth(f, r)?)),
            _ => {}
        }
        let lv = self.eval(f, l)?;
        let rv = self.eval(f, r)?;
        match op {
            BinOp::Eq => return Ok(Value::Bool(lv == rv)),
            BinOp::Ne => return Ok(Value::Bool(lv != rv)),
            _ => {}
        }
        let (Value::Int(a), Value::Int(b)) = (&lv, &rv) else {
            return Err(ExecError::TypeMismatch(format!(
                "`{}` needs ints, got {} and {}",
                op.symbol(),
                lv.type_name(),
                rv.type_name()
            )));
        };
        let (a, b) = (*a, *b);
        Ok(match op {
            BinOp::Lt => Value::Bool(a < b),
            BinOp::Gt => Value::Bool(a > b),
            BinOp::Le => Value::Bool(a <= b),
            BinOp::Ge => Value::Bool(a >= b),
            BinOp::Add => Value::Int(a.saturating_add(b)),
            BinOp::Sub => Value::Int(a.saturating_sub(b)),
            BinOp::And | BinOp::Or | BinOp::Eq | BinOp::Ne => unreachable!("handled above"),
        })
    }

    fn call(&mut self, f: &mut Frame, target: Option<&str>, op: &str, args: &'a [Expr]) -> R<Value> {
        let object = match target {
            None => f.this,
            Some(t) => match self.read(f, t).map_err(|e| unknown_unit(e, t))? {
                Value::UnitRef(o) => o,
                other => return Err(ExecError::TypeMismatch(format!("`{t}` is a {}, not a unit", other.type_name()))),
            },
        };
        let unit_name = self.objects[object].unit.clone();
        let unit = self.unit(&unit_name).ok_or_else(|| ExecError::UnknownUnit(unit_name.clone()))?;
        let operation = find_operation(unit, op, args.len())?;
        if unit.name != f.unit {
            deny_unless(check_access(&f.domain, &f.unit, unit, op), unit, op)?;
        }
        let mut vals = Vec::with_capacity(args.len());
        for a in args {
            vals.push(self.eval(f, a)?);
        }
        self.invoke(unit, object, operation, vals)
    }
}

/// A name used as a unit that is neither bound nor a unit names a missing unit.
fn unknown_unit(e: ExecError, name: &str) -> ExecError {
    match e {
        ExecError::UnboundName(n) if n == name => ExecError::UnknownUnit(n),
        other => other,
    }
}

fn list_value(vals: Vec<Value>) -> R<Value> {
    if vals.iter().all(|v| matches!(v, Value::Entity(_))) {
        return Ok(Value::EntityList(vals.into_iter().map(|v| v.to_string()).collect()));
    }
    if vals.iter().all(|v| matches!(v, Value::Token(_))) {
        return Ok(Value::TokenList(vals.into_iter().map(|v| v.to_string()).collect()));
    }
    Err(ExecError::TypeMismatch("list mixes entities and tokens".into()))
}
