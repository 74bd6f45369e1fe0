//! Leveled intermediate representation for concept units.
//!
//! A [`ConceptUnit`] is either a recorded instance (level I) or a class
//! (levels E1 to E3). Units carry attributes, operations and a friend list;
//! operation bodies are trees of [`Statement`] and [`Expr`].

mod access;
mod metrics;
mod registry;
mod validate;

pub use access::{check_access, Access, AccessError};
pub use metrics::{level_metrics, LevelMetrics};
pub use registry::{CollectionShape, CollectionSpec, ElementConstraint, TypeRegistry};
pub use validate::{validate, validate_set, Diagnostic, Rule};

use std::fmt;
use std::str::FromStr;

/// Name of the synthetic unit that holds top-level constants.
pub const GLOBALS: &str = "Globals";

/// Name given to the straight-line script of a level-I instance.
pub const IMPLICIT_OP: &str = "Perform";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    I,
    E1,
    E2,
    E3,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::I, Level::E1, Level::E2, Level::E3];

    pub fn next(self) -> Option<Level> {
        match self {
            Level::I => Some(Level::E1),
            Level::E1 => Some(Level::E2),
            Level::E2 => Some(Level::E3),
            Level::E3 => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::I => "I",
            Level::E1 => "E1",
            Level::E2 => "E2",
            Level::E3 => "E3",
        })
    }
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" => Ok(Level::I),
            "E1" => Ok(Level::E1),
            "E2" => Ok(Level::E2),
            "E3" => Ok(Level::E3),
            other => Err(format!("unknown level `{other}` (expected I, E1, E2 or E3)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Visibility {
    Private,
    Protected,
    Public,
}

impl Visibility {
    pub const ALL: [Visibility; 3] = [Visibility::Private, Visibility::Protected, Visibility::Public];

    pub fn keyword(self) -> &'static str {
        match self {
            Visibility::Private => "private",
            Visibility::Protected => "protected",
            Visibility::Public => "public",
        }
    }
}

impl fmt::Display for Visibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitKind {
    Instance,
    Class,
}

/// Nominal type tag such as `Apple`, `APP_Set` or `int`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeRef(pub String);

impl TypeRef {
    pub fn new(name: impl Into<String>) -> Self {
        TypeRef(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Literal {
    Int(i64),
    Bool(bool),
    Str(String),
    /// A bare upper-case name, e.g. `NO_IMPORTANT` or the implicit value of
    /// `const Apple APPLE1;` (which denotes itself).
    Symbol(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Binding {
    Const(Literal),
    /// Variable attribute, optionally with an initial value.
    Var(Option<Literal>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Attribute {
    pub name: String,
    pub type_ref: TypeRef,
    pub binding: Binding,
    pub visibility: Visibility,
}

impl Attribute {
    /// A named constant that denotes itself (`const Apple APPLE1;`).
    pub fn named_const(name: impl Into<String>, ty: impl Into<String>, visibility: Visibility) -> Self {
        let name = name.into();
        Attribute {
            binding: Binding::Const(Literal::Symbol(name.clone())),
            name,
            type_ref: TypeRef::new(ty),
            visibility,
        }
    }

    pub fn var(name: impl Into<String>, ty: impl Into<String>, visibility: Visibility) -> Self {
        Attribute {
            name: name.into(),
            type_ref: TypeRef::new(ty),
            binding: Binding::Var(None),
            visibility,
        }
    }

    pub fn is_const(&self) -> bool {
        matches!(self.binding, Binding::Const(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Param {
    pub name: String,
    pub type_ref: TypeRef,
}

impl Param {
    pub fn new(name: impl Into<String>, ty: impl Into<String>) -> Self {
        Param { name: name.into(), type_ref: TypeRef::new(ty) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Operation {
    pub name: String,
    pub params: Vec<Param>,
    pub returns: Option<TypeRef>,
    pub visibility: Visibility,
    pub body: Vec<Statement>,
    /// True for the loose statement script of an instance.
    pub implicit: bool,
}

impl Operation {
    pub fn new(name: impl Into<String>, visibility: Visibility) -> Self {
        Operation {
            name: name.into(),
            params: Vec::new(),
            returns: None,
            visibility,
            body: Vec::new(),
            implicit: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    Add,
    Sub,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Or => "||",
            BinOp::And => "&&",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Gt => ">",
            BinOp::Le => "<=",
            BinOp::Ge => ">=",
            BinOp::Add => "+",
            BinOp::Sub => "-",
        }
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne => 3,
            BinOp::Lt | BinOp::Gt | BinOp::Le | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Lit(Literal),
    Null,
    Name(String),
    /// `base.field`
    Field(Box<Expr>, String),
    List(Vec<Expr>),
    Not(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// `[target.]op(args)`; a missing target means the current unit.
    Call { target: Option<String>, op: String, args: Vec<Expr> },
    Prim(Box<AtomicAction>),
}

impl Expr {
    pub fn name(n: impl Into<String>) -> Expr {
        Expr::Name(n.into())
    }

    pub fn int(v: i64) -> Expr {
        Expr::Lit(Literal::Int(v))
    }

    pub fn str(s: impl Into<String>) -> Expr {
        Expr::Lit(Literal::Str(s.into()))
    }

    pub fn field(base: Expr, field: impl Into<String>) -> Expr {
        Expr::Field(Box::new(base), field.into())
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn prim(a: AtomicAction) -> Expr {
        Expr::Prim(Box::new(a))
    }

    pub fn call(target: Option<&str>, op: impl Into<String>, args: Vec<Expr>) -> Expr {
        Expr::Call { target: target.map(str::to_string), op: op.into(), args }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verb {
    Move,
    PointTo,
    Say,
    TakeAway,
}

impl Verb {
    pub fn keyword(self) -> &'static str {
        match self {
            Verb::Move => "Move",
            Verb::PointTo => "PointTo",
            Verb::Say => "Say",
            Verb::TakeAway => "TakeAway",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Verb> {
        match s {
            "Move" => Some(Verb::Move),
            "PointTo" => Some(Verb::PointTo),
            "Say" => Some(Verb::Say),
            "TakeAway" => Some(Verb::TakeAway),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CollectionOp {
    SelectOneRandom,
    Append,
    Delete,
    Empty,
    First,
    Next,
}

impl CollectionOp {
    pub fn keyword(self) -> &'static str {
        match self {
            CollectionOp::SelectOneRandom => "SelectOneRandom",
            CollectionOp::Append => "Append",
            CollectionOp::Delete => "Delete",
            CollectionOp::Empty => "Empty",
            CollectionOp::First => "First",
            CollectionOp::Next => "Next",
        }
    }

    pub fn from_keyword(s: &str) -> Option<CollectionOp> {
        match s {
            "SelectOneRandom" => Some(CollectionOp::SelectOneRandom),
            "Append" => Some(CollectionOp::Append),
            "Delete" => Some(CollectionOp::Delete),
            "Empty" => Some(CollectionOp::Empty),
            "First" => Some(CollectionOp::First),
            "Next" => Some(CollectionOp::Next),
            _ => None,
        }
    }

    /// Append and Delete take an item; the rest take nothing.
    pub fn takes_item(self) -> bool {
        matches!(self, CollectionOp::Append | CollectionOp::Delete)
    }
}

/// Primitive behaviour. Verbs act on the world through an actor; collection
/// primitives act on a named collection variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AtomicAction {
    Verb { actor: String, verb: Verb, arg: Expr },
    Collection { collection: String, op: CollectionOp, item: Option<Expr> },
}

impl AtomicAction {
    pub fn verb(actor: impl Into<String>, verb: Verb, arg: Expr) -> Self {
        AtomicAction::Verb { actor: actor.into(), verb, arg }
    }

    pub fn coll(collection: impl Into<String>, op: CollectionOp, item: Option<Expr>) -> Self {
        AtomicAction::Collection { collection: collection.into(), op, item }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Statement {
    /// Inert fact such as `On(APPLE1, TABLE1);`, checked against the world.
    SetupPredicate { name: String, args: Vec<String> },
    Action(AtomicAction),
    /// `target = value;` where target is a name or a dotted field path.
    Assign { target: Expr, value: Expr },
    While { cond: Expr, body: Vec<Statement> },
    If { cond: Expr, then_body: Vec<Statement>, else_body: Vec<Statement> },
    Call { target: Option<String>, op: String, args: Vec<Expr> },
    Return(Option<Expr>),
    LocalDecl { name: String, type_ref: TypeRef },
    /// Inline block such as `Index(app_set) { ... }`.
    Labeled { label: String, args: Vec<Expr>, body: Vec<Statement> },
}

impl Statement {
    pub fn action(a: AtomicAction) -> Statement {
        Statement::Action(a)
    }

    pub fn assign(target: impl Into<String>, value: Expr) -> Statement {
        Statement::Assign { target: Expr::Name(target.into()), value }
    }

    pub fn incr(target: &str) -> Statement {
        Statement::assign(target, Expr::bin(BinOp::Add, Expr::name(target), Expr::int(1)))
    }

    pub fn local(name: impl Into<String>, ty: impl Into<String>) -> Statement {
        Statement::LocalDecl { name: name.into(), type_ref: TypeRef::new(ty) }
    }

    pub fn call(target: Option<&str>, op: impl Into<String>, args: Vec<Expr>) -> Statement {
        Statement::Call { target: target.map(str::to_string), op: op.into(), args }
    }

    pub fn is_straight_line(&self) -> bool {
        matches!(self, Statement::Action(_) | Statement::SetupPredicate { .. })
    }
}

/// Visit every statement of a body, depth first.
pub fn walk_statements<'a>(body: &'a [Statement], f: &mut dyn FnMut(&'a Statement)) {
    for s in body {
        f(s);
        match s {
            Statement::While { body, .. } | Statement::Labeled { body, .. } => walk_statements(body, f),
            Statement::If { then_body, else_body, .. } => {
                walk_statements(then_body, f);
                walk_statements(else_body, f);
            }
            _ => {}
        }
    }
}

/// Visit every expression reachable from a statement, including nested ones.
pub fn walk_exprs<'a>(stmt: &'a Statement, f: &mut dyn FnMut(&'a Expr)) {
    fn expr<'a>(e: &'a Expr, f: &mut dyn FnMut(&'a Expr)) {
        f(e);
        match e {
            Expr::Field(b, _) | Expr::Not(b) => expr(b, f),
            Expr::List(items) => items.iter().for_each(|i| expr(i, f)),
            Expr::Binary(_, l, r) => {
                expr(l, f);
                expr(r, f);
            }
            Expr::Call { args, .. } => args.iter().for_each(|a| expr(a, f)),
            Expr::Prim(a) => action(a, f),
            Expr::Lit(_) | Expr::Null | Expr::Name(_) => {}
        }
    }
    fn action<'a>(a: &'a AtomicAction, f: &mut dyn FnMut(&'a Expr)) {
        match a {
            AtomicAction::Verb { arg, .. } => expr(arg, f),
            AtomicAction::Collection { item, .. } => {
                if let Some(i) = item {
                    expr(i, f)
                }
            }
        }
    }
    match stmt {
        Statement::SetupPredicate { .. } | Statement::LocalDecl { .. } | Statement::Return(None) => {}
        Statement::Action(a) => action(a, f),
        Statement::Assign { target, value } => {
            expr(target, f);
            expr(value, f);
        }
        Statement::While { cond, .. } | Statement::If { cond, .. } => expr(cond, f),
        Statement::Call { args, .. } | Statement::Labeled { args, .. } => args.iter().for_each(|a| expr(a, f)),
        Statement::Return(Some(e)) => expr(e, f),
    }
}

/// 1-based source position of a unit header.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SourcePos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone)]
pub struct ConceptUnit {
    pub name: String,
    pub kind: UnitKind,
    pub level: Level,
    pub domain: String,
    pub attributes: Vec<Attribute>,
    pub operations: Vec<Operation>,
    pub friends: Vec<String>,
    /// Where the unit was parsed from; ignored by equality.
    pub origin: Option<SourcePos>,
}

impl PartialEq for ConceptUnit {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.kind == other.kind
            && self.level == other.level
            && self.domain == other.domain
            && self.attributes == other.attributes
            && self.operations == other.operations
            && self.friends == other.friends
    }
}

impl Eq for ConceptUnit {}

impl ConceptUnit {
    pub fn new(name: impl Into<String>, kind: UnitKind, level: Level, domain: impl Into<String>) -> Self {
        ConceptUnit {
            name: name.into(),
            kind,
            level,
            domain: domain.into(),
            attributes: Vec::new(),
            operations: Vec::new(),
            friends: Vec::new(),
            origin: None,
        }
    }

    pub fn is_globals(&self) -> bool {
        self.name == GLOBALS
    }

    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn operation(&self, name: &str) -> Option<&Operation> {
        self.operations.iter().find(|o| o.name == name)
    }

    pub fn implicit_operation(&self) -> Option<&Operation> {
        self.operations.iter().find(|o| o.implicit)
    }

    /// Visibility of a named attribute or operation.
    pub fn member_visibility(&self, member: &str) -> Option<Visibility> {
        self.attribute(member)
            .map(|a| a.visibility)
            .or_else(|| self.operation(member).map(|o| o.visibility))
    }

    /// Same unit ignoring its name.
    pub fn same_shape(&self, other: &ConceptUnit) -> bool {
        let mut renamed = other.clone();
        renamed.name = self.name.clone();
        *self == renamed
    }
}

/// Names of the operations called (directly) by an operation body.
pub fn called_operations(op: &Operation) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut push = |target: &Option<String>, name: &str| {
        let key = match target {
            Some(t) => format!("{t}.{name}"),
            None => name.to_string(),
        };
        if !out.contains(&key) {
            out.push(key);
        }
    };
    walk_statements(&op.body, &mut |st| {
        if let Statement::Call { target, op, .. } = st {
            push(target, op);
        }
        walk_exprs(st, &mut |e| {
            if let Expr::Call { target, op, .. } = e {
                push(target, op);
            }
        });
    });
    out
}
