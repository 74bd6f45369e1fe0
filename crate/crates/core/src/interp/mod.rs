//! Tree-walking interpreter for concept units over a simulated world.

mod exec;
mod prim;
mod world;

pub use exec::{execute, execute_with};
pub use prim::{eval_primitive, Cursor, Env};
pub use world::{Arrangement, Entity, EntityId, Fact, World};

use crate::ir::TypeRegistry;
use std::fmt;

/// Default bound on executed statements and loop tests.
pub const DEFAULT_STEP_LIMIT: usize = 10_000;

const NUMERAL_WORDS: [&str; 20] = [
    "ONE", "TWO", "THREE", "FOUR", "FIVE", "SIX", "SEVEN", "EIGHT", "NINE", "TEN", "ELEVEN", "TWELVE", "THIRTEEN",
    "FOURTEEN", "FIFTEEN", "SIXTEEN", "SEVENTEEN", "EIGHTEEN", "NINETEEN", "TWENTY",
];

/// The fixed numeral vocabulary `ONE..TWENTY`.
pub fn numerals() -> Vec<String> {
    NUMERAL_WORDS.iter().map(|s| s.to_string()).collect()
}

/// Position of a numeral token, counting from 1.
pub fn numeral_value(numerals: &[String], token: &str) -> Option<i64> {
    numerals.iter().position(|n| n == token).map(|i| i as i64 + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Token(String),
    Entity(EntityId),
    EntityList(Vec<EntityId>),
    TokenList(Vec<String>),
    /// Handle to an object of the current execution session.
    UnitRef(usize),
    Nothing,
}

impl Value {
    pub fn is_nothing(&self) -> bool {
        matches!(self, Value::Nothing)
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Int(_) => "int",
            Value::Bool(_) => "Boolean",
            Value::Token(_) => "token",
            Value::Entity(_) => "entity",
            Value::EntityList(_) => "entity list",
            Value::TokenList(_) => "token list",
            Value::UnitRef(_) => "object",
            Value::Nothing => "nothing",
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Token(t) | Value::Entity(t) => f.write_str(t),
            Value::EntityList(items) | Value::TokenList(items) => write!(f, "[{}]", items.join(", ")),
            Value::UnitRef(i) => write!(f, "object#{i}"),
            Value::Nothing => f.write_str("NULL"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Event {
    PointedTo(EntityId),
    Said(String),
    Moved(String),
    TookAway(EntityId),
}

impl Event {
    pub fn verb(&self) -> &'static str {
        match self {
            Event::PointedTo(_) => "PointedTo",
            Event::Said(_) => "Said",
            Event::Moved(_) => "Moved",
            Event::TookAway(_) => "TookAway",
        }
    }

    pub fn arg(&self) -> &str {
        match self {
            Event::PointedTo(a) | Event::Said(a) | Event::Moved(a) | Event::TookAway(a) => a,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TraceEvent {
    pub seq: usize,
    pub event: Event,
}

pub type Trace = Vec<TraceEvent>;

/// One event per line: `seq<TAB>verb<TAB>arg`.
pub fn dump_trace(trace: &[TraceEvent]) -> String {
    trace.iter().map(|e| format!("{}\t{}\t{}\n", e.seq, e.event.verb(), e.event.arg())).collect()
}

/// PointedTo and Said events only, in order.
pub fn pointing_projection(trace: &[TraceEvent]) -> Vec<Event> {
    trace.iter().filter(|e| matches!(e.event, Event::PointedTo(_) | Event::Said(_))).map(|e| e.event.clone()).collect()
}

pub fn said_tokens(trace: &[TraceEvent]) -> Vec<&str> {
    trace.iter().filter_map(|e| match &e.event {
        Event::Said(t) => Some(t.as_str()),
        _ => None,
    })
    .collect()
}

pub fn pointed_entities(trace: &[TraceEvent]) -> Vec<&str> {
    trace.iter().filter_map(|e| match &e.event {
        Event::PointedTo(t) => Some(t.as_str()),
        _ => None,
    })
    .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecResult {
    pub trace: Trace,
    pub value: Value,
    pub steps: usize,
    /// The world after execution; the input world is left untouched.
    pub world: World,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExecError {
    #[error("access to {unit}.{member} denied: {reason}")]
    AccessViolation { unit: String, member: String, reason: String },
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("setup predicate {0} does not hold in this world")]
    SetupMismatch(String),
    #[error("step limit of {0} exceeded")]
    StepLimitExceeded(usize),
    #[error("{op} on empty collection `{collection}`")]
    EmptyCollection { op: String, collection: String },
    #[error("unit {unit} has no operation {op} taking {arity} argument(s)")]
    UnknownOperation { unit: String, op: String, arity: usize },
    #[error("no unit named `{0}`")]
    UnknownUnit(String),
    #[error("{op} takes {expected} argument(s), got {got}")]
    ArityMismatch { op: String, expected: usize, got: usize },
}

impl ExecError {
    /// Short variant name, used in outcome reasons.
    pub fn kind(&self) -> &'static str {
        match self {
            ExecError::AccessViolation { .. } => "AccessViolation",
            ExecError::UnboundName(_) => "UnboundName",
            ExecError::TypeMismatch(_) => "TypeMismatch",
            ExecError::SetupMismatch(_) => "SetupMismatch",
            ExecError::StepLimitExceeded(_) => "StepLimitExceeded",
            ExecError::EmptyCollection { .. } => "EmptyCollection",
            ExecError::UnknownOperation { .. } => "UnknownOperation",
            ExecError::UnknownUnit(_) => "UnknownUnit",
            ExecError::ArityMismatch { .. } => "ArityMismatch",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExecOptions {
    pub step_limit: usize,
    pub numerals: Vec<String>,
    pub registry: TypeRegistry,
}

impl Default for ExecOptions {
    fn default() -> Self {
        ExecOptions { step_limit: DEFAULT_STEP_LIMIT, numerals: numerals(), registry: TypeRegistry::default() }
    }
}
