use super::lexer::{tokenize, Tok, Token};
use super::ParseError;
use crate::ir::{
    Attribute, AtomicAction, BinOp, Binding, CollectionOp, ConceptUnit, Expr, Level, Literal, Operation, Param,
    SourcePos, Statement, TypeRef, UnitKind, Verb, Visibility, GLOBALS, IMPLICIT_OP,
};

/// Domain given to units that carry no `@domain` annotation.
pub const DEFAULT_DOMAIN: &str = "general";
/// Domain of the synthetic `Globals` unit.
pub const GLOBALS_DOMAIN: &str = "numbers";

pub fn parse_units(src: &str) -> Result<Vec<ConceptUnit>, ParseError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0, level: Level::I, depth: 0 };
    p.file()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Level of the unit being parsed; decides how bare calls read.
    level: Level,
    depth: usize,
}

/// Nesting bound that keeps recursion well inside the default stack.
const MAX_DEPTH: usize = 200;

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        let t = &self.tokens[self.pos];
        ParseError::new(t.line, t.column, expected, t.tok.describe())
    }

    fn here(&self) -> SourcePos {
        let t = &self.tokens[self.pos];
        SourcePos { line: t.line, column: t.column }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(format!("`{s}`")))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(what)),
        }
    }

    fn file(&mut self) -> PResult<Vec<ConceptUnit>> {
        let mut units = Vec::new();
        let mut globals: Option<usize> = None;
        loop {
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Sym("@") => units.push(self.annotated_unit()?),
                Tok::Ident(kw) if kw == "const" => {
                    // Top-level constants gather in one unit placed where the first appeared.
                    let idx = *globals.get_or_insert_with(|| {
                        let mut g = ConceptUnit::new(GLOBALS, UnitKind::Class, Level::E2, GLOBALS_DOMAIN);
                        g.origin = Some(self.here());
                        units.push(g);
                        units.len() - 1
                    });
                    let attrs = self.attribute(Visibility::Public)?;
                    units[idx].attributes.extend(attrs);
                }
                Tok::Ident(kw) if is_unit_keyword(&kw) => {
                    return Err(self.error("`@level(...)` before the unit"));
                }
                _ => return Err(self.error("`@level`, `const` or end of input")),
            }
        }
        Ok(units)
    }

    fn annotated_unit(&mut self) -> PResult<ConceptUnit> {
        let mut level = None;
        let mut domain = None;
        while self.eat_sym("@") {
            let key = self.ident("annotation name")?;
            self.expect_sym("(")?;
            let value_pos = self.pos;
            let value = self.ident("annotation value")?;
            self.expect_sym(")")?;
            match key.as_str() {
                "level" => {
                    level = Some(value.parse::<Level>().map_err(|_| {
                        let t = &self.tokens[value_pos];
                        ParseError::new(t.line, t.column, "one of I, E1, E2, E3", format!("`{value}`"))
                    })?)
                }
                "domain" => domain = Some(value),
                _ => {
                    let t = &self.tokens[value_pos - 2];
                    return Err(ParseError::new(t.line, t.column, "`level` or `domain`", format!("`{key}`")));
                }
            }
        }
        let Some(level) = level else {
            return Err(self.error("a `@level(...)` annotation"));
        };
        self.level = level;
        let origin = self.here();
        let kind = match self.peek() {
            Tok::Ident(k) if k.eq_ignore_ascii_case("instance") => UnitKind::Instance,
            Tok::Ident(k) if k.eq_ignore_ascii_case("class") => UnitKind::Class,
            _ => return Err(self.error("`instance` or `class`")),
        };
        self.bump();
        let name = self.ident("unit name")?;
        let mut unit = ConceptUnit::new(name, kind, level, domain.unwrap_or_else(|| DEFAULT_DOMAIN.to_string()));
        unit.origin = Some(origin);
        self.expect_sym("{")?;
        let mut loose: Vec<Statement> = Vec::new();
        let mut loose_vis = None;
        while !self.is_sym("}") {
            let vis = self.section_header()?;
            while !self.is_sym("}") && !self.at_section_header() {
                self.member(&mut unit, vis, &mut loose, &mut loose_vis)?;
            }
        }
        self.expect_sym("}")?;
        if let Some(vis) = loose_vis {
            let mut op = Operation::new(IMPLICIT_OP, vis);
            op.body = loose;
            op.implicit = true;
            unit.operations.push(op);
        }
        Ok(unit)
    }

    fn at_section_header(&self) -> bool {
        matches!(self.peek(), Tok::Ident(k) if visibility_keyword(k).is_some()) && matches!(self.peek_at(1), Tok::Sym(":"))
    }

    fn section_header(&mut self) -> PResult<Visibility> {
        let vis = match self.peek() {
            Tok::Ident(k) => visibility_keyword(k),
            _ => None,
        };
        let Some(vis) = vis.filter(|_| matches!(self.peek_at(1), Tok::Sym(":"))) else {
            return Err(self.error("`private:`, `protected:` or `public:`"));
        };
        self.bump();
        self.bump();
        Ok(vis)
    }

    fn member(
        &mut self,
        unit: &mut ConceptUnit,
        vis: Visibility,
        loose: &mut Vec<Statement>,
        loose_vis: &mut Option<Visibility>,
    ) -> PResult<()> {
        if self.is_ident("friend") {
            self.bump();
            let name = self.ident("friend name")?;
            self.expect_sym(";")?;
            unit.friends.push(name);
            return Ok(());
        }
        if self.is_ident("const") {
            let attrs = self.attribute(vis)?;
            unit.attributes.extend(attrs);
            return Ok(());
        }
        if let (Tok::Ident(_), Tok::Ident(_)) = (self.peek(), self.peek_at(1)) {
            if matches!(self.peek_at(2), Tok::Sym("(")) {
                let op = self.function(vis)?;
                unit.operations.push(op);
            } else {
                let attrs = self.attribute(vis)?;
                unit.attributes.extend(attrs);
            }
            return Ok(());
        }
        loose_vis.get_or_insert(vis);
        let stmts = self.statement()?;
        loose.extend(stmts);
        Ok(())
    }

    fn attribute(&mut self, vis: Visibility) -> PResult<Vec<Attribute>> {
        let is_const = self.is_ident("const");
        if is_const {
            self.bump();
        }
        let ty = self.ident("a type name")?;
        let mut names = vec![self.ident("an attribute name")?];
        while self.eat_sym(",") {
            names.push(self.ident("an attribute name")?);
        }
        let init = if self.eat_sym("=") {
            if names.len() > 1 {
                return Err(self.error("a single name before `=`"));
            }
            Some(self.literal()?)
        } else {
            None
        };
        self.expect_sym(";")?;
        Ok(names
            .into_iter()
            .map(|name| {
                let binding = match (is_const, &init) {
                    (true, Some(l)) => Binding::Const(l.clone()),
                    (true, None) => Binding::Const(Literal::Symbol(name.clone())),
                    (false, init) => Binding::Var(init.clone()),
                };
                Attribute { name, type_ref: TypeRef::new(ty.clone()), binding, visibility: vis }
            })
            .collect())
    }

    fn literal(&mut self) -> PResult<Literal> {
        if self.is_sym("-") {
            if let Tok::Int(v) = self.peek_at(1) {
                let v = -*v;
                self.bump();
                self.bump();
                return Ok(Literal::Int(v));
            }
        }
        let lit = match self.peek() {
            Tok::Int(v) => Literal::Int(*v),
            Tok::Str(s) => Literal::Str(s.clone()),
            Tok::Ident(s) if s == "true" => Literal::Bool(true),
            Tok::Ident(s) if s == "false" => Literal::Bool(false),
            Tok::Ident(s) => Literal::Symbol(s.clone()),
            _ => return Err(self.error("a literal")),
        };
        self.bump();
        Ok(lit)
    }

    fn function(&mut self, vis: Visibility) -> PResult<Operation> {
        let ret = self.ident("a return type")?;
        let name = self.ident("an operation name")?;
        let mut op = Operation::new(name, vis);
        op.returns = (ret != "void").then(|| TypeRef::new(ret));
        self.expect_sym("(")?;
        if !self.is_sym(")") {
            loop {
                let ty = self.ident("a parameter type")?;
                let pname = self.ident("a parameter name")?;
                op.params.push(Param::new(pname, ty));
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym(")")?;
        op.body = self.block()?;
        Ok(op)
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error(format!("at most {MAX_DEPTH} levels of nesting")));
        }
        Ok(())
    }

    fn block(&mut self) -> PResult<Vec<Statement>> {
        self.enter()?;
        let body = self.block_inner();
        self.depth -= 1;
        body
    }

    fn block_inner(&mut self) -> PResult<Vec<Statement>> {
        self.expect_sym("{")?;
        let mut body = Vec::new();
        while !self.is_sym("}") {
            if matches!(self.peek(), Tok::Eof) {
                return Err(self.error("`}`"));
            }
            body.extend(self.statement()?);
        }
        self.bump();
        Ok(body)
    }

    fn block_or_statement(&mut self) -> PResult<Vec<Statement>> {
        if self.is_sym("{") {
            return self.block();
        }
        self.enter()?;
        let body = self.statement();
        self.depth -= 1;
        body
    }

    fn statement(&mut self) -> PResult<Vec<Statement>> {
        if self.is_ident("while") {
            self.bump();
            self.expect_sym("(")?;
            let cond = self.expr()?;
            self.expect_sym(")")?;
            let body = self.block_or_statement()?;
            return Ok(vec![Statement::While { cond, body }]);
        }
        if self.is_ident("if") {
            self.bump();
            self.expect_sym("(")?;
            let cond = self.expr()?;
            self.expect_sym(")")?;
            let then_body = self.block_or_statement()?;
            let else_body = if self.is_ident("else") {
                self.bump();
                self.block_or_statement()?
            } else {
                Vec::new()
            };
            return Ok(vec![Statement::If { cond, then_body, else_body }]);
        }
        if self.is_ident("return") {
            self.bump();
            let value = if self.is_sym(";") { None } else { Some(self.expr()?) };
            self.expect_sym(";")?;
            return Ok(vec![Statement::Return(value)]);
        }
        let Tok::Ident(first) = self.peek().clone() else {
            return Err(self.error("a statement"));
        };
        // `Type name;` or `Type name = value;`
        if let Tok::Ident(second) = self.peek_at(1).clone() {
            self.bump();
            self.bump();
            let mut out = vec![Statement::LocalDecl { name: second.clone(), type_ref: TypeRef::new(first) }];
            if self.eat_sym("=") {
                let value = self.expr()?;
                out.push(Statement::Assign { target: Expr::Name(second), value });
            }
            self.expect_sym(";")?;
            return Ok(out);
        }
        // `Name(args);` or `Name(args) { ... }`
        if matches!(self.peek_at(1), Tok::Sym("(")) {
            self.bump();
            let args_pos = self.pos;
            let args = self.call_args()?;
            if self.is_sym("{") {
                let body = self.block()?;
                return Ok(vec![Statement::Labeled { label: first, args, body }]);
            }
            self.expect_sym(";")?;
            if self.level == Level::I {
                let mut names = Vec::with_capacity(args.len());
                for a in args {
                    match a {
                        Expr::Name(n) => names.push(n),
                        _ => {
                            let t = &self.tokens[args_pos];
                            return Err(ParseError::new(t.line, t.column, "constant names as predicate arguments", "an expression"));
                        }
                    }
                }
                return Ok(vec![Statement::SetupPredicate { name: first, args: names }]);
            }
            return Ok(vec![Statement::Call { target: None, op: first, args }]);
        }
        // `recv.Verb(args);`, `recv.op(args);`, `path = value;`, `path++;`
        let lhs = self.postfix()?;
        if self.eat_sym("=") {
            let value = self.expr()?;
            self.expect_sym(";")?;
            return Ok(vec![Statement::Assign { target: lhs, value }]);
        }
        if self.eat_sym("++") {
            self.expect_sym(";")?;
            let value = Expr::bin(BinOp::Add, lhs.clone(), Expr::int(1));
            return Ok(vec![Statement::Assign { target: lhs, value }]);
        }
        self.expect_sym(";")?;
        match lhs {
            Expr::Prim(a) => Ok(vec![Statement::Action(*a)]),
            Expr::Call { target, op, args } => Ok(vec![Statement::Call { target, op, args }]),
            _ => Err(self.error("`=`, `++` or a call")),
        }
    }

    fn call_args(&mut self) -> PResult<Vec<Expr>> {
        self.expect_sym("(")?;
        let mut args = Vec::new();
        if !self.is_sym(")") {
            loop {
                args.push(self.expr()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym(")")?;
        Ok(args)
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym(s) => binop(s),
                _ => None,
            };
            let Some(op) = op.filter(|o| o.precedence() >= min_prec) else {
                return Ok(lhs);
            };
            self.bump();
            let rhs = self.binary(op.precedence() + 1)?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        self.enter()?;
        let e = if self.eat_sym("!") { self.unary().map(Expr::not) } else { self.postfix() };
        self.depth -= 1;
        e
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let start = self.pos;
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::int(v))
            }
            Tok::Sym("-") if matches!(self.peek_at(1), Tok::Int(_)) => {
                self.bump();
                let Tok::Int(v) = self.bump() else { unreachable!() };
                Ok(Expr::int(-v))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Expr::str(s))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Sym("[") => {
                self.bump();
                let mut items = Vec::new();
                if !self.is_sym("]") {
                    loop {
                        items.push(self.expr()?);
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                self.expect_sym("]")?;
                Ok(Expr::List(items))
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "true" => return Ok(Expr::Lit(Literal::Bool(true))),
                    "false" => return Ok(Expr::Lit(Literal::Bool(false))),
                    "NULL" => return Ok(Expr::Null),
                    _ => {}
                }
                if self.is_sym("(") {
                    let args = self.call_args()?;
                    return Ok(Expr::Call { target: None, op: name, args });
                }
                let mut e = Expr::Name(name.clone());
                while self.eat_sym(".") {
                    let member = self.ident("a member name")?;
                    if self.is_sym("(") {
                        let Expr::Name(recv) = &e else {
                            let t = &self.tokens[start];
                            return Err(ParseError::new(t.line, t.column, "a simple receiver name", "a dotted path"));
                        };
                        let recv = recv.clone();
                        let args = self.call_args()?;
                        e = self.method(recv, member, args)?;
                        if self.is_sym(".") {
                            return Err(self.error("end of expression after a call"));
                        }
                        return Ok(e);
                    }
                    e = Expr::field(e, member);
                }
                Ok(e)
            }
            _ => Err(self.error("an expression")),
        }
    }

    fn method(&mut self, recv: String, member: String, mut args: Vec<Expr>) -> PResult<Expr> {
        if let Some(verb) = Verb::from_keyword(&member) {
            if args.len() != 1 {
                return Err(self.error(format!("exactly one argument to {member}")));
            }
            return Ok(Expr::prim(AtomicAction::verb(recv, verb, args.remove(0))));
        }
        if let Some(op) = CollectionOp::from_keyword(&member) {
            let want = usize::from(op.takes_item());
            if args.len() != want {
                return Err(self.error(format!("{want} argument(s) to {member}")));
            }
            return Ok(Expr::prim(AtomicAction::coll(recv, op, args.pop())));
        }
        Ok(Expr::Call { target: Some(recv), op: member, args })
    }
}

fn binop(s: &str) -> Option<BinOp> {
    Some(match s {
        "||" => BinOp::Or,
        "&&" => BinOp::And,
        "==" => BinOp::Eq,
        "!=" => BinOp::Ne,
        "<" => BinOp::Lt,
        ">" => BinOp::Gt,
        "<=" => BinOp::Le,
        ">=" => BinOp::Ge,
        "+" => BinOp::Add,
        "-" => BinOp::Sub,
        _ => return None,
    })
}

fn visibility_keyword(k: &str) -> Option<Visibility> {
    match k {
        "private" => Some(Visibility::Private),
        "protected" => Some(Visibility::Protected),
        "public" => Some(Visibility::Public),
        _ => None,
    }
}

fn is_unit_keyword(k: &str) -> bool {
    k.eq_ignore_ascii_case("instance") || k.eq_ignore_ascii_case("class")
}
