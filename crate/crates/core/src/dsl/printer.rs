use crate::ir::{
    AtomicAction, BinOp, Binding, ConceptUnit, Expr, Literal, Operation, Statement, UnitKind, Visibility,
};
use std::fmt::Write;

use super::parser::DEFAULT_DOMAIN;

const INDENT: &str = "    ";

/// Print units in the canonical layout, separated by blank lines.
pub fn print_canonical(units: &[ConceptUnit]) -> String {
    units.iter().map(print_unit).collect::<Vec<_>>().join("\n")
}

pub fn print_unit(u: &ConceptUnit) -> String {
    let mut out = String::new();
    if u.is_globals() {
        print_attributes(&mut out, "", u.attributes.iter().collect());
        return out;
    }
    let _ = writeln!(out, "@level({})", u.level);
    if u.domain != DEFAULT_DOMAIN {
        let _ = writeln!(out, "@domain({})", u.domain);
    }
    let kind = match u.kind {
        UnitKind::Instance => "instance",
        UnitKind::Class => "class",
    };
    let _ = writeln!(out, "{kind} {} {{", u.name);
    let has_content = |vis: Visibility| {
        u.attributes.iter().any(|a| a.visibility == vis)
            || u.operations.iter().any(|o| o.visibility == vis && (!o.implicit || !o.body.is_empty()))
    };
    // Friends open the first printed section, or a private one if there is none.
    let friend_section = Visibility::ALL.into_iter().find(|v| has_content(*v)).unwrap_or(Visibility::Private);
    for vis in Visibility::ALL {
        let with_friends = vis == friend_section && !u.friends.is_empty();
        if !has_content(vis) && !with_friends {
            continue;
        }
        let attrs: Vec<_> = u.attributes.iter().filter(|a| a.visibility == vis).collect();
        let ops: Vec<_> = u.operations.iter().filter(|o| o.visibility == vis && !o.implicit).collect();
        let script: Vec<_> = u.operations.iter().filter(|o| o.visibility == vis && o.implicit).collect();
        let _ = writeln!(out, "{}:", vis.keyword());
        if with_friends {
            for f in &u.friends {
                let _ = writeln!(out, "{INDENT}friend {f};");
            }
        }
        print_attributes(&mut out, INDENT, attrs);
        for op in ops {
            print_operation(&mut out, op);
        }
        for op in script {
            print_body(&mut out, 1, &op.body);
        }
    }
    out.push_str("}\n");
    out
}

fn print_attributes(out: &mut String, indent: &str, attrs: Vec<&crate::ir::Attribute>) {
    // Consecutive plain declarations of one type share a line.
    let mut i = 0;
    while i < attrs.len() {
        let a = attrs[i];
        let plain = |x: &crate::ir::Attribute| match &x.binding {
            Binding::Const(Literal::Symbol(s)) => *s == x.name,
            Binding::Var(None) => true,
            _ => false,
        };
        let prefix = if a.is_const() { "const " } else { "" };
        if !plain(a) {
            let lit = match &a.binding {
                Binding::Const(l) | Binding::Var(Some(l)) => literal(l),
                Binding::Var(None) => unreachable!(),
            };
            let _ = writeln!(out, "{indent}{prefix}{} {} = {lit};", a.type_ref, a.name);
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < attrs.len()
            && plain(attrs[j])
            && attrs[j].is_const() == a.is_const()
            && attrs[j].type_ref == a.type_ref
            && attrs[j].visibility == a.visibility
        {
            j += 1;
        }
        let names: Vec<&str> = attrs[i..j].iter().map(|x| x.name.as_str()).collect();
        let _ = writeln!(out, "{indent}{prefix}{} {};", a.type_ref, names.join(", "));
        i = j;
    }
}

fn print_operation(out: &mut String, op: &Operation) {
    let ret = op.returns.as_ref().map_or("void", |t| t.as_str());
    let params: Vec<String> = op.params.iter().map(|p| format!("{} {}", p.type_ref, p.name)).collect();
    let _ = writeln!(out, "{INDENT}{ret} {}({}) {{", op.name, params.join(", "));
    print_body(out, 2, &op.body);
    let _ = writeln!(out, "{INDENT}}}");
}

fn print_body(out: &mut String, depth: usize, body: &[Statement]) {
    let pad = INDENT.repeat(depth);
    for s in body {
        match s {
            Statement::SetupPredicate { name, args } => {
                let _ = writeln!(out, "{pad}{name}({});", args.join(", "));
            }
            Statement::Action(a) => {
                let _ = writeln!(out, "{pad}{};", action(a));
            }
            Statement::Assign { target, value } => {
                let _ = writeln!(out, "{pad}{};", assignment(target, value));
            }
            Statement::While { cond, body } => {
                let _ = writeln!(out, "{pad}while ({}) {{", print_expr(cond));
                print_body(out, depth + 1, body);
                let _ = writeln!(out, "{pad}}}");
            }
            Statement::If { cond, then_body, else_body } => {
                let _ = writeln!(out, "{pad}if ({}) {{", print_expr(cond));
                print_body(out, depth + 1, then_body);
                if !else_body.is_empty() {
                    let _ = writeln!(out, "{pad}}} else {{");
                    print_body(out, depth + 1, else_body);
                }
                let _ = writeln!(out, "{pad}}}");
            }
            Statement::Call { target, op, args } => {
                let _ = writeln!(out, "{pad}{};", call(target.as_deref(), op, args));
            }
            Statement::Return(None) => {
                let _ = writeln!(out, "{pad}return;");
            }
            Statement::Return(Some(e)) => {
                let _ = writeln!(out, "{pad}return {};", print_expr(e));
            }
            Statement::LocalDecl { name, type_ref } => {
                let _ = writeln!(out, "{pad}{type_ref} {name};");
            }
            Statement::Labeled { label, args, body } => {
                let args: Vec<String> = args.iter().map(print_expr).collect();
                let _ = writeln!(out, "{pad}{label}({}) {{", args.join(", "));
                print_body(out, depth + 1, body);
                let _ = writeln!(out, "{pad}}}");
            }
        }
    }
}

fn assignment(target: &Expr, value: &Expr) -> String {
    if let Expr::Binary(BinOp::Add, l, r) = value {
        if **l == *target && **r == Expr::int(1) {
            return format!("{}++", print_expr(target));
        }
    }
    format!("{} = {}", print_expr(target), print_expr(value))
}

fn literal(l: &Literal) -> String {
    match l {
        Literal::Int(v) => v.to_string(),
        Literal::Bool(b) => b.to_string(),
        Literal::Str(s) => format!("\"{s}\""),
        Literal::Symbol(s) => s.clone(),
    }
}

fn action(a: &AtomicAction) -> String {
    match a {
        AtomicAction::Verb { actor, verb, arg } => format!("{actor}.{}({})", verb.keyword(), print_expr(arg)),
        AtomicAction::Collection { collection, op, item } => {
            let item = item.as_ref().map(print_expr).unwrap_or_default();
            format!("{collection}.{}({item})", op.keyword())
        }
    }
}

fn call(target: Option<&str>, op: &str, args: &[Expr]) -> String {
    let args: Vec<String> = args.iter().map(print_expr).collect();
    match target {
        Some(t) => format!("{t}.{op}({})", args.join(", ")),
        None => format!("{op}({})", args.join(", ")),
    }
}

pub fn print_expr(e: &Expr) -> String {
    match e {
        Expr::Lit(l) => literal(l),
        Expr::Null => "NULL".to_string(),
        Expr::Name(n) => n.clone(),
        Expr::Field(b, f) => format!("{}.{f}", print_expr(b)),
        Expr::List(items) => format!("[{}]", items.iter().map(print_expr).collect::<Vec<_>>().join(", ")),
        Expr::Not(inner) => match **inner {
            Expr::Binary(..) => format!("!({})", print_expr(inner)),
            _ => format!("!{}", print_expr(inner)),
        },
        Expr::Binary(op, l, r) => {
            let side = |x: &Expr, strict: bool| match x {
                Expr::Binary(o, ..) if o.precedence() < op.precedence() || (strict && o.precedence() == op.precedence()) => {
                    format!("({})", print_expr(x))
                }
                _ => print_expr(x),
            };
            format!("{} {} {}", side(l, false), op.symbol(), side(r, true))
        }
        Expr::Call { target, op, args } => call(target.as_deref(), op, args),
        Expr::Prim(a) => action(a),
    }
}
