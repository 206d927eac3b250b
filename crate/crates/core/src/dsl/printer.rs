use std::fmt::Write;

use super::ast::*;

fn prec(e: &Expr) -> u8 {
    match e.kind {
        ExprKind::Add(..) | ExprKind::Sub(..) => 1,
        ExprKind::Mul(..) | ExprKind::Div(..) => 2,
        ExprKind::Neg(_) => 3,
        ExprKind::Pow(..) => 4,
        _ => 5,
    }
}

fn wrap(out: &mut String, e: &Expr, parens: bool) {
    if parens {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_binary(out: &mut String, l: &Expr, op: &str, r: &Expr, p: u8) {
    wrap(out, l, prec(l) < p);
    out.push_str(op);
    // a negation on the right reads back as a unary operand
    let rp = prec(r);
    wrap(out, r, rp <= p && rp != 3);
}

pub fn write_expr(out: &mut String, e: &Expr) {
    match &e.kind {
        ExprKind::Num(n) => write!(out, "{n}").unwrap(),
        ExprKind::Ident(s) => out.push_str(s),
        ExprKind::Partial(s) => write!(out, "d/d{s}").unwrap(),
        ExprKind::Neg(inner) => {
            out.push('-');
            wrap(out, inner, prec(inner) < 3);
        }
        ExprKind::Add(l, r) => write_binary(out, l, " + ", r, 1),
        ExprKind::Sub(l, r) => write_binary(out, l, " - ", r, 1),
        ExprKind::Mul(l, r) => write_binary(out, l, "*", r, 2),
        ExprKind::Div(l, r) => write_binary(out, l, "/", r, 2),
        ExprKind::Pow(b, n) => {
            wrap(out, b, prec(b) < 5);
            write!(out, "^{n}").unwrap();
        }
        ExprKind::Wedge(args) => {
            out.push_str("wedge");
            write_list(out, args);
        }
    }
}

fn write_list(out: &mut String, items: &[Expr]) {
    out.push('(');
    for (i, a) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_expr(out, a);
    }
    out.push(')');
}

fn write_rhs(out: &mut String, rhs: &VectorRhs) {
    match rhs {
        VectorRhs::Components(items) => write_list(out, items),
        VectorRhs::Expr(e) => write_expr(out, e),
    }
}

pub fn expr_to_string(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e);
    s
}

/// Canonical text of a document, one statement per line.
pub fn print_system(doc: &SystemDocument) -> String {
    let mut out = String::new();
    for item in &doc.items {
        match &item.stmt {
            Statement::Coords(decls) => {
                out.push_str("coords");
                for d in decls {
                    write!(out, " {}", d.name).unwrap();
                    match d.parity {
                        Some(0) => out.push_str(" : even"),
                        Some(_) => out.push_str(" : odd"),
                        None => {}
                    }
                }
            }
            Statement::Vector { name, rhs } | Statement::Gauge { name, rhs } | Statement::Dynamics { name, rhs } => {
                let kw = match &item.stmt {
                    Statement::Vector { .. } => "vector",
                    Statement::Gauge { .. } => "gauge",
                    _ => "dynamics",
                };
                write!(out, "{kw} {name} = ").unwrap();
                write_rhs(&mut out, rhs);
            }
            Statement::Constraint { name, value } | Statement::Bivector { name, value } | Statement::Form { name, value } => {
                let kw = match &item.stmt {
                    Statement::Constraint { .. } => "constraint",
                    Statement::Bivector { .. } => "bivector",
                    _ => "form",
                };
                write!(out, "{kw} {name} = ").unwrap();
                write_expr(&mut out, value);
            }
            Statement::Connection(entries) => {
                out.push_str("connection {\n");
                for e in entries {
                    write!(out, "  {} {} {} = ", e.target, e.base, e.source).unwrap();
                    write_expr(&mut out, &e.value);
                    out.push_str(";\n");
                }
                out.push('}');
            }
            Statement::Structure { left, right, f, x } => {
                write!(out, "structure {left} {right} = f").unwrap();
                write_list(&mut out, f);
                out.push_str(" X");
                write_list(&mut out, x);
            }
            Statement::Bounds(entries) => {
                out.push_str("bounds ");
                let parts: Vec<String> = entries.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                out.push_str(&parts.join(", "));
            }
            Statement::Check(names) => {
                write!(out, "check {}", names.join(" ")).unwrap();
            }
            Statement::Observable(e) => write_expr(&mut out, e),
        }
        out.push_str(";\n");
    }
    out
}
