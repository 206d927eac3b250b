//! Random documents of the description language.

use num_bigint::BigUint;
use proptest::prelude::*;

use weakpoisson::dsl::*;

pub fn name() -> impl Strategy<Value = String> {
    "[a-zA-Z_][a-zA-Z0-9_]{0,5}".prop_filter("keyword", |s| !KEYWORDS.contains(&s.as_str()))
}

pub fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        any::<u32>().prop_map(|n| Expr::new(ExprKind::Num(BigUint::from(n)))),
        name().prop_map(|s| Expr::new(ExprKind::Ident(s))),
        name().prop_map(|s| Expr::new(ExprKind::Partial(s))),
    ];
    leaf.prop_recursive(5, 48, 4, |inner| {
        let b = |k: fn(Box<Expr>, Box<Expr>) -> ExprKind| {
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| Expr::new(k(Box::new(l), Box::new(r))))
        };
        prop_oneof![
            inner.clone().prop_map(|e| Expr::new(ExprKind::Neg(Box::new(e)))),
            b(ExprKind::Add),
            b(ExprKind::Sub),
            b(ExprKind::Mul),
            b(ExprKind::Div),
            (inner.clone(), 0u32..70).prop_map(|(e, n)| Expr::new(ExprKind::Pow(Box::new(e), n))),
            prop::collection::vec(inner.clone(), 1..4).prop_map(|v| Expr::new(ExprKind::Wedge(v))),
        ]
    })
}

pub fn rhs() -> impl Strategy<Value = VectorRhs> {
    prop_oneof![
        prop::collection::vec(expr(), 1..4).prop_map(VectorRhs::Components),
        expr().prop_map(VectorRhs::Expr),
    ]
}

pub fn statement() -> impl Strategy<Value = Statement> {
    let decl = (name(), prop::option::of(0u8..2)).prop_map(|(name, parity)| CoordDecl { name, parity });
    let entry = (name(), name(), name(), expr()).prop_map(|(target, base, source, value)| ConnectionEntry {
        target,
        base,
        source,
        value,
    });
    prop_oneof![
        prop::collection::vec(decl, 0..4).prop_map(Statement::Coords),
        (name(), rhs()).prop_map(|(name, rhs)| Statement::Vector { name, rhs }),
        (name(), rhs()).prop_map(|(name, rhs)| Statement::Gauge { name, rhs }),
        (name(), rhs()).prop_map(|(name, rhs)| Statement::Dynamics { name, rhs }),
        (name(), expr()).prop_map(|(name, value)| Statement::Constraint { name, value }),
        (name(), expr()).prop_map(|(name, value)| Statement::Bivector { name, value }),
        (name(), expr()).prop_map(|(name, value)| Statement::Form { name, value }),
        prop::collection::vec(entry, 0..3).prop_map(Statement::Connection),
        (name(), name(), prop::collection::vec(expr(), 0..3), prop::collection::vec(expr(), 0..3))
            .prop_map(|(left, right, f, x)| Statement::Structure { left, right, f, x }),
        prop::collection::vec((name(), any::<u32>()), 1..3).prop_map(Statement::Bounds),
        prop::collection::vec("[a-z]{1,8}", 1..4).prop_map(Statement::Check),
        expr().prop_map(Statement::Observable),
    ]
}

pub fn document() -> impl Strategy<Value = SystemDocument> {
    prop::collection::vec(statement(), 0..8).prop_map(|stmts| SystemDocument {
        items: stmts.into_iter().map(|stmt| Item { stmt, at: Pos::new(1, 1) }).collect(),
    })
}
