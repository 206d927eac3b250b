use num_bigint::BigUint;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub fn new(line: usize, column: usize) -> Self {
        Pos { line, column }
    }
}

/// An expression node. Equality ignores positions.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub at: Pos,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Num(BigUint),
    /// A coordinate, a named definition or a differential `dx`.
    Ident(String),
    /// `d/dx`: the odd momentum of coordinate `x`.
    Partial(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    /// Written `a*b` or by juxtaposition `a b`; order is kept.
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// `wedge(A, B, …)`
    Wedge(Vec<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr { kind, at: Pos::default() }
    }

    pub fn at(kind: ExprKind, at: Pos) -> Self {
        Expr { kind, at }
    }
}

/// Right-hand side of a vector-valued declaration.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorRhs {
    /// `(a1, …, an)`: coefficients of `d/dx^i` in coordinate order.
    Components(Vec<Expr>),
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordDecl {
    pub name: String,
    /// `x : even` / `x : odd`; base coordinates must be even.
    pub parity: Option<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionEntry {
    pub target: String,
    pub base: String,
    pub source: String,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Coords(Vec<CoordDecl>),
    /// A named helper vector field.
    Vector { name: String, rhs: VectorRhs },
    Gauge { name: String, rhs: VectorRhs },
    Constraint { name: String, value: Expr },
    Bivector { name: String, value: Expr },
    Dynamics { name: String, rhs: VectorRhs },
    Form { name: String, value: Expr },
    Connection(Vec<ConnectionEntry>),
    /// `structure A B = f(…) X(…);`
    Structure {
        left: String,
        right: String,
        f: Vec<Expr>,
        x: Vec<Expr>,
    },
    Bounds(Vec<(String, u32)>),
    Check(Vec<String>),
    /// A bare expression: a function whose invariance is checked.
    Observable(Expr),
}

/// A statement with its source position. Equality ignores positions.
#[derive(Debug, Clone)]
pub struct Item {
    pub stmt: Statement,
    pub at: Pos,
}

impl PartialEq for Item {
    fn eq(&self, other: &Self) -> bool {
        self.stmt == other.stmt
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SystemDocument {
    pub items: Vec<Item>,
}

pub const KEYWORDS: &[&str] = &[
    "coords",
    "vector",
    "gauge",
    "constraint",
    "bivector",
    "dynamics",
    "form",
    "connection",
    "structure",
    "bounds",
    "check",
    "wedge",
    "even",
    "odd",
    "d",
];
