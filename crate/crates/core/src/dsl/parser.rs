use num_traits::ToPrimitive;

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::Diagnostic;

const MAX_DEPTH: usize = 200;

const STATEMENT_START: &[&str] = &[
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
    "expression",
];

const ATOM_START: &[&str] = &["identifier", "number", "`d/d…`", "`(`", "`wedge`", "`-`"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

type PResult<T> = Result<T, Diagnostic>;

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Diagnostic {
        let t = self.peek();
        Diagnostic::new(t.at.line, t.at.column, format!("unexpected {}", t.tok.describe())).expecting(expected)
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == w)
    }

    fn expect_punct(&mut self, c: char) -> PResult<()> {
        if self.is_punct(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&format!("`{c}`")]))
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.is_word(w) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&format!("`{w}`")]))
        }
    }

    /// A user-chosen name: an identifier that is not a keyword.
    fn name(&mut self) -> PResult<String> {
        match &self.peek().tok {
            Tok::Ident(s) if !is_keyword(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["name"])),
        }
    }

    /// Any identifier, keywords included.
    fn word(&mut self) -> PResult<String> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["name"])),
        }
    }

    fn small_int(&mut self) -> PResult<u32> {
        let at = self.peek().at;
        match &self.peek().tok {
            Tok::Int(n) => {
                let v = n.to_u32().ok_or_else(|| Diagnostic::new(at.line, at.column, "integer too large"))?;
                self.bump();
                Ok(v)
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn document(&mut self) -> PResult<SystemDocument> {
        let mut items = Vec::new();
        while self.peek().tok != Tok::Eof {
            items.push(self.statement()?);
        }
        Ok(SystemDocument { items })
    }

    fn statement(&mut self) -> PResult<Item> {
        let at = self.peek().at;
        let word = match &self.peek().tok {
            Tok::Ident(s) => s.clone(),
            _ => String::new(),
        };
        let stmt = match word.as_str() {
            "coords" => {
                self.bump();
                let mut decls = Vec::new();
                while !self.is_punct(';') {
                    let name = self.name().map_err(|d| d.expecting(&["name", "`;`"]))?;
                    let parity = if self.is_punct(':') {
                        self.bump();
                        if self.is_word("even") {
                            self.bump();
                            Some(0)
                        } else if self.is_word("odd") {
                            self.bump();
                            Some(1)
                        } else {
                            return Err(self.error(&["`even`", "`odd`"]));
                        }
                    } else {
                        None
                    };
                    decls.push(CoordDecl { name, parity });
                }
                Statement::Coords(decls)
            }
            "vector" | "gauge" | "dynamics" => {
                self.bump();
                let name = self.name()?;
                self.expect_punct('=')?;
                let rhs = self.vector_rhs()?;
                match word.as_str() {
                    "vector" => Statement::Vector { name, rhs },
                    "gauge" => Statement::Gauge { name, rhs },
                    _ => Statement::Dynamics { name, rhs },
                }
            }
            "constraint" | "bivector" | "form" => {
                self.bump();
                let name = self.name()?;
                self.expect_punct('=')?;
                let value = self.expr()?;
                match word.as_str() {
                    "constraint" => Statement::Constraint { name, value },
                    "bivector" => Statement::Bivector { name, value },
                    _ => Statement::Form { name, value },
                }
            }
            "connection" => {
                self.bump();
                self.expect_punct('{')?;
                let mut entries = Vec::new();
                while !self.is_punct('}') {
                    let target = self.name().map_err(|d| d.expecting(&["name", "`}`"]))?;
                    let base = self.name()?;
                    let source = self.name()?;
                    self.expect_punct('=')?;
                    let value = self.expr()?;
                    self.expect_punct(';')?;
                    entries.push(ConnectionEntry {
                        target,
                        base,
                        source,
                        value,
                    });
                }
                self.bump();
                Statement::Connection(entries)
            }
            "structure" => {
                self.bump();
                let left = self.name()?;
                let right = self.name()?;
                self.expect_punct('=')?;
                self.expect_word("f")?;
                let f = self.list()?;
                if !matches!(&self.peek().tok, Tok::Ident(s) if s == "X") {
                    return Err(self.error(&["`X`"]));
                }
                self.bump();
                let x = self.list()?;
                Statement::Structure { left, right, f, x }
            }
            "bounds" => {
                self.bump();
                let mut entries = Vec::new();
                loop {
                    let key = self.name()?;
                    self.expect_punct('=')?;
                    entries.push((key, self.small_int()?));
                    if !self.is_punct(',') {
                        break;
                    }
                    self.bump();
                }
                Statement::Bounds(entries)
            }
            "check" => {
                self.bump();
                let mut names = vec![self.word()?];
                while !self.is_punct(';') {
                    names.push(self.word().map_err(|d| d.expecting(&["name", "`;`"]))?);
                }
                Statement::Check(names)
            }
            w if is_keyword(w) && w != "wedge" && w != "d" => return Err(self.error(STATEMENT_START)),
            _ => {
                if self.at_atom_start() || self.is_punct('-') {
                    Statement::Observable(self.expr()?)
                } else {
                    return Err(self.error(STATEMENT_START));
                }
            }
        };
        self.expect_punct(';')?;
        Ok(Item { stmt, at })
    }

    /// `(e1, …, en)` possibly empty.
    fn list(&mut self) -> PResult<Vec<Expr>> {
        self.expect_punct('(')?;
        let mut out = Vec::new();
        if self.is_punct(')') {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if self.is_punct(',') {
                self.bump();
            } else {
                self.expect_punct(')').map_err(|d| d.expecting(&["`,`", "`)`"]))?;
                return Ok(out);
            }
        }
    }

    /// A parenthesised list directly followed by `;` is a component tuple;
    /// anything else is an expression.
    fn vector_rhs(&mut self) -> PResult<VectorRhs> {
        if self.is_punct('(') {
            let save = self.pos;
            if let Ok(items) = self.list() {
                if self.is_punct(';') && !items.is_empty() {
                    return Ok(VectorRhs::Components(items));
                }
            }
            self.pos = save;
        }
        Ok(VectorRhs::Expr(self.expr()?))
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let at = self.peek().at;
            return Err(Diagnostic::new(at.line, at.column, "expression nested too deeply"));
        }
        Ok(())
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let at = self.peek().at;
            let kind = if self.is_punct('+') {
                self.bump();
                ExprKind::Add(Box::new(lhs), Box::new(self.term()?))
            } else if self.is_punct('-') {
                self.bump();
                ExprKind::Sub(Box::new(lhs), Box::new(self.term()?))
            } else {
                break;
            };
            lhs = Expr::at(kind, at);
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn at_atom_start(&self) -> bool {
        match &self.peek().tok {
            Tok::Ident(s) => !is_keyword(s) || s == "wedge",
            Tok::Int(_) | Tok::Partial(_) => true,
            Tok::Punct('(') => true,
            _ => false,
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let at = self.peek().at;
            let kind = if self.is_punct('*') {
                self.bump();
                ExprKind::Mul(Box::new(lhs), Box::new(self.unary()?))
            } else if self.is_punct('/') {
                self.bump();
                ExprKind::Div(Box::new(lhs), Box::new(self.unary()?))
            } else if self.at_atom_start() {
                ExprKind::Mul(Box::new(lhs), Box::new(self.power()?))
            } else {
                break;
            };
            lhs = Expr::at(kind, at);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.is_punct('-') {
            let at = self.bump().at;
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::at(ExprKind::Neg(Box::new(inner)), at));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if self.is_punct('^') {
            let at = self.bump().at;
            let e = self.small_int().map_err(|d| d.expecting(&["integer exponent"]))?;
            return Ok(Expr::at(ExprKind::Pow(Box::new(base), e), at));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        let kind = match &t.tok {
            Tok::Int(n) => {
                self.bump();
                ExprKind::Num(n.clone())
            }
            Tok::Partial(s) => {
                self.bump();
                ExprKind::Partial(s.clone())
            }
            Tok::Ident(s) if s == "wedge" => {
                self.bump();
                self.enter()?;
                let args = self.list()?;
                self.depth -= 1;
                if args.is_empty() {
                    return Err(Diagnostic::new(t.at.line, t.at.column, "wedge needs at least one factor"));
                }
                ExprKind::Wedge(args)
            }
            Tok::Ident(s) if !is_keyword(s) => {
                self.bump();
                ExprKind::Ident(s.clone())
            }
            Tok::Punct('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect_punct(')')?;
                return Ok(inner);
            }
            _ => return Err(self.error(ATOM_START)),
        };
        Ok(Expr::at(kind, t.at))
    }
}

pub fn parse_system(text: &str) -> Result<SystemDocument, Diagnostic> {
    let toks = lex(text)?;
    Parser { toks, pos: 0, depth: 0 }.document()
}

/// Parses a single expression spanning the whole input.
pub fn parse_expression(text: &str) -> Result<Expr, Diagnostic> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, depth: 0 };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}
