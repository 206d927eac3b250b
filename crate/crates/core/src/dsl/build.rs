use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use super::ast::*;
use super::Diagnostic;
use crate::algebra::{rat, ChartRef, Poly, Rational};
use crate::bracket::ConnectionData;
use crate::gauge::{GaugeSystem, GaugeSystemSpec, StructureWitnesses};

const MAX_EXPONENT: u32 = 64;

/// Checks a document may request.
pub const CHECKS: &[&str] = &["structure", "jacobi", "projectible", "master", "lift", "forms", "observables"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_res: u32,
    pub deg: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_res: 3, deg: 3 }
    }
}

/// A document turned into a validated gauge system plus the auxiliary
/// objects it names.
#[derive(Debug, Clone)]
pub struct LoadedSystem {
    pub system: GaugeSystem,
    pub constraint_names: Vec<String>,
    pub generator_names: Vec<String>,
    pub bivector_name: Option<String>,
    pub dynamics_name: Option<String>,
    pub vectors: Vec<(String, Poly)>,
    pub forms: Vec<(String, Poly)>,
    pub observables: Vec<Poly>,
    pub bounds: Bounds,
    pub checks: Vec<String>,
    names: HashMap<String, Poly>,
}

impl LoadedSystem {
    pub fn chart(&self) -> &ChartRef {
        self.system.chart()
    }

    /// Evaluates an expression against the chart and the document's names.
    pub fn eval(&self, text: &str) -> Result<Poly, Diagnostic> {
        let e = super::parse_expression(text)?;
        let env = Env {
            chart: self.chart().clone(),
            names: self.names.clone(),
        };
        env.eval(&e)
    }

    /// A named definition of the document.
    pub fn named(&self, name: &str) -> Option<&Poly> {
        self.names.get(name)
    }
}

#[derive(Default)]
struct Draft {
    constraint_names: Vec<String>,
    generator_names: Vec<String>,
    bivector_name: Option<String>,
    dynamics_name: Option<String>,
    vectors: Vec<(String, Poly)>,
    forms: Vec<(String, Poly)>,
    observables: Vec<Poly>,
    bounds: Bounds,
    checks: Vec<String>,
}

fn diag(at: Pos, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(at.line.max(1), at.column.max(1), msg)
}

struct Env {
    chart: ChartRef,
    names: HashMap<String, Poly>,
}

impl Env {
    fn define(&mut self, at: Pos, name: &str, value: Poly) -> Result<(), Diagnostic> {
        if self.chart.lookup(name).is_ok() {
            return Err(diag(at, format!("`{name}` clashes with a variable of the chart")));
        }
        if self.names.insert(name.to_string(), value).is_some() {
            return Err(diag(at, format!("`{name}` is defined twice")));
        }
        Ok(())
    }

    fn eval(&self, e: &Expr) -> Result<Poly, Diagnostic> {
        let ch = &self.chart;
        let bin = |l: &Expr, r: &Expr| Ok::<_, Diagnostic>((self.eval(l)?, self.eval(r)?));
        Ok(match &e.kind {
            ExprKind::Num(n) => Poly::constant(ch, Rational::from_integer(BigInt::from(n.clone()))),
            ExprKind::Ident(s) => match (ch.lookup(s), self.names.get(s)) {
                (Ok(v), _) => Poly::var(ch, v),
                (_, Some(p)) => p.clone(),
                _ => return Err(diag(e.at, format!("unknown symbol `{s}`"))),
            },
            ExprKind::Partial(s) => match ch.lookup(s) {
                Ok(v) if v < ch.n_base() => Poly::var(ch, ch.star(v)),
                _ => return Err(diag(e.at, format!("`d/d{s}` needs a declared coordinate `{s}`"))),
            },
            ExprKind::Neg(x) => -&self.eval(x)?,
            ExprKind::Add(l, r) => {
                let (a, b) = bin(l, r)?;
                &a + &b
            }
            ExprKind::Sub(l, r) => {
                let (a, b) = bin(l, r)?;
                &a - &b
            }
            ExprKind::Mul(l, r) => {
                let (a, b) = bin(l, r)?;
                &a * &b
            }
            ExprKind::Div(l, r) => {
                let (a, b) = bin(l, r)?;
                let c = constant_of(&b).ok_or_else(|| diag(r.at, "division only by nonzero constants"))?;
                a.scale(&(rat(1) / c))
            }
            ExprKind::Pow(b, n) => {
                let base = self.eval(b)?;
                if *n > MAX_EXPONENT {
                    return Err(diag(e.at, format!("exponent above {MAX_EXPONENT}")));
                }
                if *n >= 2 && !base.is_zero() && base.parity().map_or(true, |p| p == 1) {
                    return Err(diag(e.at, "power of an odd or mixed-parity expression"));
                }
                base.pow(*n)
            }
            ExprKind::Wedge(args) => {
                // A₁∧…∧A_k is stored as A_k⋯A₁
                let mut out = Poly::one(ch);
                for a in args {
                    out = &self.eval(a)? * &out;
                }
                out
            }
        })
    }

    fn vector(&self, rhs: &VectorRhs, at: Pos) -> Result<Poly, Diagnostic> {
        match rhs {
            VectorRhs::Expr(e) => self.eval(e),
            VectorRhs::Components(items) => {
                if items.len() != self.chart.n_base() {
                    return Err(diag(
                        at,
                        format!("expected {} components, found {}", self.chart.n_base(), items.len()),
                    ));
                }
                let mut out = Poly::zero(&self.chart);
                for (i, c) in items.iter().enumerate() {
                    out += &(&self.eval(c)? * &Poly::var(&self.chart, self.chart.star(i)));
                }
                Ok(out)
            }
        }
    }
}

fn constant_of(p: &Poly) -> Option<Rational> {
    if p.is_zero() {
        return None;
    }
    let mut terms = p.terms();
    let (m, c) = terms.next()?;
    (m.is_empty() && terms.next().is_none()).then(|| c.clone())
}

/// Builds the gauge system a document describes.
pub fn build_system(doc: &SystemDocument) -> Result<LoadedSystem, Diagnostic> {
    let mut coords = Vec::new();
    let (mut k, mut m) = (0, 0);
    let mut first_use: Option<Pos> = None;
    for item in &doc.items {
        match &item.stmt {
            Statement::Coords(decls) => {
                if let Some(p) = first_use {
                    return Err(diag(item.at, format!("coordinates must be declared before line {}", p.line)));
                }
                for d in decls {
                    if d.parity == Some(1) {
                        return Err(diag(item.at, format!("base coordinate `{}` must be even", d.name)));
                    }
                    if coords.contains(&d.name) {
                        return Err(diag(item.at, format!("coordinate `{}` declared twice", d.name)));
                    }
                    coords.push(d.name.clone());
                }
            }
            Statement::Constraint { .. } => k += 1,
            Statement::Gauge { .. } => m += 1,
            _ => {}
        }
        if !matches!(item.stmt, Statement::Coords(_)) && first_use.is_none() {
            first_use = Some(item.at);
        }
    }
    let mut spec = GaugeSystemSpec::empty(&coords, k, m).map_err(|e| diag(Pos::new(1, 1), e.to_string()))?;
    let mut env = Env {
        chart: spec.chart.clone(),
        names: HashMap::new(),
    };
    let mut out = Draft::default();
    let mut witnesses: BTreeMap<(usize, usize), (Vec<Poly>, Vec<Poly>)> = BTreeMap::new();
    let mut connection: Option<ConnectionData> = None;
    for item in &doc.items {
        let at = item.at;
        match &item.stmt {
            Statement::Coords(_) => {}
            Statement::Vector { name, rhs } => {
                let v = env.vector(rhs, at)?;
                env.define(at, name, v.clone())?;
                out.vectors.push((name.clone(), v));
            }
            Statement::Gauge { name, rhs } => {
                let v = env.vector(rhs, at)?;
                env.define(at, name, v.clone())?;
                spec.generators[out.generator_names.len()] = v;
                out.generator_names.push(name.clone());
            }
            Statement::Constraint { name, value } => {
                let v = env.eval(value)?;
                env.define(at, name, v.clone())?;
                spec.constraints[out.constraint_names.len()] = v;
                out.constraint_names.push(name.clone());
            }
            Statement::Bivector { name, value } => {
                if spec.bivector.is_some() {
                    return Err(diag(at, "only one bivector may be given"));
                }
                let v = env.eval(value)?;
                env.define(at, name, v.clone())?;
                spec.bivector = Some(v);
                out.bivector_name = Some(name.clone());
            }
            Statement::Dynamics { name, rhs } => {
                if spec.dynamics.is_some() {
                    return Err(diag(at, "only one dynamics vector field may be given"));
                }
                let v = env.vector(rhs, at)?;
                env.define(at, name, v.clone())?;
                spec.dynamics = Some(v);
                out.dynamics_name = Some(name.clone());
            }
            Statement::Form { name, value } => {
                let v = env.eval(value)?;
                env.define(at, name, v.clone())?;
                out.forms.push((name.clone(), v));
            }
            Statement::Observable(e) => out.observables.push(env.eval(e)?),
            Statement::Connection(entries) => {
                let conn = connection.get_or_insert_with(ConnectionData::new);
                let ch = &env.chart;
                for e in entries {
                    let idx = |s: &str| ch.lookup(s).map_err(|_| diag(e.value.at, format!("unknown variable `{s}`")));
                    let (t, b, s) = (idx(&e.target)?, idx(&e.base)?, idx(&e.source)?);
                    conn.insert(t, b, s, env.eval(&e.value)?);
                }
            }
            Statement::Structure { left, right, f, x } => {
                let pos = |s: &str| {
                    out.generator_names
                        .iter()
                        .position(|g| g == s)
                        .ok_or_else(|| diag(at, format!("`{s}` is not a gauge generator declared above")))
                };
                let (a, b) = (pos(left)?, pos(right)?);
                if f.len() != m || x.len() != k {
                    return Err(diag(at, format!("structure needs {m} f-entries and {k} X-entries")));
                }
                let fs = f.iter().map(|e| env.eval(e)).collect::<Result<Vec<_>, _>>()?;
                let xs = x.iter().map(|e| env.eval(e)).collect::<Result<Vec<_>, _>>()?;
                witnesses.insert((a, b), (fs, xs));
            }
            Statement::Bounds(entries) => {
                for (key, v) in entries {
                    match key.as_str() {
                        "max_res" => out.bounds.max_res = *v,
                        "deg" => out.bounds.deg = *v,
                        _ => return Err(diag(at, format!("unknown bound `{key}` (expected max_res or deg)"))),
                    }
                }
            }
            Statement::Check(names) => {
                for n in names {
                    if !CHECKS.contains(&n.as_str()) {
                        return Err(diag(at, format!("unknown check `{n}`")).expecting(CHECKS));
                    }
                    if !out.checks.contains(n) {
                        out.checks.push(n.clone());
                    }
                }
            }
        }
    }
    if !witnesses.is_empty() {
        spec.witnesses = Some(StructureWitnesses { pairs: witnesses });
    }
    spec.connection = connection;
    let end = doc.items.last().map_or(Pos::new(1, 1), |i| i.at);
    let system = GaugeSystem::new(spec).map_err(|e| diag(end, e.to_string()))?;
    Ok(LoadedSystem {
        system,
        constraint_names: out.constraint_names,
        generator_names: out.generator_names,
        bivector_name: out.bivector_name,
        dynamics_name: out.dynamics_name,
        vectors: out.vectors,
        forms: out.forms,
        observables: out.observables,
        bounds: out.bounds,
        checks: out.checks,
        names: env.names,
    })
}
