use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::chart::{ChartRef, GradedVariable, GradingKind, Level, VarKind};
use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Sorted `(variable index, exponent)` pairs; odd variables have exponent 1.
pub type Monomial = Vec<(u32, u32)>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Polynomial in graded variables with exact rational coefficients, kept in
/// canonical form: each monomial lists its factors in chart order and the
/// coefficient absorbs the Koszul sign of the reordering.
#[derive(Clone)]
pub struct Poly {
    chart: ChartRef,
    terms: BTreeMap<Monomial, Rational>,
}

/// One product of named factors in source order, before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTerm {
    pub coeff: Rational,
    pub factors: Vec<(String, u32)>,
}

/// Multiplies two canonical monomials. Returns `None` when an odd variable
/// repeats, otherwise whether the sign flips and the merged monomial.
pub(crate) fn mul_monomials(odd: impl Fn(usize) -> bool, a: &[(u32, u32)], b: &[(u32, u32)]) -> Option<(bool, Monomial)> {
    let total_odd_a = a.iter().filter(|(v, _)| odd(*v as usize)).count();
    let mut consumed_odd_a = 0usize;
    let mut flips = 0usize;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            if odd(a[i].0 as usize) {
                consumed_odd_a += 1;
            }
            out.push(a[i]);
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            if odd(b[j].0 as usize) {
                flips += total_odd_a - consumed_odd_a;
            }
            out.push(b[j]);
            j += 1;
        } else {
            if odd(a[i].0 as usize) {
                return None;
            }
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    Some((flips % 2 == 1, out))
}

impl Poly {
    pub fn zero(chart: &ChartRef) -> Poly {
        Poly {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(chart: &ChartRef, c: Rational) -> Poly {
        let mut p = Poly::zero(chart);
        p.add_term(Vec::new(), c);
        p
    }

    pub fn one(chart: &ChartRef) -> Poly {
        Poly::constant(chart, Rational::one())
    }

    pub fn var(chart: &ChartRef, idx: usize) -> Poly {
        let mut p = Poly::zero(chart);
        p.add_term(vec![(idx as u32, 1)], Rational::one());
        p
    }

    pub fn named(chart: &ChartRef, name: &str) -> Result<Poly> {
        Ok(Poly::var(chart, chart.lookup(name)?))
    }

    /// Builds a polynomial from already-canonical monomials.
    pub fn from_terms(chart: &ChartRef, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Poly {
        let mut p = Poly::zero(chart);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn same_chart(&self, other: &Poly) -> bool {
        Arc::ptr_eq(&self.chart, &other.chart) || *self.chart == *other.chart
    }

    pub(crate) fn check_chart(&self, other: &Poly) -> Result<()> {
        if self.same_chart(other) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.chart);
        }
        Poly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(&self.chart);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Graded left derivative `∂^L/∂v`.
    pub fn left_derivative(&self, v: usize) -> Poly {
        self.derivative(v, true)
    }

    /// Graded right derivative `∂^R/∂v`; on homogeneous `F` it equals
    /// `(−1)^{ε(v)(ε(F)+1)} ∂^L_v F`.
    pub fn right_derivative(&self, v: usize) -> Poly {
        self.derivative(v, false)
    }

    fn derivative(&self, v: usize, left: bool) -> Poly {
        let odd_v = self.chart.is_odd(v);
        let mut out = Poly::zero(&self.chart);
        for (m, c) in &self.terms {
            let Some(pos) = m.iter().position(|(i, _)| *i as usize == v) else {
                continue;
            };
            let mut nm = m.clone();
            if odd_v {
                let range = if left { &m[..pos] } else { &m[pos + 1..] };
                let passes = range.iter().filter(|(i, _)| self.chart.is_odd(*i as usize)).count();
                nm.remove(pos);
                let c = if passes % 2 == 1 { -c.clone() } else { c.clone() };
                out.add_term(nm, c);
            } else {
                let e = m[pos].1;
                if e == 1 {
                    nm.remove(pos);
                } else {
                    nm[pos].1 = e - 1;
                }
                out.add_term(nm, c * rat(e as i64));
            }
        }
        out
    }

    /// Replaces variables by polynomials; every replacement must have the
    /// parity of the variable it replaces.
    pub fn substitute(&self, assignment: &HashMap<usize, Poly>) -> Result<Poly> {
        for (v, p) in assignment {
            self.check_chart(p)?;
            let want = self.chart.var(*v).grading.parity as i64;
            if !p.is_zero() && p.grading_of(GradingKind::Parity).ok() != Some(want) {
                return Err(Error::ParityMismatch(self.chart.var(*v).name.clone()));
            }
        }
        let mut out = Poly::zero(&self.chart);
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(&self.chart, c.clone());
            for (v, e) in m {
                let factor = match assignment.get(&(*v as usize)) {
                    Some(p) => p.pow(*e),
                    None => {
                        let mut f = Poly::zero(&self.chart);
                        f.add_term(vec![(*v, *e)], Rational::one());
                        f
                    }
                };
                acc = &acc * &factor;
                if acc.is_zero() {
                    break;
                }
            }
            out += &acc;
        }
        Ok(out)
    }

    /// Sets every variable matching `kill` to zero.
    pub fn restrict(&self, kill: impl Fn(&GradedVariable) -> bool) -> Poly {
        Poly {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.iter().any(|(v, _)| kill(self.chart.var(*v as usize))))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Restriction to the extended manifold: all odd momenta `φ*` set to zero.
    pub fn restrict_to_extended(&self) -> Poly {
        self.restrict(|v| v.level() != Level::Extended)
    }

    /// Restriction to the Lagrangian locus `φ* = 0 = dφ*`.
    pub fn restrict_to_lagrangian(&self) -> Poly {
        self.restrict(|v| v.is_starred())
    }

    /// Restriction to the odd cotangent level: all velocities set to zero.
    pub fn restrict_to_cotangent(&self) -> Poly {
        self.restrict(|v| v.level() == Level::Tangent)
    }

    pub fn monomial_grading(&self, m: &Monomial, kind: GradingKind) -> Result<i64> {
        let mut total = 0i64;
        for (v, e) in m {
            let var = self.chart.var(*v as usize);
            let g = var.grading.get(kind).ok_or_else(|| Error::GradingNotApplicable {
                grading: kind.name(),
                var: var.name.clone(),
            })?;
            total += g * *e as i64;
        }
        if kind == GradingKind::Parity {
            total = total.rem_euclid(2);
        }
        Ok(total)
    }

    /// Common value of a grading over all monomials; zero has every grading.
    pub fn grading_of(&self, kind: GradingKind) -> Result<i64> {
        let mut value = None;
        for m in self.terms.keys() {
            let g = self.monomial_grading(m, kind)?;
            match value {
                None => value = Some(g),
                Some(v) if v != g => return Err(Error::Inhomogeneous(kind.name())),
                _ => {}
            }
        }
        Ok(value.unwrap_or(0))
    }

    pub fn parity(&self) -> Result<u8> {
        Ok(self.grading_of(GradingKind::Parity)? as u8)
    }

    /// Splits into homogeneous components of one grading.
    pub fn components(&self, kind: GradingKind) -> Result<BTreeMap<i64, Poly>> {
        let mut out: BTreeMap<i64, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let g = self.monomial_grading(m, kind)?;
            out.entry(g)
                .or_insert_with(|| Poly::zero(&self.chart))
                .add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Component of a single grading value (zero if absent).
    pub fn component(&self, kind: GradingKind, value: i64) -> Result<Poly> {
        Ok(self
            .components(kind)?
            .remove(&value)
            .unwrap_or_else(|| Poly::zero(&self.chart)))
    }

    /// Total degree in the base coordinates of one monomial.
    pub fn base_degree_of(&self, m: &Monomial) -> u32 {
        m.iter()
            .filter(|(v, _)| self.chart.var(*v as usize).kind == VarKind::Base)
            .map(|(_, e)| *e)
            .sum()
    }

    pub fn max_base_degree(&self) -> u32 {
        self.terms.keys().map(|m| self.base_degree_of(m)).max().unwrap_or(0)
    }

    pub fn uses(&self, pred: impl Fn(&GradedVariable) -> bool) -> Option<&GradedVariable> {
        self.terms
            .keys()
            .flat_map(|m| m.iter())
            .map(|(v, _)| self.chart.var(*v as usize))
            .find(|v| pred(v))
    }

    /// Checks that no variable above `level` appears.
    pub fn check_level(&self, level: Level) -> Result<()> {
        match self.uses(|v| v.level() > level) {
            Some(v) => Err(Error::LevelMismatch {
                var: v.name.clone(),
                level: level.name(),
            }),
            None => Ok(()),
        }
    }

    /// Re-expresses this polynomial over another chart by variable name.
    pub fn transfer(&self, target: &ChartRef) -> Result<Poly> {
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(target, c.clone());
            for (v, e) in m {
                let idx = target.lookup(&self.chart.var(*v as usize).name)?;
                acc = &acc * &Poly::var(target, idx).pow(*e);
            }
            out += &acc;
        }
        Ok(out)
    }
}

/// Builds the canonical polynomial of a list of raw products.
pub fn normalize(chart: &ChartRef, raw: &[RawTerm]) -> Result<Poly> {
    let mut out = Poly::zero(chart);
    for term in raw {
        let mut acc = Poly::constant(chart, term.coeff.clone());
        for (name, e) in &term.factors {
            let idx = chart.lookup(name)?;
            acc = &acc * &Poly::var(chart, idx).pow(*e);
        }
        out += &acc;
    }
    Ok(out)
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.same_chart(other) && self.terms == other.terms
    }
}

impl<'a> Add<&'a Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> AddAssign<&'a Poly> for Poly {
    fn add_assign(&mut self, rhs: &'a Poly) {
        debug_assert!(self.same_chart(rhs));
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> SubAssign<&'a Poly> for Poly {
    fn sub_assign(&mut self, rhs: &'a Poly) {
        debug_assert!(self.same_chart(rhs));
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<'a> Sub<&'a Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl<'a> Mul<&'a Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        debug_assert!(self.same_chart(rhs));
        let chart = &self.chart;
        let mut out = Poly::zero(chart);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                if let Some((flip, m)) = mul_monomials(|i| chart.is_odd(i), ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if flip { -c } else { c });
                }
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly { (&self).$f(&rhs) }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &'a Poly) -> Poly { (&self).$f(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub fn format_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl Poly {
    fn fmt_monomial(&self, m: &Monomial) -> String {
        m.iter()
            .map(|(v, e)| {
                let name = &self.chart.var(*v as usize).name;
                if *e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", self.fmt_monomial(m))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), self.fmt_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
