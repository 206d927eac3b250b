//! Finite monomial bases cut out by grading targets and a bound on the
//! base-coordinate degree, and exact solving in the span of a list of
//! polynomials.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{ChartRef, GradingKind, Monomial, Poly, VarKind};
use crate::error::{Error, Result};
use crate::linalg::{SparseMatrix, SparseRow};

/// Grading targets a basis monomial must meet exactly.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Targets(pub Vec<(GradingKind, i64)>);

impl Targets {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, kind: GradingKind, value: i64) -> Self {
        self.0.retain(|(k, _)| *k != kind);
        self.0.push((kind, value));
        self
    }

    pub fn get(&self, kind: GradingKind) -> Option<i64> {
        self.0.iter().find(|(k, _)| *k == kind).map(|(_, v)| *v)
    }
}

/// All monomials in `vars` meeting `targets` whose base-coordinate degree
/// is at most `max_base_degree`, in canonical order.
///
/// Variables with an undefined grading for one of the targets are skipped.
/// Every even non-base variable must be bounded by a target grading that is
/// positive on it and nonnegative on all of `vars`; otherwise the basis is
/// infinite and [`Error::UnboundedDegree`] is returned.
pub fn enumerate(chart: &ChartRef, vars: &[usize], targets: &Targets, max_base_degree: u32) -> Result<Vec<Monomial>> {
    let kinds: Vec<(GradingKind, i64)> = targets.0.clone();
    let usable: Vec<usize> = vars
        .iter()
        .copied()
        .filter(|v| kinds.iter().all(|(k, _)| chart.var(*v).grading.get(*k).is_some()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let grade = |v: usize, k: GradingKind| chart.var(v).grading.get(k).unwrap_or(0);
    let nonneg: Vec<bool> = kinds
        .iter()
        .map(|(k, _)| *k != GradingKind::Parity && usable.iter().all(|v| grade(*v, *k) >= 0))
        .collect();

    let mut caps = Vec::with_capacity(usable.len());
    for &v in &usable {
        let var = chart.var(v);
        let cap = if var.is_odd() {
            1
        } else if var.kind == VarKind::Base {
            max_base_degree
        } else {
            let bound = kinds
                .iter()
                .zip(&nonneg)
                .filter(|((k, _), ok)| **ok && grade(v, *k) > 0)
                .map(|((k, t), _)| (*t).max(0) / grade(v, *k))
                .min();
            match bound {
                Some(b) => b as u32,
                None => return Err(Error::UnboundedDegree(var.name.clone())),
            }
        };
        caps.push(cap);
    }

    let mut out = Vec::new();
    let mut current: Monomial = Vec::new();
    let mut sums = vec![0i64; kinds.len()];
    walk(
        chart, &usable, &caps, &kinds, &nonneg, max_base_degree, 0, 0, &mut sums, &mut current, &mut out,
    );
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    chart: &ChartRef,
    vars: &[usize],
    caps: &[u32],
    kinds: &[(GradingKind, i64)],
    nonneg: &[bool],
    max_base: u32,
    pos: usize,
    base_deg: u32,
    sums: &mut [i64],
    current: &mut Monomial,
    out: &mut Vec<Monomial>,
) {
    if pos == vars.len() {
        let hit = kinds.iter().zip(sums.iter()).all(|((k, t), s)| match k {
            GradingKind::Parity => (s - t).rem_euclid(2) == 0,
            _ => s == t,
        });
        if hit {
            out.push(current.clone());
        }
        return;
    }
    let v = vars[pos];
    let var = chart.var(v);
    let is_base = var.kind == VarKind::Base;
    for e in 0..=caps[pos] {
        if is_base && base_deg + e > max_base {
            break;
        }
        let mut over = false;
        for (i, (k, t)) in kinds.iter().enumerate() {
            let g = var.grading.get(*k).unwrap_or(0) * e as i64;
            sums[i] += g;
            if nonneg[i] && sums[i] > *t {
                over = true;
            }
        }
        if !over {
            if e > 0 {
                current.push((v as u32, e));
            }
            walk(
                chart,
                vars,
                caps,
                kinds,
                nonneg,
                max_base,
                pos + 1,
                base_deg + if is_base { e } else { 0 },
                sums,
                current,
                out,
            );
            if e > 0 {
                current.pop();
            }
        }
        for (i, (k, _)) in kinds.iter().enumerate() {
            sums[i] -= var.grading.get(*k).unwrap_or(0) * e as i64;
        }
        if over {
            break;
        }
    }
}

pub fn monomial_poly(chart: &ChartRef, m: &Monomial) -> Poly {
    Poly::from_terms(chart, [(m.clone(), crate::algebra::rat(1))])
}

/// Indexes the monomials of a family of polynomials as matrix rows.
#[derive(Debug, Default, Clone)]
pub struct MonomialIndex {
    index: BTreeMap<Monomial, usize>,
    order: Vec<Monomial>,
}

impl MonomialIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_basis(basis: &[Monomial]) -> Self {
        let mut idx = Self::new();
        for m in basis {
            idx.insert(m);
        }
        idx
    }

    pub fn insert(&mut self, m: &Monomial) -> usize {
        if let Some(i) = self.index.get(m) {
            return *i;
        }
        let i = self.order.len();
        self.index.insert(m.clone(), i);
        self.order.push(m.clone());
        i
    }

    pub fn get(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.order
    }

    /// Coordinates of `p`, registering unseen monomials.
    pub fn coordinates(&mut self, p: &Poly) -> SparseRow {
        p.terms().map(|(m, c)| (self.insert(m), c.clone())).collect()
    }

    pub fn to_poly(&self, chart: &ChartRef, coords: &SparseRow) -> Poly {
        Poly::from_terms(chart, coords.iter().map(|(i, c)| (self.order[*i].clone(), c.clone())))
    }
}

/// Coefficients `x` with `Σ x_j images[j] = target`, free ones set to zero.
pub fn express(target: &Poly, images: &[Poly]) -> Option<SparseRow> {
    let mut idx = MonomialIndex::new();
    let columns: Vec<SparseRow> = images.iter().map(|p| idx.coordinates(p)).collect();
    let b = idx.coordinates(target);
    SparseMatrix::from_columns(idx.len(), &columns).solve(&b)
}

/// `Σ x_j basis[j]` for a coordinate vector over `basis`.
pub fn combine(chart: &ChartRef, basis: &[Poly], x: &SparseRow) -> Poly {
    let mut out = Poly::zero(chart);
    for (j, c) in x {
        out += &basis[*j].scale(c);
    }
    out
}
