use std::collections::{BTreeMap, HashMap};

use crate::algebra::{rat, ChartRef, Poly, VarKind};
use crate::error::{Error, Result};

/// Fundamental brackets between generators; the full bracket is their
/// extension by the graded Leibniz rule,
/// `(F,G) = Σ ∂^R_u F · (u,v) · ∂^L_v G`.
#[derive(Debug, Clone)]
pub struct BracketTable {
    chart: ChartRef,
    /// 1 for the odd bracket, 0 for the even one.
    pub parity_shift: u8,
    pub ghost_shift: i32,
    entries: HashMap<usize, Vec<(usize, Poly)>>,
}

/// Connection coefficients `A^B_{iA}` on the ghost bundles, keyed by
/// `(target fibre B, base coordinate i, source fibre A)` chart indices.
#[derive(Debug, Clone, Default)]
pub struct ConnectionData {
    pub coefficients: BTreeMap<(usize, usize, usize), Poly>,
}

impl ConnectionData {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, target: usize, base: usize, source: usize, value: Poly) {
        self.coefficients.insert((target, base, source), value);
    }

    pub fn validate(&self, chart: &ChartRef) -> Result<()> {
        for ((b, i, a), value) in &self.coefficients {
            let (kb, ka) = (chart.var(*b).kind, chart.var(*a).kind);
            let fibre = |k| matches!(k, VarKind::GhostFiber | VarKind::AntighostFiber);
            if !fibre(kb) || kb != ka || chart.var(*i).kind != VarKind::Base {
                return Err(Error::InvalidSpec(format!(
                    "connection entry ({}, {}, {}) must pair a base coordinate with two fibre variables of one bundle",
                    chart.var(*b).name,
                    chart.var(*i).name,
                    chart.var(*a).name
                )));
            }
            if let Some(v) = value.uses(|v| v.kind != VarKind::Base) {
                return Err(Error::InvalidSpec(format!(
                    "connection coefficient depends on non-base variable `{}`",
                    v.name
                )));
            }
        }
        Ok(())
    }
}

impl BracketTable {
    fn empty(chart: &ChartRef, parity_shift: u8, ghost_shift: i32) -> Self {
        BracketTable {
            chart: chart.clone(),
            parity_shift,
            ghost_shift,
            entries: HashMap::new(),
        }
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    /// Sets `(u,v)` and the graded-antisymmetric partner `(v,u)`.
    pub fn set(&mut self, u: usize, v: usize, value: Poly) {
        if value.is_zero() {
            return;
        }
        let s = self.parity_shift as usize;
        let eu = self.chart.is_odd(u) as usize;
        let ev = self.chart.is_odd(v) as usize;
        let sign = if ((eu + s) * (ev + s)) % 2 == 0 { rat(-1) } else { rat(1) };
        let reverse = value.scale(&sign);
        self.insert(u, v, value);
        if u != v {
            self.insert(v, u, reverse);
        }
    }

    fn insert(&mut self, u: usize, v: usize, value: Poly) {
        let row = self.entries.entry(u).or_default();
        row.retain(|(w, _)| *w != v);
        row.push((v, value));
        row.sort_by_key(|(w, _)| *w);
    }

    pub fn get(&self, u: usize, v: usize) -> Poly {
        self.entries
            .get(&u)
            .and_then(|row| row.iter().find(|(w, _)| *w == v))
            .map(|(_, p)| p.clone())
            .unwrap_or_else(|| Poly::zero(&self.chart))
    }

    /// Every nonzero fundamental bracket, ordered by generator index.
    pub fn entries(&self) -> Vec<(usize, usize, &Poly)> {
        let mut out: Vec<_> = self
            .entries
            .iter()
            .flat_map(|(u, row)| row.iter().map(move |(v, p)| (*u, *v, p)))
            .collect();
        out.sort_by_key(|(u, v, _)| (*u, *v));
        out
    }

    /// The canonical odd bracket, `(φ*_A, φ^A) = 1`.
    pub fn odd_flat(chart: &ChartRef) -> Self {
        let mut t = Self::empty(chart, 1, -1);
        for field in chart.fields() {
            t.set(chart.star(field), field, Poly::one(chart));
        }
        t
    }

    /// The odd bracket written in long momenta
    /// `x*_i = X*_i + z^A A^B_{iA} z*_B`, where `X*_i` are canonical.
    /// Curvature entries `(x*_i, x*_j)` come out of the computation.
    pub fn odd_twisted(chart: &ChartRef, conn: &ConnectionData) -> Result<Self> {
        conn.validate(chart)?;
        let flat = Self::odd_flat(chart);
        let mut long: HashMap<usize, Poly> = HashMap::new();
        for ((target, base, source), a) in &conn.coefficients {
            let star_i = chart.star(*base);
            let term = &(&Poly::var(chart, *source) * a) * &Poly::var(chart, chart.star(*target));
            let e = long.entry(star_i).or_insert_with(|| Poly::var(chart, star_i));
            *e += &term;
        }
        let expr = |u: usize| long.get(&u).cloned().unwrap_or_else(|| Poly::var(chart, u));
        let mut t = Self::empty(chart, 1, -1);
        let vars: Vec<usize> = chart.cotangent_vars().collect();
        for (k, &u) in vars.iter().enumerate() {
            for &v in &vars[k..] {
                let value = flat.apply(&expr(u), &expr(v));
                if let Some(bad) = value.uses(|w| w.kind == VarKind::Momentum && w.partner.map(|p| p < chart.n_base()).unwrap_or(false)) {
                    return Err(Error::InvalidSpec(format!(
                        "twisted bracket entry depends on canonical momentum `{}`",
                        bad.name
                    )));
                }
                t.set(u, v, value);
            }
        }
        Ok(t)
    }

    /// The even bracket of ghost degree 0 on the odd tangent bundle:
    /// `{dφ*_A, φ^A} = 1`, `{dφ^A, φ*_A} = −1`.
    pub fn even(chart: &ChartRef) -> Self {
        let mut t = Self::empty(chart, 0, 0);
        for field in chart.fields() {
            let star = chart.star(field);
            t.set(chart.velocity(star), field, Poly::one(chart));
            t.set(chart.velocity(field), star, Poly::constant(chart, rat(-1)));
        }
        t
    }

    /// Extends the table to arbitrary polynomials.
    pub fn apply(&self, f: &Poly, g: &Poly) -> Poly {
        let chart = &self.chart;
        let mut out = Poly::zero(chart);
        if f.is_zero() || g.is_zero() {
            return out;
        }
        let mut used: Vec<usize> = f.terms().flat_map(|(m, _)| m.iter().map(|(v, _)| *v as usize)).collect();
        used.sort_unstable();
        used.dedup();
        let mut dg_cache: HashMap<usize, Poly> = HashMap::new();
        for u in used {
            let Some(row) = self.entries.get(&u) else { continue };
            let df = f.right_derivative(u);
            for (v, w) in row {
                let dg = dg_cache.entry(*v).or_insert_with(|| g.left_derivative(*v));
                if dg.is_zero() {
                    continue;
                }
                out += &(&(&df * w) * &*dg);
            }
        }
        out
    }
}
