//! Canonical brackets: the odd bracket of ghost degree −1 on the extended
//! phase space (optionally twisted by a connection), the even bracket of
//! ghost degree 0 on its odd tangent bundle, the Schouten bracket of
//! multivectors, the element Δ and derived brackets.

mod table;
mod vector_field;

pub use table::{BracketTable, ConnectionData};
pub use vector_field::VectorField;

use crate::algebra::{rat, ChartRef, GradingKind, Level, Poly, VarKind};
use crate::error::{Error, Result};

/// Where a derived bracket is restricted after nesting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    /// Odd bracket, then `φ* = 0`.
    Extended,
    /// Even bracket, then `φ* = 0 = dφ*`.
    Lagrangian,
}

/// The bracket structures of one gauge chart.
#[derive(Debug, Clone)]
pub struct Brackets {
    chart: ChartRef,
    odd: BracketTable,
    flat: BracketTable,
    even: BracketTable,
}

impl Brackets {
    pub fn flat(chart: &ChartRef) -> Self {
        let flat = BracketTable::odd_flat(chart);
        Brackets {
            chart: chart.clone(),
            odd: flat.clone(),
            flat,
            even: BracketTable::even(chart),
        }
    }

    pub fn twisted(chart: &ChartRef, conn: &ConnectionData) -> Result<Self> {
        Ok(Brackets {
            odd: BracketTable::odd_twisted(chart, conn)?,
            ..Brackets::flat(chart)
        })
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn odd_table(&self) -> &BracketTable {
        &self.odd
    }

    pub fn even_table(&self) -> &BracketTable {
        &self.even
    }

    fn check(&self, f: &Poly, level: Level) -> Result<()> {
        if !std::sync::Arc::ptr_eq(f.chart(), &self.chart) && **f.chart() != *self.chart {
            return Err(Error::ChartMismatch);
        }
        f.check_level(level)
    }

    /// The odd bracket `(F,G)`; both arguments live on the odd cotangent level.
    pub fn odd(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        self.check(f, Level::Cotangent)?;
        self.check(g, Level::Cotangent)?;
        Ok(self.odd.apply(f, g))
    }

    /// The even bracket `{F,G}` on the odd tangent level.
    pub fn even(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        self.check(f, Level::Tangent)?;
        self.check(g, Level::Tangent)?;
        Ok(self.even.apply(f, g))
    }

    /// The even bracket evaluated term by term from its closed four-term
    /// coordinate expression, with left derivatives throughout. Used to
    /// cross-check the table-driven [`Brackets::even`].
    pub fn even_by_formula(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        self.check(f, Level::Tangent)?;
        self.check(g, Level::Tangent)?;
        let chart = &self.chart;
        let sign = |e: i64| if e.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
        let mut out = Poly::zero(chart);
        for (pf, fp) in f.components(GradingKind::Parity)? {
            for a in chart.fields() {
                let pa = chart.is_odd(a) as i64;
                let (phi, star) = (a, chart.star(a));
                let (dphi, dstar) = (chart.velocity(phi), chart.velocity(star));
                let l = |p: &Poly, v| p.left_derivative(v);
                let first = &(&l(&fp, dstar) * &l(g, phi))
                    + &(&l(&fp, dphi) * &l(g, star)).scale(&sign(pf));
                let second = &(&l(&fp, phi) * &l(g, dstar))
                    - &(&l(&fp, star) * &l(g, dphi)).scale(&sign(pf));
                out += &first.scale(&sign(pa * (pf + 1)));
                out -= &second.scale(&sign(pa * pf));
            }
        }
        Ok(out)
    }

    /// Schouten bracket of multivectors on the base, encoded with `∂_i ↦ x*_i`.
    pub fn schouten(&self, u: &Poly, w: &Poly) -> Result<Poly> {
        for p in [u, w] {
            self.check(p, Level::Cotangent)?;
            let ghost = p.uses(|v| match v.kind {
                VarKind::Base => false,
                VarKind::Momentum => v.partner.map_or(true, |i| i >= self.chart.n_base()),
                _ => true,
            });
            if let Some(v) = ghost {
                return Err(Error::GhostInMultivector(v.name.clone()));
            }
        }
        Ok(self.flat.apply(u, w))
    }

    /// `Δ = Σ (−1)^A dφ^A dφ*_A`, odd with ghost number −1.
    pub fn delta(&self) -> Poly {
        let chart = &self.chart;
        let mut out = Poly::zero(chart);
        for a in chart.fields() {
            let term = &Poly::var(chart, chart.velocity(a)) * &Poly::var(chart, chart.velocity(chart.star(a)));
            if chart.is_odd(a) {
                out -= &term;
            } else {
                out += &term;
            }
        }
        out
    }

    /// `{Δ, F}` for `F` on the odd cotangent level.
    pub fn lift_by_delta(&self, f: &Poly) -> Result<Poly> {
        self.check(f, Level::Cotangent)?;
        Ok(self.even.apply(&self.delta(), f))
    }

    /// Nested bracket `(…(gen, a₁), …, a_k)` restricted to the extended
    /// manifold (odd bracket) or to the Lagrangian locus (even bracket).
    pub fn derived(&self, generator: &Poly, args: &[Poly], restriction: Restriction) -> Result<Poly> {
        if args.is_empty() {
            return Err(Error::EmptyArguments);
        }
        let mut acc = generator.clone();
        for a in args {
            acc = match restriction {
                Restriction::Extended => self.odd(&acc, a)?,
                Restriction::Lagrangian => self.even(&acc, a)?,
            };
        }
        Ok(match restriction {
            Restriction::Extended => acc.restrict_to_extended(),
            Restriction::Lagrangian => acc.restrict_to_lagrangian(),
        })
    }

    /// `Q = (S, −)|_M` as a derivation of functions of the fields `φ^A`.
    pub fn hamiltonian_on_extended(&self, s: &Poly) -> VectorField {
        VectorField::hamiltonian(&self.odd, s, self.chart.fields(), Poly::restrict_to_extended)
    }

    /// `{H, −}|_L` as a derivation of functions of `φ^A` and `dφ^A`.
    pub fn hamiltonian_on_lagrangian(&self, h: &Poly) -> VectorField {
        let chart = &self.chart;
        let domain: Vec<usize> = chart
            .fields()
            .chain(chart.fields().map(|a| chart.velocity(a)))
            .collect();
        VectorField::hamiltonian(&self.even, h, domain, Poly::restrict_to_lagrangian)
    }

    /// The de Rham differential `d = {Δ, −}|_L`.
    pub fn exterior_derivative(&self) -> VectorField {
        self.hamiltonian_on_lagrangian(&self.delta())
    }
}
