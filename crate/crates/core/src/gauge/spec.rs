use std::collections::BTreeMap;

use crate::algebra::{Chart, ChartRef, GradedVariable, GradingKind, Poly, VarKind};
use crate::bracket::{Brackets, ConnectionData};
use crate::error::{Error, Result};

/// Structure functions of the gauge algebra: for each pair `α < β`,
/// `⟦R_α,R_β⟧ = f^γ_{αβ} R_γ + T^a X_{aαβ}`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StructureWitnesses {
    /// `(α, β) ↦ (f^γ_{αβ} for each γ, X_{aαβ} for each a)`.
    pub pairs: BTreeMap<(usize, usize), (Vec<Poly>, Vec<Poly>)>,
}

/// Initial data of a gauge system on one chart.
///
/// Generators, bivector and dynamics are multivectors written with
/// `∂_i ↦ x*_i`; `T` are functions of the base coordinates.
#[derive(Debug, Clone)]
pub struct GaugeSystemSpec {
    pub chart: ChartRef,
    pub constraints: Vec<Poly>,
    pub generators: Vec<Poly>,
    pub bivector: Option<Poly>,
    pub dynamics: Option<Poly>,
    pub connection: Option<ConnectionData>,
    pub witnesses: Option<StructureWitnesses>,
}

pub(crate) fn is_multivector_var(chart: &Chart, v: &GradedVariable) -> bool {
    match v.kind {
        VarKind::Base => true,
        VarKind::Momentum => v.partner.is_some_and(|p| p < chart.n_base()),
        _ => false,
    }
}

impl GaugeSystemSpec {
    /// An empty system over `base` with room for `k` constraints and `m`
    /// generators; all of them start at zero.
    pub fn empty(base: &[impl AsRef<str>], k: usize, m: usize) -> Result<Self> {
        let chart = Chart::gauge(base, k, m)?;
        Ok(GaugeSystemSpec {
            constraints: vec![Poly::zero(&chart); k],
            generators: vec![Poly::zero(&chart); m],
            bivector: None,
            dynamics: None,
            connection: None,
            witnesses: None,
            chart,
        })
    }

    /// Multivector `x*`-encoding of a vector field with the given
    /// components along the base coordinates.
    pub fn vector_field(&self, components: &[Poly]) -> Poly {
        let mut out = Poly::zero(&self.chart);
        for (i, c) in components.iter().enumerate() {
            out += &(c * &Poly::var(&self.chart, self.chart.star(self.chart.base(i))));
        }
        out
    }

    fn check_multivector(&self, what: &str, p: &Poly, deg: i64) -> Result<()> {
        if !Chart::eq(p.chart(), &self.chart) {
            return Err(Error::ChartMismatch);
        }
        if let Some(v) = p.uses(|v| !is_multivector_var(&self.chart, v)) {
            return Err(Error::InvalidSpec(format!("{what} uses non-base variable `{}`", v.name)));
        }
        if !p.is_zero() && p.grading_of(GradingKind::Momentum)? != deg {
            return Err(Error::InvalidSpec(format!("{what} must have momentum degree {deg}")));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let ch = &self.chart;
        if self.constraints.len() != ch.n_constraints() || self.generators.len() != ch.n_generators() {
            return Err(Error::InvalidSpec(
                "number of constraints or generators does not match the chart".into(),
            ));
        }
        for (a, t) in self.constraints.iter().enumerate() {
            self.check_multivector(&format!("constraint T{}", a + 1), t, 0)?;
        }
        for (a, r) in self.generators.iter().enumerate() {
            self.check_multivector(&format!("generator R{}", a + 1), r, 1)?;
        }
        if let Some(p) = &self.bivector {
            self.check_multivector("bivector", p, 2)?;
        }
        if let Some(v) = &self.dynamics {
            self.check_multivector("dynamics", v, 1)?;
        }
        if let Some(conn) = &self.connection {
            conn.validate(ch)?;
        }
        if let Some(w) = &self.witnesses {
            let br = Brackets::flat(ch);
            for (alpha, beta) in self.structure_residuals(&br, w)? {
                if !beta.is_zero() {
                    return Err(Error::InvalidSpec(format!(
                        "structure relation for (R{}, R{}) leaves {beta}",
                        alpha.0 + 1,
                        alpha.1 + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// `⟦R_α,R_β⟧ − f^γ_{αβ}R_γ − T^a X_{aαβ}` for every supplied pair.
    pub fn structure_residuals(
        &self,
        br: &Brackets,
        w: &StructureWitnesses,
    ) -> Result<Vec<((usize, usize), Poly)>> {
        let mut out = Vec::new();
        for (&(a, b), (f, x)) in &w.pairs {
            if a >= self.generators.len() || b >= self.generators.len() {
                return Err(Error::InvalidSpec(format!("structure witness for unknown pair ({}, {})", a + 1, b + 1)));
            }
            if f.len() != self.generators.len() || x.len() != self.constraints.len() {
                return Err(Error::InvalidSpec("structure witness has the wrong number of entries".into()));
            }
            let mut r = br.schouten(&self.generators[a], &self.generators[b])?;
            for (fg, rg) in f.iter().zip(&self.generators) {
                r -= &(fg * rg);
            }
            for (xa, ta) in x.iter().zip(&self.constraints) {
                r -= &(ta * xa);
            }
            out.push(((a, b), r));
        }
        Ok(out)
    }
}
