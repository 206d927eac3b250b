use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{ChartRef, Poly};

use super::table::BracketTable;

/// A derivation `Σ X^v ∂^L/∂v` acting from the left on polynomials in a
/// fixed set of variables.
#[derive(Clone)]
pub struct VectorField {
    chart: ChartRef,
    components: BTreeMap<usize, Poly>,
}

impl VectorField {
    pub fn new(chart: &ChartRef) -> Self {
        VectorField {
            chart: chart.clone(),
            components: BTreeMap::new(),
        }
    }

    pub fn with_components(chart: &ChartRef, components: impl IntoIterator<Item = (usize, Poly)>) -> Self {
        let mut vf = VectorField::new(chart);
        for (v, p) in components {
            if !p.is_zero() {
                vf.components.insert(v, p);
            }
        }
        vf
    }

    /// Components `{H, v}` restricted by `restrict`, for every `v` in `domain`:
    /// the Hamiltonian derivation of `H` tangent to a restriction locus.
    pub fn hamiltonian(
        table: &BracketTable,
        h: &Poly,
        domain: impl IntoIterator<Item = usize>,
        restrict: impl Fn(&Poly) -> Poly,
    ) -> Self {
        let chart = table.chart();
        VectorField::with_components(
            chart,
            domain
                .into_iter()
                .map(|v| (v, restrict(&table.apply(h, &Poly::var(chart, v))))),
        )
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn component(&self, v: usize) -> Poly {
        self.components.get(&v).cloned().unwrap_or_else(|| Poly::zero(&self.chart))
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Poly)> {
        self.components.iter().map(|(v, p)| (*v, p))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(&self.chart);
        for (v, x) in &self.components {
            let df = f.left_derivative(*v);
            if !df.is_zero() {
                out += &(x * &df);
            }
        }
        out
    }

    /// Largest increase of base-coordinate degree this derivation can cause.
    pub fn base_degree_growth(&self) -> i64 {
        self.components
            .iter()
            .map(|(v, p)| {
                let lost = (self.chart.var(*v).kind == crate::algebra::VarKind::Base) as i64;
                p.max_base_degree() as i64 - lost
            })
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(v, p)| format!("({p})*d/d{}", self.chart.var(*v).name))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({self})")
    }
}
