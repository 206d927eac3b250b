//! Truncated cohomology of `Q`, `Q̂` and `δ` by exact linear algebra on
//! explicit monomial bases.

use crate::algebra::{ChartRef, GradingKind, Monomial, Poly};
use crate::basis::{enumerate, monomial_poly, MonomialIndex, Targets};
use crate::bracket::VectorField;
use crate::error::{Error, Result};
use crate::gauge::GaugeSystem;
use crate::linalg::{Echelon, SparseMatrix, SparseRow};

/// A finite window of a bigraded cochain space: fixed outer degree
/// (momentum or form degree) and ghost number, bounded base degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    pub degree_kind: GradingKind,
    pub degree: i64,
    pub ghost: i64,
    pub base_degree: u32,
    pub resolution_cap: Option<u32>,
}

impl Truncation {
    pub fn momentum(k: i64, l: i64, base_degree: u32) -> Self {
        Truncation {
            degree_kind: GradingKind::Momentum,
            degree: k,
            ghost: l,
            base_degree,
            resolution_cap: None,
        }
    }

    pub fn form(k: i64, l: i64, base_degree: u32) -> Self {
        Truncation {
            degree_kind: GradingKind::Form,
            ..Truncation::momentum(k, l, base_degree)
        }
    }

    pub fn with_resolution_cap(mut self, cap: u32) -> Self {
        self.resolution_cap = Some(cap);
        self
    }

    fn at(&self, ghost: i64, base_degree: u32) -> Self {
        Truncation {
            ghost,
            base_degree,
            ..self.clone()
        }
    }

    fn admits(&self, chart: &ChartRef, m: &Monomial) -> bool {
        let p = monomial_poly(chart, m);
        let res_ok = match self.resolution_cap {
            Some(cap) => p.monomial_grading(m, GradingKind::Resolution).is_ok_and(|r| r <= cap as i64),
            None => true,
        };
        res_ok && p.base_degree_of(m) <= self.base_degree
    }
}

/// A derivation raising ghost number by one and preserving the outer degree,
/// together with the variables spanning its cochain spaces.
#[derive(Debug, Clone)]
pub struct CochainOperator {
    pub field: VectorField,
    pub vars: Vec<usize>,
    pub degree_kind: GradingKind,
}

impl CochainOperator {
    /// `QF = (S¹, F)` on functions on the odd cotangent level, bigraded by
    /// momentum degree and ghost number.
    pub fn q(system: &GaugeSystem, s: &Poly) -> Result<Self> {
        let ch = system.chart();
        let s1 = s.component(GradingKind::Momentum, 1)?;
        let field = VectorField::hamiltonian(system.brackets().odd_table(), &s1, ch.cotangent_vars(), Poly::clone);
        Ok(CochainOperator {
            field,
            vars: ch.cotangent_vars().collect(),
            degree_kind: GradingKind::Momentum,
        })
    }

    /// `Q̂ = {Ψ, −}|_L` on forms, bigraded by form degree and ghost number.
    pub fn qhat(system: &GaugeSystem, psi: &Poly) -> Self {
        let ch = system.chart();
        CochainOperator {
            field: system.extract_qhat(psi),
            vars: ch.fields().chain(ch.fields().map(|a| ch.velocity(a))).collect(),
            degree_kind: GradingKind::Form,
        }
    }

    /// The Koszul–Tate differential on the odd cotangent level.
    pub fn koszul_tate(system: &GaugeSystem) -> Self {
        CochainOperator {
            field: system.koszul_tate(),
            vars: system.chart().cotangent_vars().collect(),
            degree_kind: GradingKind::Momentum,
        }
    }

    pub fn chart(&self) -> &ChartRef {
        self.field.chart()
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        self.field.apply(f)
    }

    pub fn basis(&self, trunc: &Truncation) -> Result<Vec<Monomial>> {
        if trunc.degree_kind != self.degree_kind {
            return Err(Error::InvalidSpec(format!(
                "operator is graded by {}, truncation by {}",
                self.degree_kind.name(),
                trunc.degree_kind.name()
            )));
        }
        let targets = Targets::new()
            .with(trunc.degree_kind, trunc.degree)
            .with(GradingKind::Ghost, trunc.ghost);
        let ch = self.chart();
        Ok(enumerate(ch, &self.vars, &targets, trunc.base_degree)?
            .into_iter()
            .filter(|m| trunc.admits(ch, m))
            .collect())
    }

    /// Base-degree growth of the operator, never negative.
    pub fn growth(&self) -> u32 {
        self.field.base_degree_growth().max(0) as u32
    }
}

/// Matrix of an operator between enumerated bases; column `j` holds the
/// image of `source[j]` in the coordinates of `target`.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub source: Vec<Monomial>,
    pub target: Vec<Monomial>,
    pub target_truncation: Truncation,
    pub matrix: SparseMatrix,
}

/// The matrix of `op` from `trunc` into the window one ghost number up, with
/// base degree enlarged by the operator's growth. Fails if an image leaves
/// that window.
pub fn operator_matrix(op: &CochainOperator, trunc: &Truncation) -> Result<OperatorMatrix> {
    let ch = op.chart();
    let source = op.basis(trunc)?;
    let target_truncation = trunc.at(trunc.ghost + 1, trunc.base_degree + op.growth());
    let target = op.basis(&target_truncation)?;
    let index = MonomialIndex::from_basis(&target);
    let mut columns = Vec::with_capacity(source.len());
    for m in &source {
        let image = op.apply(&monomial_poly(ch, m));
        let mut col = SparseRow::new();
        for (tm, c) in image.terms() {
            let Some(i) = index.get(tm) else {
                return Err(Error::UnboundedDegree(monomial_poly(ch, tm).to_string()));
            };
            col.insert(i, c.clone());
        }
        columns.push(col);
    }
    Ok(OperatorMatrix {
        matrix: SparseMatrix::from_columns(target.len(), &columns),
        source,
        target,
        target_truncation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyReport {
    pub truncation: Truncation,
    pub source_dim: usize,
    pub kernel_dim: usize,
    /// Dimension of the image of the previous ghost number inside the window.
    pub image_dim: usize,
    pub dimension: usize,
    /// Cocycles spanning a complement of the image.
    pub representatives: Vec<Poly>,
    /// A class survived in outer degree above ghost number, which full
    /// cohomology rules out: the window is too small to see its preimage.
    pub bound_too_small: bool,
}

/// Elements of the previous ghost number whose images land in the window,
/// paired with the window coordinates of those images.
fn incoming(op: &CochainOperator, trunc: &Truncation, index: &MonomialIndex) -> Result<(Vec<Poly>, Vec<SparseRow>)> {
    let ch = op.chart();
    // a derivation lowers base degree by at most one
    let prev = trunc.at(trunc.ghost - 1, trunc.base_degree + 1);
    let sources: Vec<Poly> = op.basis(&prev)?.iter().map(|m| monomial_poly(ch, m)).collect();
    let mut outside = MonomialIndex::new();
    let mut images = Vec::new();
    let mut overflow = Vec::new();
    for s in &sources {
        let img = op.apply(s);
        let mut inside = SparseRow::new();
        let mut out = SparseRow::new();
        for (m, c) in img.terms() {
            match index.get(m) {
                Some(i) => {
                    inside.insert(i, c.clone());
                }
                None => {
                    out.insert(outside.insert(m), c.clone());
                }
            }
        }
        images.push(inside);
        overflow.push(out);
    }
    // combinations whose image stays inside the window
    let stay = SparseMatrix::from_columns(outside.len(), &overflow).kernel();
    let mut preimages = Vec::new();
    let mut rows = Vec::new();
    for y in stay {
        let mut row = SparseRow::new();
        for (j, a) in &y {
            for (i, c) in &images[*j] {
                let e = row.entry(*i).or_default();
                *e += a * c;
            }
        }
        row.retain(|_, c| *c != crate::algebra::rat(0));
        let mut g = Poly::zero(ch);
        for (j, a) in &y {
            g += &sources[*j].scale(a);
        }
        preimages.push(g);
        rows.push(row);
    }
    Ok((preimages, rows))
}

/// `dim H = dim ker − dim im` in the window, with representatives.
pub fn cohomology_at(op: &CochainOperator, trunc: &Truncation) -> Result<CohomologyReport> {
    let ch = op.chart();
    let out = operator_matrix(op, trunc)?;
    let n = out.source.len();
    let kernel = out.matrix.kernel();
    let index = MonomialIndex::from_basis(&out.source);
    let (_, rows) = incoming(op, trunc, &index)?;
    let mut echelon = Echelon::of_rows(n, rows);
    let image_dim = echelon.rank();
    let mut representatives = Vec::new();
    for v in &kernel {
        if echelon.insert(v.clone()) {
            representatives.push(index.to_poly(ch, v));
        }
    }
    let dimension = kernel.len() - image_dim;
    debug_assert_eq!(dimension, representatives.len());
    Ok(CohomologyReport {
        truncation: trunc.clone(),
        source_dim: n,
        kernel_dim: kernel.len(),
        image_dim,
        dimension,
        representatives,
        bound_too_small: trunc.degree > trunc.ghost && dimension > 0,
    })
}

/// Some `G` in the window one ghost number down with `op(G) = f`, or
/// `None` when the window holds no preimage.
pub fn coboundary_preimage(op: &CochainOperator, f: &Poly, trunc: &Truncation) -> Result<Option<Poly>> {
    if !op.apply(f).is_zero() {
        return Err(Error::NotClosed(f.to_string()));
    }
    let ch = op.chart();
    let source = op.basis(trunc)?;
    let index = MonomialIndex::from_basis(&source);
    let mut target = SparseRow::new();
    for (m, c) in f.terms() {
        let Some(i) = index.get(m) else {
            return Err(Error::UnboundedDegree(monomial_poly(ch, m).to_string()));
        };
        target.insert(i, c.clone());
    }
    if target.is_empty() {
        return Ok(Some(Poly::zero(ch)));
    }
    let (preimages, images) = incoming(op, trunc, &index)?;
    let columns = SparseMatrix::from_columns(source.len(), &images);
    Ok(columns.solve(&target).map(|y| {
        let mut g = Poly::zero(ch);
        for (j, a) in &y {
            g += &preimages[*j].scale(a);
        }
        g
    }))
}
