//! Sparse matrices over the rationals with exact elimination.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::Rational;

pub type SparseRow = BTreeMap<usize, Rational>;

/// A sparse matrix stored by rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    rows: Vec<SparseRow>,
}

/// Result of eliminating a matrix: pivot rows normalized to a leading 1,
/// keyed by pivot column and fully back-reduced.
#[derive(Debug, Clone)]
pub struct Echelon {
    n_cols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

fn axpy(target: &mut SparseRow, factor: &Rational, source: &SparseRow) {
    for (c, v) in source {
        let e = target.entry(*c).or_insert_with(Rational::zero);
        *e -= factor * v;
        if e.is_zero() {
            target.remove(c);
        }
    }
}

impl SparseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        SparseMatrix {
            n_rows,
            n_cols,
            rows: vec![SparseRow::new(); n_rows],
        }
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(n_rows: usize, columns: &[SparseRow]) -> Self {
        let mut m = SparseMatrix::zeros(n_rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col {
                m.set(*i, j, v.clone());
            }
        }
        m
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i < self.n_rows && j < self.n_cols, "index out of range");
        if v.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, v);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.rows[i].get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn apply(&self, x: &SparseRow) -> SparseRow {
        let mut out = SparseRow::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = Rational::zero();
            for (j, v) in row {
                if let Some(xj) = x.get(j) {
                    acc += v * xj;
                }
            }
            if !acc.is_zero() {
                out.insert(i, acc);
            }
        }
        out
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.n_cols, other.n_rows, "dimension mismatch");
        let mut out = SparseMatrix::zeros(self.n_rows, other.n_cols);
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = SparseRow::new();
            for (k, a) in row {
                axpy(&mut acc, &-a, &other.rows[*k]);
            }
            out.rows[i] = acc;
        }
        out
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::of_rows(self.n_cols, self.rows.iter().cloned())
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Some `x` with `A x = b`, free unknowns set to zero.
    pub fn solve(&self, b: &SparseRow) -> Option<SparseRow> {
        let aug = self.rows.iter().enumerate().map(|(i, row)| {
            let mut r = row.clone();
            if let Some(v) = b.get(&i) {
                r.insert(self.n_cols, v.clone());
            }
            r
        });
        let ech = Echelon::of_rows(self.n_cols + 1, aug);
        if ech.pivots.contains_key(&self.n_cols) {
            return None;
        }
        let mut x = SparseRow::new();
        for (p, row) in &ech.pivots {
            if let Some(v) = row.get(&self.n_cols) {
                x.insert(*p, v.clone());
            }
        }
        Some(x)
    }

    pub fn kernel(&self) -> Vec<SparseRow> {
        self.echelon().kernel()
    }
}

impl Echelon {
    pub fn of_rows(n_cols: usize, rows: impl IntoIterator<Item = SparseRow>) -> Self {
        let mut e = Echelon {
            n_cols,
            pivots: BTreeMap::new(),
        };
        for row in rows {
            e.insert(row);
        }
        e
    }

    /// Adds a row; false if it was already in the span.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        let pivots = &mut self.pivots;
        loop {
            let Some((&lead, _)) = row.iter().find(|(c, _)| pivots.contains_key(c)) else { break };
            let factor = row[&lead].clone();
            axpy(&mut row, &factor, &pivots[&lead]);
        }
        let Some((&lead, lv)) = row.iter().next() else { return false };
        let inv = Rational::one() / lv;
        for v in row.values_mut() {
            *v *= &inv;
        }
        for other in pivots.values_mut() {
            if let Some(f) = other.get(&lead).cloned() {
                axpy(other, &f, &row);
            }
        }
        pivots.insert(lead, row);
        true
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<SparseRow> {
        (0..self.n_cols)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|free| {
                let mut v = SparseRow::new();
                v.insert(free, Rational::one());
                for (p, row) in &self.pivots {
                    if let Some(a) = row.get(&free) {
                        v.insert(*p, -a);
                    }
                }
                v
            })
            .collect()
    }

    /// Whether `row` lies in the span of the eliminated rows.
    pub fn contains(&self, row: &SparseRow) -> bool {
        let mut r = row.clone();
        for (p, prow) in &self.pivots {
            if let Some(f) = r.get(p).cloned() {
                axpy(&mut r, &f, prow);
            }
        }
        r.is_empty()
    }
}
