use std::collections::BTreeMap;

use crate::algebra::{rat, ratio, GradingKind, Poly, Rational};
use crate::basis::{combine, enumerate, express, monomial_poly, MonomialIndex, Targets};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

use super::GaugeSystem;

/// A generator on the extended manifold together with how far its master
/// equation has been checked.
#[derive(Debug, Clone, PartialEq)]
pub struct MasterFunction {
    pub value: Poly,
    /// Every component of the residual below this resolution degree vanishes.
    pub verified_degree_bound: u32,
    /// The residual vanishes identically.
    pub closed: bool,
}

impl MasterFunction {
    pub fn unverified(value: Poly) -> Self {
        MasterFunction {
            value,
            verified_degree_bound: 0,
            closed: false,
        }
    }

    /// Components by momentum degree: `Q`-part, `Π`, `Ξ`, …
    pub fn by_momentum(&self) -> BTreeMap<i64, Poly> {
        self.value.components(GradingKind::Momentum).unwrap_or_default()
    }

    /// Components `S_n` by resolution degree.
    pub fn by_resolution(&self) -> BTreeMap<i64, Poly> {
        self.value.components(GradingKind::Resolution).unwrap_or_default()
    }

    pub fn momentum_part(&self, k: i64) -> Poly {
        self.by_momentum().remove(&k).unwrap_or_else(|| Poly::zero(self.value.chart()))
    }

    /// Checks parity 0, ghost number 2 and positive momentum degree.
    pub fn check_gradings(&self) -> Result<()> {
        let v = &self.value;
        if v.is_zero() {
            return Ok(());
        }
        if v.parity()? != 0 || v.grading_of(GradingKind::Ghost)? != 2 {
            return Err(Error::InvalidSpec("master function must be even with ghost number 2".into()));
        }
        if v.components(GradingKind::Momentum)?.contains_key(&0) {
            return Err(Error::InvalidSpec("master function has a term of momentum degree 0".into()));
        }
        Ok(())
    }
}

/// Outcome of evaluating `(S,S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MasterReport {
    pub residual: Poly,
    /// Nonzero residual pieces keyed by (momentum degree, resolution degree).
    pub components: BTreeMap<(i64, i64), Poly>,
    /// `(Q,Q)`, `(Q,Π)` and `(Π,Π) + 2(Q,Ξ)`.
    pub relations: Vec<(&'static str, Poly)>,
}

impl MasterReport {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

impl GaugeSystem {
    /// `T^a η*_a + c^α R_α + P`, all data of resolution degree zero.
    pub fn assemble_s0(&self) -> MasterFunction {
        let ch = self.chart();
        let spec = self.spec();
        let mut s = Poly::zero(ch);
        for (a, t) in spec.constraints.iter().enumerate() {
            s += &(t * &Poly::var(ch, ch.star(ch.eta(a))));
        }
        for (al, r) in spec.generators.iter().enumerate() {
            s += &(&Poly::var(ch, ch.ghost(al)) * r);
        }
        if let Some(p) = &spec.bivector {
            s += p;
        }
        MasterFunction::unverified(s)
    }

    pub fn check_master(&self, s: &Poly) -> Result<MasterReport> {
        let br = self.brackets();
        let residual = br.odd(s, s)?;
        let mut components = BTreeMap::new();
        for (k, part) in residual.components(GradingKind::Momentum)? {
            for (n, piece) in part.components(GradingKind::Resolution)? {
                components.insert((k, n), piece);
            }
        }
        let parts = s.components(GradingKind::Momentum)?;
        let zero = Poly::zero(self.chart());
        let q = parts.get(&1).unwrap_or(&zero);
        let pi = parts.get(&2).unwrap_or(&zero);
        let xi = parts.get(&3).unwrap_or(&zero);
        let relations = vec![
            ("(Q,Q)", br.odd(q, q)?),
            ("(Q,Pi)", br.odd(q, pi)?),
            ("(Pi,Pi)+2(Q,Xi)", &br.odd(pi, pi)? + &br.odd(q, xi)?.scale(&rat(2))),
        ];
        Ok(MasterReport {
            residual,
            components,
            relations,
        })
    }

    /// Some `U` of the given parity and ghost number, resolution degree
    /// `res` and coefficient degree at most `deg` with `δU = rhs`.
    pub fn solve_koszul_tate(&self, rhs: &Poly, parity: u8, ghost: i64, res: u32, deg: u32) -> Result<Poly> {
        let ch = self.chart();
        let delta = self.koszul_tate();
        let vars: Vec<usize> = ch.cotangent_vars().collect();
        let mut out = Poly::zero(ch);
        for (m, part) in rhs.components(GradingKind::Momentum)? {
            let targets = Targets::new()
                .with(GradingKind::Parity, parity as i64)
                .with(GradingKind::Ghost, ghost)
                .with(GradingKind::Resolution, res as i64)
                .with(GradingKind::Momentum, m);
            let basis: Vec<Poly> = enumerate(ch, &vars, &targets, deg)?
                .iter()
                .map(|mono| monomial_poly(ch, mono))
                .collect();
            let images: Vec<Poly> = basis.iter().map(|b| delta.apply(b)).collect();
            match express(&part, &images) {
                Some(x) => out += &combine(ch, &basis, &x),
                None => {
                    return Err(Error::NoSolutionAtBound {
                        bound: deg,
                        residual: part.to_string(),
                    })
                }
            }
        }
        Ok(out)
    }

    /// Basis of `δ`-cycles of the given gradings, momentum degree
    /// `1..=max_momentum` and coefficient degree at most `deg`.
    pub fn koszul_tate_cycles(&self, parity: u8, ghost: i64, res: u32, max_momentum: i64, deg: u32) -> Result<Vec<Poly>> {
        let ch = self.chart();
        let delta = self.koszul_tate();
        let vars: Vec<usize> = ch.cotangent_vars().collect();
        let mut out = Vec::new();
        for m in 1..=max_momentum {
            let targets = Targets::new()
                .with(GradingKind::Parity, parity as i64)
                .with(GradingKind::Ghost, ghost)
                .with(GradingKind::Resolution, res as i64)
                .with(GradingKind::Momentum, m);
            let basis: Vec<Poly> = enumerate(ch, &vars, &targets, deg)?
                .iter()
                .map(|mono| monomial_poly(ch, mono))
                .collect();
            let mut idx = MonomialIndex::new();
            let columns: Vec<_> = basis.iter().map(|b| idx.coordinates(&delta.apply(b))).collect();
            for v in SparseMatrix::from_columns(idx.len(), &columns).kernel() {
                out.push(combine(ch, &basis, &v));
            }
        }
        Ok(out)
    }

    /// A `δ`-cycle `K` of resolution `res` removing the resolution-`res`
    /// piece of the residual to first order, trying small coefficient
    /// degrees first. Zero when no such cycle exists.
    #[allow(clippy::too_many_arguments)]
    fn cycle_correction(
        &self,
        value: &Poly,
        parity: u8,
        ghost: i64,
        res: u32,
        deg: u32,
        residual: &impl Fn(&Poly) -> Result<Poly>,
        linear: &impl Fn(&Poly, &Poly) -> Result<Poly>,
    ) -> Result<Poly> {
        let zero = Poly::zero(self.chart());
        let target = residual(value)?.component(GradingKind::Resolution, res as i64)?;
        if target.is_zero() {
            return Ok(zero);
        }
        let max_m = target.components(GradingKind::Momentum)?.keys().max().copied().unwrap_or(0);
        for d in 0..=deg {
            let cycles = self.koszul_tate_cycles(parity, ghost, res, max_m, d)?;
            if cycles.is_empty() {
                continue;
            }
            let images = cycles
                .iter()
                .map(|k| Ok(linear(value, k)?.component(GradingKind::Resolution, res as i64)?))
                .collect::<Result<Vec<_>>>()?;
            if let Some(x) = express(&-&target, &images) {
                return Ok(combine(self.chart(), &cycles, &x));
            }
        }
        Ok(zero)
    }

    /// Adds corrections of resolution degree `1..=max_res` to `seed` so that
    /// `residual` vanishes degree by degree. At step `k` the piece of
    /// resolution `k − 1` is removed by `U_k` with `δU_k = factor · piece`,
    /// and the freedom `U_k ↦ U_k + K` with `δK = 0` is spent on clearing the
    /// piece of resolution `k` as far as the linearisation allows.
    #[allow(clippy::too_many_arguments)]
    pub(super) fn complete_by_resolution(
        &self,
        seed: &Poly,
        parity: u8,
        ghost: i64,
        factor: Rational,
        residual: impl Fn(&Poly) -> Result<Poly>,
        linear: impl Fn(&Poly, &Poly) -> Result<Poly>,
        max_res: u32,
        deg: u32,
    ) -> Result<MasterFunction> {
        let mut value = seed.clone();
        for k in 1..=max_res {
            let r = residual(&value)?;
            let comps = r.components(GradingKind::Resolution)?;
            let Some((&low, piece)) = comps.iter().next() else {
                return Ok(MasterFunction {
                    value,
                    verified_degree_bound: max_res,
                    closed: true,
                });
            };
            if low < k as i64 - 1 {
                return Err(Error::NoSolutionAtBound {
                    bound: deg,
                    residual: piece.to_string(),
                });
            }
            if low == k as i64 - 1 {
                value += &self.solve_koszul_tate(&piece.scale(&factor), parity, ghost, k, deg)?;
            }
            value += &self.cycle_correction(&value, parity, ghost, k, deg, &residual, &linear)?;
        }
        let r = residual(&value)?;
        let floor = r.components(GradingKind::Resolution)?.keys().next().copied();
        Ok(MasterFunction {
            value,
            verified_degree_bound: floor.map_or(max_res, |n| n.max(0) as u32),
            closed: r.is_zero(),
        })
    }

    /// Solves `(S,S) = 0` by resolution degree starting from `s0`.
    pub fn complete_master(&self, s0: &MasterFunction, max_res: u32, deg: u32) -> Result<MasterFunction> {
        s0.check_gradings()?;
        let br = self.brackets();
        self.complete_by_resolution(
            &s0.value,
            0,
            2,
            ratio(-1, 2),
            |s| br.odd(s, s),
            |s, k| Ok(br.odd(s, k)?.scale(&rat(2))),
            max_res,
            deg,
        )
    }

    /// Extends a vector field `v0` so that `(S,V) = 0`.
    pub fn complete_dynamics(&self, v0: &Poly, s: &Poly, max_res: u32, deg: u32) -> Result<MasterFunction> {
        if !v0.is_zero() && (v0.parity()? != 1 || v0.grading_of(GradingKind::Ghost)? != 1) {
            return Err(Error::InvalidSpec("dynamics must be odd with ghost number 1".into()));
        }
        let br = self.brackets();
        self.complete_by_resolution(v0, 1, 1, rat(-1), |v| br.odd(s, v), |_, k| br.odd(s, k), max_res, deg)
    }
}
