use crate::algebra::{rat, GradingKind, Poly};
use crate::basis::{enumerate, express, monomial_poly, Targets};
use crate::error::{Error, Result};

use super::spec::is_multivector_var;
use super::GaugeSystem;

/// Witnesses `U = Σ a_a T^a + Σ b^α R_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipCertificate {
    pub constraint_factors: Vec<Poly>,
    pub generator_factors: Vec<Poly>,
    pub degree_bound: u32,
}

/// Verdict of a bounded-degree membership test. Failing to find witnesses
/// at a bound does not show that none exist.
#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    Member(MembershipCertificate),
    Inconclusive { bound: u32 },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }

    pub fn certificate(&self) -> Option<&MembershipCertificate> {
        match self {
            Membership::Member(c) => Some(c),
            Membership::Inconclusive { .. } => None,
        }
    }
}

/// The cohomological test: an extension of `U` to the extended manifold
/// annihilated by `Q`, or none at the bound.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectibilityRoute {
    Cocycle(Poly),
    Inconclusive { bound: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectibilityReport {
    /// `(label, ⟦U, generator⟧, membership of that bracket)` for every
    /// constraint `T^a` and gauge generator `R_α`.
    pub brackets: Vec<(String, Poly, Membership)>,
    pub cocycle: Option<ProjectibilityRoute>,
}

impl ProjectibilityReport {
    pub fn projectible(&self) -> bool {
        self.brackets.iter().all(|(_, _, m)| m.is_member())
    }
}

impl MembershipCertificate {
    pub fn reconstruct(&self, system: &GaugeSystem) -> Poly {
        let spec = system.spec();
        let mut out = Poly::zero(system.chart());
        for (a, t) in self.constraint_factors.iter().zip(&spec.constraints) {
            out += &(a * t);
        }
        for (b, r) in self.generator_factors.iter().zip(&spec.generators) {
            out += &(b * r);
        }
        out
    }
}

impl GaugeSystem {
    fn require_multivector(&self, u: &Poly) -> Result<()> {
        if let Some(v) = u.uses(|v| !is_multivector_var(self.chart(), v)) {
            return Err(Error::InvalidSpec(format!("expected a multivector on the base, found `{}`", v.name)));
        }
        Ok(())
    }

    /// Searches for `U = Σ a_a T^a + Σ b^α R_α` with multivector
    /// coefficients of base degree at most `bound`.
    pub fn ideal_membership(&self, u: &Poly, bound: u32) -> Result<Membership> {
        self.require_multivector(u)?;
        let ch = self.chart();
        let spec = self.spec();
        let (k, m) = (spec.constraints.len(), spec.generators.len());
        let mut cert = MembershipCertificate {
            constraint_factors: vec![Poly::zero(ch); k],
            generator_factors: vec![Poly::zero(ch); m],
            degree_bound: bound,
        };
        let vars: Vec<usize> = (0..ch.n_base()).chain((0..ch.n_base()).map(|i| ch.star(i))).collect();
        for (d, part) in u.components(GradingKind::Momentum)? {
            let mut slots = Vec::new();
            let mut images = Vec::new();
            let basis_at = |deg: i64| -> Result<Vec<Poly>> {
                if deg < 0 {
                    return Ok(Vec::new());
                }
                let t = Targets::new().with(GradingKind::Momentum, deg);
                Ok(enumerate(ch, &vars, &t, bound)?.iter().map(|mo| monomial_poly(ch, mo)).collect())
            };
            let same = basis_at(d)?;
            let lower = basis_at(d - 1)?;
            for (a, t) in spec.constraints.iter().enumerate() {
                for b in &same {
                    slots.push((false, a, b.clone()));
                    images.push(b * t);
                }
            }
            for (al, r) in spec.generators.iter().enumerate() {
                for b in &lower {
                    slots.push((true, al, b.clone()));
                    images.push(b * r);
                }
            }
            let Some(x) = express(&part, &images) else {
                return Ok(Membership::Inconclusive { bound });
            };
            for (j, c) in x {
                let (is_gen, idx, b) = &slots[j];
                let target = if *is_gen {
                    &mut cert.generator_factors[*idx]
                } else {
                    &mut cert.constraint_factors[*idx]
                };
                *target += &b.scale(&c);
            }
        }
        debug_assert_eq!(&cert.reconstruct(self), u);
        Ok(Membership::Member(cert))
    }

    /// Tests `⟦U, T^a⟧, ⟦U, R_α⟧ ∈ 𝔍` at the bound. When a completed master
    /// function is given, also looks for a `Q`-closed extension of `U`.
    pub fn check_projectible(
        &self,
        u: &Poly,
        bound: u32,
        master: Option<(&Poly, u32)>,
    ) -> Result<ProjectibilityReport> {
        self.require_multivector(u)?;
        let br = self.brackets();
        let spec = self.spec();
        let mut brackets = Vec::new();
        let labelled = spec
            .constraints
            .iter()
            .enumerate()
            .map(|(a, t)| (format!("T{}", a + 1), t))
            .chain(spec.generators.iter().enumerate().map(|(a, r)| (format!("R{}", a + 1), r)));
        for (label, g) in labelled {
            let b = br.schouten(u, g)?;
            let verdict = self.ideal_membership(&b, bound)?;
            brackets.push((label, b, verdict));
        }
        let cocycle = match master {
            Some((s, max_res)) => Some(self.cocycle_extension(u, s, max_res, bound)?),
            None => None,
        };
        Ok(ProjectibilityReport { brackets, cocycle })
    }

    /// An extension `Ũ = U + (higher resolution)` with `(S¹, Ũ) = 0`, where
    /// `S¹` is the momentum-degree-one part of `s`.
    pub fn cocycle_extension(&self, u: &Poly, s: &Poly, max_res: u32, bound: u32) -> Result<ProjectibilityRoute> {
        let q = s.component(GradingKind::Momentum, 1)?;
        if u.is_zero() {
            return Ok(ProjectibilityRoute::Cocycle(u.clone()));
        }
        let (parity, ghost) = (u.parity()?, u.grading_of(GradingKind::Ghost)?);
        let br = self.brackets();
        match self.complete_by_resolution(u, parity, ghost, rat(-1), |w| br.odd(&q, w), |_, k| br.odd(&q, k), max_res, bound) {
            Ok(done) if done.closed => Ok(ProjectibilityRoute::Cocycle(done.value)),
            Ok(_) | Err(Error::NoSolutionAtBound { .. }) => Ok(ProjectibilityRoute::Inconclusive { bound }),
            Err(e) => Err(e),
        }
    }
}
