#![allow(dead_code)]

pub mod docs;

use weakpoisson::algebra::{rat, ChartRef, Poly, Rational};
use weakpoisson::cohomology::{cohomology_at, CochainOperator, Truncation};
use weakpoisson::dsl::{fixtures, load_system, LoadedSystem};
use weakpoisson::gauge::ProjectibilityRoute;
use weakpoisson::sampling::Sampler;

pub const FIXTURES: &[&str] = &["heisenberg", "contact-1", "contact-2", "contact-3"];

pub fn load(name: &str) -> LoadedSystem {
    load_system(&fixtures::source(name).unwrap()).unwrap()
}

pub fn sign(parity: u8) -> Rational {
    if parity % 2 == 0 {
        rat(1)
    } else {
        rat(-1)
    }
}

/// A fixture with its completed master function, lift and completed dynamics.
pub struct Completed {
    pub loaded: LoadedSystem,
    pub s: Poly,
    pub psi: Poly,
    pub v: Poly,
}

pub fn completed(name: &str) -> Completed {
    let loaded = load(name);
    let sys = &loaded.system;
    let b = loaded.bounds;
    let s = sys.complete_master(&sys.assemble_s0(), b.max_res, b.deg).unwrap().value;
    let psi = sys.lift(&s).unwrap();
    let v0 = sys.spec().dynamics.clone().unwrap();
    let v = sys.complete_dynamics(&v0, &s, b.max_res, b.deg).unwrap().value;
    Completed { loaded, s, psi, v }
}

impl Completed {
    pub fn chart(&self) -> &ChartRef {
        self.loaded.chart()
    }

    /// Fields and their differentials: the coordinates of the Lagrangian locus.
    pub fn form_vars(&self) -> Vec<usize> {
        let ch = self.chart();
        ch.fields().chain(ch.fields().map(|a| ch.velocity(a))).collect()
    }

    /// Base coordinates and their differentials only.
    pub fn base_form_vars(&self) -> Vec<usize> {
        let ch = self.chart();
        (0..ch.n_base()).chain((0..ch.n_base()).map(|i| ch.velocity(i))).collect()
    }

    pub fn random_form(&self, s: &mut Sampler, vars: &[usize]) -> Poly {
        let p = s.parity();
        s.poly_with_parity(self.chart(), vars, p, 3)
    }

    pub fn qhat(&self) -> CochainOperator {
        CochainOperator::qhat(&self.loaded.system, &self.psi)
    }

    /// `Q`-cocycle extension of a base vector field.
    pub fn extend(&self, x: &Poly) -> Poly {
        let b = self.loaded.bounds;
        match self.loaded.system.cocycle_extension(x, &self.s, b.max_res, b.deg).unwrap() {
            ProjectibilityRoute::Cocycle(p) => p,
            ProjectibilityRoute::Inconclusive { bound } => panic!("no cocycle extension at bound {bound}"),
        }
    }

    /// Nonzero `Q̂`-cocycles from the truncated cohomology windows plus
    /// coboundaries of sampled forms.
    pub fn qhat_cocycles(&self, s: &mut Sampler, n: usize) -> Vec<Poly> {
        let op = self.qhat();
        let mut reps = Vec::new();
        for (k, l) in [(0, 0), (1, 0), (1, -1), (2, -1), (2, 0)] {
            reps.extend(cohomology_at(&op, &Truncation::form(k, l, 2)).unwrap().representatives);
        }
        let vars = self.form_vars();
        let mut out = Vec::new();
        while out.len() < n {
            let mut w = Poly::zero(self.chart());
            if !reps.is_empty() {
                w += &reps[s.below(reps.len())].scale(&s.coefficient());
            }
            let g = self.random_form(s, &vars);
            let exact = op.apply(&g);
            if w.parity().ok() == exact.parity().ok() || w.is_zero() {
                w += &exact;
            }
            if !w.is_zero() && w.parity().is_ok() {
                out.push(w);
            }
        }
        out
    }
}

/// A completed fixture with projectible fields and flow-invariant forms.
pub struct Case {
    pub c: Completed,
    /// Cocycle extensions of projectible vector fields of the fixture.
    pub fields: Vec<Poly>,
    /// Forms with `L_V ω = 0` exactly.
    pub invariants: Vec<Poly>,
}

pub fn case(name: &str) -> Case {
    let c = completed(name);
    let sys = &c.loaded.system;
    let spec = sys.spec();
    let mut base: Vec<Poly> = spec.dynamics.iter().cloned().collect();
    base.extend(c.loaded.vectors.iter().map(|(_, v)| v.clone()));
    base.extend(spec.generators.iter().cloned());
    if name.starts_with("contact") {
        base.push(c.loaded.eval("d/dp1").unwrap());
    }
    let fields = base.iter().map(|x| c.extend(x)).collect();
    let mut invariants: Vec<Poly> = c.loaded.forms.iter().map(|(_, w)| w.clone()).collect();
    invariants.extend(c.loaded.observables.iter().cloned());
    let derived: Vec<Poly> = invariants.iter().map(|w| sys.exterior_derivative(w).unwrap()).collect();
    invariants.extend(derived);
    let products: Vec<Poly> = invariants.iter().flat_map(|a| invariants.iter().map(move |b| a * b)).collect();
    invariants.extend(products.into_iter().filter(|p| !p.is_zero()));
    for w in &invariants {
        assert!(sys.lie_derivative_form(&c.v, w).unwrap().is_zero(), "{name}: {w} is not invariant");
    }
    Case { c, fields, invariants }
}
