//! Gauge systems: assembly and perturbative completion of master
//! functions, ideal membership and projectibility, the homological vector
//! fields on the extended manifold and on forms, and the Cartan calculus.

mod forms;
mod ideal;
mod master;
mod spec;

pub use ideal::{Membership, MembershipCertificate, ProjectibilityReport, ProjectibilityRoute};
pub use master::{MasterFunction, MasterReport};
pub use spec::{GaugeSystemSpec, StructureWitnesses};

use crate::algebra::{ChartRef, Poly};
use crate::bracket::{Brackets, VectorField};
use crate::error::Result;

/// A validated gauge system together with its bracket structures.
#[derive(Debug, Clone)]
pub struct GaugeSystem {
    spec: GaugeSystemSpec,
    brackets: Brackets,
}

impl GaugeSystem {
    pub fn new(spec: GaugeSystemSpec) -> Result<Self> {
        spec.validate()?;
        let brackets = match &spec.connection {
            Some(conn) => Brackets::twisted(&spec.chart, conn)?,
            None => Brackets::flat(&spec.chart),
        };
        Ok(GaugeSystem { spec, brackets })
    }

    pub fn spec(&self) -> &GaugeSystemSpec {
        &self.spec
    }

    pub fn brackets(&self) -> &Brackets {
        &self.brackets
    }

    pub fn chart(&self) -> &ChartRef {
        &self.spec.chart
    }

    /// The Koszul–Tate differential `δ = T^a ∂/∂η^a + R_α ∂/∂c*_α`.
    pub fn koszul_tate(&self) -> VectorField {
        let ch = self.chart();
        let etas = (0..ch.n_constraints()).map(|a| (ch.eta(a), self.spec.constraints[a].clone()));
        let antighosts =
            (0..ch.n_generators()).map(|al| (ch.star(ch.ghost(al)), self.spec.generators[al].clone()));
        VectorField::with_components(ch, etas.chain(antighosts))
    }

    pub fn koszul_tate_delta(&self, f: &Poly) -> Poly {
        self.koszul_tate().apply(f)
    }

    /// `Q = (S,−)|_M`.
    pub fn extract_q(&self, s: &Poly) -> VectorField {
        self.brackets.hamiltonian_on_extended(s)
    }

    /// `Ψ = {Δ, S}`, or `Γ = {Δ, V}` for a vector field.
    pub fn lift(&self, f: &Poly) -> Result<Poly> {
        self.brackets.lift_by_delta(f)
    }

    /// `Q̂ = {Ψ,−}|_L`.
    pub fn extract_qhat(&self, psi: &Poly) -> VectorField {
        self.brackets.hamiltonian_on_lagrangian(psi)
    }
}
