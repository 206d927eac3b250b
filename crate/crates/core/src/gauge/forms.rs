use crate::algebra::{rat, Level, Poly};
use crate::error::{Error, Result};

use super::GaugeSystem;

fn parity_sign(p: &Poly) -> Result<crate::algebra::Rational> {
    Ok(if p.parity()? == 1 { rat(-1) } else { rat(1) })
}

impl GaugeSystem {
    /// `ı_X ω = (−1)^X {X, ω}|_L`.
    pub fn interior_product(&self, x: &Poly, omega: &Poly) -> Result<Poly> {
        x.check_level(Level::Cotangent)?;
        omega.check_level(Level::Tangent)?;
        if x.is_zero() {
            return Ok(Poly::zero(self.chart()));
        }
        let b = self.brackets().even(x, omega)?;
        Ok(b.restrict_to_lagrangian().scale(&parity_sign(x)?))
    }

    /// The de Rham differential `{Δ, −}|_L`.
    pub fn exterior_derivative(&self, omega: &Poly) -> Result<Poly> {
        omega.check_level(Level::Tangent)?;
        Ok(self.brackets().exterior_derivative().apply(&omega.restrict_to_lagrangian()))
    }

    /// `L_V ω = (−1)^V {{Δ,V}, ω}|_L`, cross-checked against
    /// `d ı_V ω + ı_V dω`.
    pub fn lie_derivative_form(&self, v: &Poly, omega: &Poly) -> Result<Poly> {
        if v.is_zero() {
            return Ok(Poly::zero(self.chart()));
        }
        let gamma = self.lift(v)?;
        let sign = parity_sign(v)?;
        let via_lift = self.brackets().even(&gamma, omega)?.restrict_to_lagrangian().scale(&sign);
        let cartan = &self.exterior_derivative(&self.interior_product(v, omega)?)?
            + &self.interior_product(v, &self.exterior_derivative(omega)?)?;
        if via_lift != cartan {
            return Err(Error::CartanMismatch(format!("lift gives {via_lift}, Cartan formula gives {cartan}")));
        }
        Ok(via_lift)
    }

    /// The `k`-ary derived bracket `[ω₁, …, ω_k]` of `Ψ` on forms.
    pub fn form_bracket(&self, psi: &Poly, forms: &[Poly]) -> Result<Poly> {
        self.brackets()
            .derived(psi, forms, crate::bracket::Restriction::Lagrangian)
    }
}
