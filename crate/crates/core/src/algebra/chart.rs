use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Which of the gradings carried by chart variables is being queried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GradingKind {
    Parity,
    Ghost,
    Momentum,
    Resolution,
    Form,
}

impl GradingKind {
    pub fn name(self) -> &'static str {
        match self {
            GradingKind::Parity => "parity",
            GradingKind::Ghost => "ghost",
            GradingKind::Momentum => "momentum degree",
            GradingKind::Resolution => "resolution degree",
            GradingKind::Form => "form degree",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grading {
    pub parity: u8,
    pub ghost: i32,
    /// `None` where the momentum degree is undefined (velocities).
    pub momentum: Option<u32>,
    pub resolution: Option<u32>,
    pub form: u32,
}

impl Grading {
    pub const fn new(parity: u8, ghost: i32, momentum: u32, resolution: u32) -> Self {
        Grading {
            parity,
            ghost,
            momentum: Some(momentum),
            resolution: Some(resolution),
            form: 0,
        }
    }

    pub fn get(&self, kind: GradingKind) -> Option<i64> {
        match kind {
            GradingKind::Parity => Some(self.parity as i64),
            GradingKind::Ghost => Some(self.ghost as i64),
            GradingKind::Momentum => self.momentum.map(i64::from),
            GradingKind::Resolution => self.resolution.map(i64::from),
            GradingKind::Form => Some(self.form as i64),
        }
    }

    /// Grading of the odd velocity `dφ` attached to a variable with this grading.
    fn velocity(self, form: u32) -> Grading {
        Grading {
            parity: 1 - self.parity,
            ghost: self.ghost - 1,
            momentum: None,
            resolution: None,
            form,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Base,
    /// `c^α`, fibre coordinates of ΠF.
    GhostFiber,
    /// `η^a`, fibre coordinates of ΠE.
    AntighostFiber,
    Momentum,
    Velocity,
    VelocityMomentum,
}

/// The three nested levels of coordinates used by the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    /// The extended manifold: base coordinates and ghosts.
    Extended,
    /// Its odd cotangent bundle: adds the odd momenta.
    Cotangent,
    /// The odd tangent bundle of the cotangent level: adds all velocities.
    Tangent,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Extended => "extended-manifold",
            Level::Cotangent => "odd-cotangent",
            Level::Tangent => "odd-tangent",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedVariable {
    pub name: String,
    pub grading: Grading,
    pub kind: VarKind,
    /// Index of the variable this momentum or velocity belongs to.
    pub partner: Option<usize>,
}

impl GradedVariable {
    pub fn is_odd(&self) -> bool {
        self.grading.parity == 1
    }

    pub fn level(&self) -> Level {
        match self.kind {
            VarKind::Base | VarKind::GhostFiber | VarKind::AntighostFiber => Level::Extended,
            VarKind::Momentum => Level::Cotangent,
            VarKind::Velocity | VarKind::VelocityMomentum => Level::Tangent,
        }
    }

    /// True for `φ*` and `dφ*`: the coordinates set to zero on the Lagrangian locus.
    pub fn is_starred(&self) -> bool {
        matches!(self.kind, VarKind::Momentum | VarKind::VelocityMomentum)
    }
}

/// Ordered set of graded variables; declaration order is the canonical order.
///
/// Gauge charts are laid out as `x^i, η^a, c^α, x*_i, η*_a, c*_α` followed by
/// the velocities of all twelve families in the same order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    variables: Vec<GradedVariable>,
    index: HashMap<String, usize>,
    odd: Vec<bool>,
    n_base: usize,
    n_constraints: usize,
    n_generators: usize,
}

pub type ChartRef = Arc<Chart>;

pub const X_GRADING: Grading = Grading::new(0, 0, 0, 0);
pub const ETA_GRADING: Grading = Grading::new(1, -1, 0, 1);
pub const C_GRADING: Grading = Grading::new(1, 1, 0, 0);
pub const XS_GRADING: Grading = Grading::new(1, 1, 1, 0);
pub const ETAS_GRADING: Grading = Grading::new(0, 2, 1, 0);
pub const CS_GRADING: Grading = Grading::new(0, 0, 1, 1);

impl Chart {
    /// Builds the full gauge chart over the given base coordinates with `k`
    /// constraint ghosts `eta1..etak` and `m` gauge ghosts `c1..cm`.
    pub fn gauge(base: &[impl AsRef<str>], k: usize, m: usize) -> Result<ChartRef> {
        let mut vars: Vec<GradedVariable> = Vec::new();
        let mut push = |name: String, grading, kind, partner| {
            vars.push(GradedVariable {
                name,
                grading,
                kind,
                partner,
            })
        };
        let n = base.len();
        for b in base {
            push(b.as_ref().to_string(), X_GRADING, VarKind::Base, None);
        }
        for a in 1..=k {
            push(format!("eta{a}"), ETA_GRADING, VarKind::AntighostFiber, None);
        }
        for a in 1..=m {
            push(format!("c{a}"), C_GRADING, VarKind::GhostFiber, None);
        }
        let fields = n + k + m;
        for i in 0..n {
            push(format!("xs_{}", base[i].as_ref()), XS_GRADING, VarKind::Momentum, Some(i));
        }
        for a in 1..=k {
            push(format!("etas{a}"), ETAS_GRADING, VarKind::Momentum, Some(n + a - 1));
        }
        for a in 1..=m {
            push(format!("cs{a}"), CS_GRADING, VarKind::Momentum, Some(n + k + a - 1));
        }
        let cotangent = vars.clone();
        for (idx, v) in cotangent.iter().enumerate() {
            let (kind, form) = if idx < fields {
                (VarKind::Velocity, 1)
            } else {
                (VarKind::VelocityMomentum, 0)
            };
            vars.push(GradedVariable {
                name: format!("d{}", v.name),
                grading: v.grading.velocity(form),
                kind,
                partner: Some(idx),
            });
        }
        Chart::from_parts(vars, n, k, m)
    }

    fn from_parts(
        variables: Vec<GradedVariable>,
        n_base: usize,
        n_constraints: usize,
        n_generators: usize,
    ) -> Result<ChartRef> {
        let mut index = HashMap::new();
        for (i, v) in variables.iter().enumerate() {
            if index.insert(v.name.clone(), i).is_some() {
                return Err(Error::InvalidSpec(format!("duplicate variable name `{}`", v.name)));
            }
        }
        let odd = variables.iter().map(|v| v.is_odd()).collect();
        Ok(Arc::new(Chart {
            variables,
            index,
            odd,
            n_base,
            n_constraints,
            n_generators,
        }))
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[GradedVariable] {
        &self.variables
    }

    pub fn var(&self, idx: usize) -> &GradedVariable {
        &self.variables[idx]
    }

    #[inline]
    pub fn is_odd(&self, idx: usize) -> bool {
        self.odd[idx]
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn n_base(&self) -> usize {
        self.n_base
    }

    pub fn n_constraints(&self) -> usize {
        self.n_constraints
    }

    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    /// Number of `φ^A` fields (base coordinates and ghosts).
    pub fn n_fields(&self) -> usize {
        self.n_base + self.n_constraints + self.n_generators
    }

    pub fn base(&self, i: usize) -> usize {
        i
    }

    pub fn eta(&self, a: usize) -> usize {
        self.n_base + a
    }

    pub fn ghost(&self, alpha: usize) -> usize {
        self.n_base + self.n_constraints + alpha
    }

    /// Index of `φ*_A` for the field with index `field`.
    pub fn star(&self, field: usize) -> usize {
        debug_assert!(field < self.n_fields());
        self.n_fields() + field
    }

    /// Index of the velocity `dv` of any cotangent-level variable `v`.
    pub fn velocity(&self, v: usize) -> usize {
        debug_assert!(v < 2 * self.n_fields());
        2 * self.n_fields() + v
    }

    /// Range of the `φ^A` indices.
    pub fn fields(&self) -> std::ops::Range<usize> {
        0..self.n_fields()
    }

    /// Range of every variable defined on the odd cotangent level.
    pub fn cotangent_vars(&self) -> std::ops::Range<usize> {
        0..2 * self.n_fields()
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.variables.iter().map(|v| v.name.as_str()).collect();
        write!(f, "[{}]", names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauge_chart_layout_and_gradings() {
        let chart = Chart::gauge(&["x", "y"], 1, 1).unwrap();
        assert_eq!(chart.len(), 2 * 2 * 4);
        let names: Vec<_> = chart.variables().iter().map(|v| v.name.clone()).collect();
        assert_eq!(
            &names[..8],
            &["x", "y", "eta1", "c1", "xs_x", "xs_y", "etas1", "cs1"]
        );
        assert_eq!(names[8], "dx");
        assert_eq!(names[15], "dcs1");

        for v in chart.variables() {
            assert_eq!(v.grading.parity as i32, v.grading.ghost.rem_euclid(2), "{}", v.name);
            assert_eq!(v.grading.form == 1, v.kind == VarKind::Velocity);
        }
        // gh(φ*_A) = 1 − gh(φ^A)
        for field in chart.fields() {
            let star = chart.star(field);
            assert_eq!(chart.var(star).grading.ghost, 1 - chart.var(field).grading.ghost);
        }
        let ghosts: Vec<i32> = (8..16).map(|i| chart.var(i).grading.ghost).collect();
        assert_eq!(ghosts, vec![-1, -1, -2, 0, 0, 0, 1, -1]);
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(Chart::gauge(&["x", "x"], 0, 0).is_err());
        assert!(Chart::gauge(&["c1"], 0, 1).is_err());
    }
}
