//! Exact symbolic engine for weak Poisson structures on gauge systems.
//!
//! The crate works with polynomials in graded (even and odd) variables over
//! the rationals, the canonical odd bracket on the extended phase space, its
//! even counterpart on the odd tangent bundle, master functions built by
//! bounded-degree homological perturbation, and truncated cohomology.

pub mod algebra;
pub mod basis;
pub mod bracket;
pub mod cohomology;
pub mod dsl;
pub mod error;
pub mod gauge;
pub mod linalg;
pub mod report;
pub mod sampling;

pub use error::{Error, Result};
