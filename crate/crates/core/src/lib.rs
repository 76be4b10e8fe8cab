//! Iterative ground state of the double-well potential
//! `V(x) = (g^2/2)(x^2 - 1)^2 (x^2 + a)`.
//!
//! The ground state is written as `psi = phi f` with a trial function `phi`
//! built from the leading semiclassical orders. The remaining factor `f` and
//! the energy are refined by a hierarchy of nested integrals whose iterates
//! bound the exact answer monotonically. The crate also ships the closed
//! forms, the analysis of the region where the construction is guaranteed to
//! converge, and a finite-difference reference solver.

pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod grid;
pub mod hierarchy;
pub mod oracle;
pub mod polynomials;
pub mod quadrature;
pub mod region;
pub mod scalar;
pub mod tables;
pub mod trial;

pub use closed_forms::{PotentialParams, SingularityHandling};
pub use error::{Error, Result};
pub use grid::{Grid, LogGridFunction, PanelField};
pub use hierarchy::{solve, BoundaryCondition, SolveOptions, SolveReport};
pub use quadrature::{QuadratureKind, QuadratureRule};
pub use scalar::{Field, Real};
pub use trial::{build_trial, TrialFunction};

pub type Params = PotentialParams<f64>;
pub type Report = SolveReport<f64>;
pub type Trial = TrialFunction<f64>;
