//! Numerical laboratory for algebraic curvature operators on R^n.
//!
//! * [`lie`]: so(n) as 2-forms, its bracket and structure constants.
//! * [`operator`]: curvature operators, Ricci contraction, the
//!   `I + Ric0 + W` splitting, the first Bianchi identity, spectra.
//! * [`sharp`]: the `#` product and the reaction term `2(R^2 + R^#)`.
//! * [`cone`]: cone predicates, the pinching family and cone-entry certificates.
//! * [`flow`]: the curvature ODE, boundary sampling and invariance experiments.
//! * [`workbench`]: named generators, file formats and the command line.

pub mod cone;
pub mod error;
pub mod flow;
pub mod lie;
pub mod operator;
pub mod random;
pub mod sharp;
pub mod workbench;

pub use cone::{ConeMargin, ConeSpec, FamilyParams, NormConvention};
pub use error::{Error, Result};
pub use lie::{BasisIndex, LieStructure};
pub use operator::{wedge, CurvatureOperator, IrreducibleParts, Spectrum};
