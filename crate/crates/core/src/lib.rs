//! Riccati-Padé eigenvalue solver for perturbed Coulomb problems.

pub mod error;
pub mod hankel;
pub mod models;
pub mod mp;
pub mod series;
pub mod solver;

pub use error::{Result, RpmError};
pub use mp::{DecimalValue, MpComplex};
pub use series::{build_qgrid, riccati_coefficients, DecimalPotential, PotentialSpec, QGrid, RiccatiCoefficients};
pub use solver::{ConvergenceReport, RootSequence, SolveOptions};
