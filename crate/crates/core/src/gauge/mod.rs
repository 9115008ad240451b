//! Gauge-theoretic functionals, the instanton flow, cohomology and the
//! finite-dimensional shadows of the deformation theory.

pub mod cohomology;
pub mod deform;
pub mod flow;
pub mod functionals;

use thiserror::Error;

use crate::lattice::LatticeError;

pub use cohomology::*;
pub use deform::*;
pub use flow::*;
pub use functionals::*;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaugeError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("energy became non-finite at iteration {iteration}")]
    Divergence { iteration: usize },
    #[error("Newton iteration did not converge (residual {residual:e} after {iterations} steps)")]
    NewtonNonConvergence { iterations: usize, residual: f64 },
    #[error("input norm {norm:e} exceeds the radius {radius:e}")]
    OutsideRadius { norm: f64, radius: f64 },
    #[error("input is not harmonic (relative defect {defect:e})")]
    NotHarmonic { defect: f64 },
    #[error("the operation needs a translation-invariant (constant) background")]
    NotTranslationInvariant,
    #[error("degree {0} is not supported")]
    Degree(usize),
    #[error("io: {0}")]
    Io(String),
}
