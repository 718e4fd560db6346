//! Closed-form dimer results and exact identities between the relative-coordinate
//! and defect models. Wavenumbers are dimensionless (`q·d`, `k₁D·d`) and
//! frequencies are in units of the single-emitter rate.

mod boundary;
mod defect;
mod dimer;
mod mapping;

pub use boundary::{boundary_coefficients, boundary_root, omega_q, BoundaryCoefficients};
pub use defect::{defect_delta, secular_function, solve_defect_secular, DefectSolution};
pub use dimer::{asymptotic_dimer, dimer_profile_pdf, DimerTheory, DimerType};
pub use mapping::{
    even_extension_residual, even_parity_block, fold_even_extension, halving_check, parity_reduce, unfold_even_extension, MappingCheck,
    ParityReduction,
};

use crate::linalg::C64;

/// Failures of the closed-form evaluations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TheoryError {
    /// Parameter outside the formula's domain.
    #[error("outside domain: {0}")]
    Domain(&'static str),
    /// Newton iteration did not settle.
    #[error("Newton iteration stalled at q = {q} with |f| = {residual:.3e} after {iterations} steps")]
    NewtonFailed {
        /// Last iterate.
        q: C64,
        /// Last residual modulus.
        residual: f64,
        /// Steps taken.
        iterations: usize,
    },
    /// Underlying model error.
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
    /// Underlying dense-kernel error.
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

pub(crate) fn expi(z: C64) -> C64 {
    (C64::new(0.0, 1.0) * z).exp()
}

pub(crate) fn cot(z: C64) -> C64 {
    z.cos() / z.sin()
}
