//! Decay rates, K–Δ decompositions, state classification and scaling fits.

mod classify;
mod fit;
mod kdelta;
mod search;

pub use classify::{classify_state, fermionic_reference, most_subradiant, ClassThresholds, Classifier, StateClass, StateLabel};
pub use fit::{
    default_window, fit_exponential_tail, fit_power_law, period4_modulation, FitModel, FitResult, Period4Report,
};
pub use kdelta::{k_delta_decompose, KDeltaDecomposition};
pub use search::{cluster_branches, find_dimer, localized_state, DimerHit};

use crate::eig::EigenPair;

/// Failures of the analysis routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    /// Input too short for the requested fit.
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints {
        /// Minimum.
        needed: usize,
        /// Supplied.
        got: usize,
    },
    /// Log of a non-positive value requested.
    #[error("non-positive value {value} at abscissa {at}")]
    NonPositive {
        /// Abscissa.
        at: f64,
        /// Offending value.
        value: f64,
    },
    /// State length does not match the chain.
    #[error("state has length {got}, expected {expected}")]
    Dimension {
        /// Two-excitation dimension.
        expected: usize,
        /// Supplied length.
        got: usize,
    },
    /// Nothing carries the requested label.
    #[error("no state labelled {0}")]
    EmptySelection(&'static str),
    /// Eigen-solver failure.
    #[error(transparent)]
    Eig(#[from] crate::eig::EigError),
    /// Model failure.
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
    /// Closed-form failure.
    #[error(transparent)]
    Theory(#[from] crate::theory::TheoryError),
}

/// Decay rate `−2 Im λ` of an eigenpair.
pub fn decay_rate(pair: &EigenPair) -> f64 {
    pair.decay_rate()
}
