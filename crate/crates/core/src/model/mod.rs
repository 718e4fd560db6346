//! Chain geometry, coupling kernels and every Hamiltonian variant, including a
//! matrix-free O(N²) application of the two-excitation Hamiltonian.
//!
//! Sites are zero-based: site `i` sits at `z_i = (i + 1)·d + offset_i`.

mod basis;
mod fast;
mod geometry;
mod hamiltonian;
mod kernel;
mod tails;

pub use basis::TwoExcitationBasis;
pub use fast::{apply_two_fast, FastTwoExcitation};
pub use geometry::ChainGeometry;
pub use hamiltonian::{
    build_defect_relative_hamiltonian, build_missing_site_hamiltonian, build_relative_hamiltonian,
    build_single_hamiltonian, build_two_hamiltonian, defect_offsets, RelativeModelSpec,
};
pub use kernel::{coupling_element, reduced_phase, CouplingKernel};
pub use tails::{k_delta_state, tails_residual};

/// Invalid model input.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    /// Chain parameters violate an invariant.
    #[error("invalid chain: {0}")]
    InvalidChain(&'static str),
    /// A separation was negative, negative zero or not finite.
    #[error("invalid separation {0}")]
    InvalidSeparation(f64),
    /// The operation needs the one-dimensional waveguide kernel.
    #[error("operation requires the waveguide kernel")]
    UnsupportedKernel,
    /// Site index outside the chain.
    #[error("site {site} outside chain of {n} emitters")]
    SiteOutOfRange {
        /// Offending site.
        site: usize,
        /// Chain length.
        n: usize,
    },
    /// Vector or basis size disagrees with the chain.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension {
        /// Expected size.
        expected: usize,
        /// Received size.
        got: usize,
    },
    /// Relative-model parameters out of range.
    #[error("invalid relative model: {0}")]
    InvalidRelative(&'static str),
}
