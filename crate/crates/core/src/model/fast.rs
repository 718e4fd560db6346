#[allow(unused_imports)]
use num_traits::Float;
use super::{ChainGeometry, CouplingKernel, ModelError, TwoExcitationBasis};
use crate::linalg::C64;
use alloc::vec;
use alloc::vec::Vec;

/// Precomputed bond phases for O(N²) application of the two-excitation
/// waveguide Hamiltonian.
#[derive(Debug, Clone)]
pub struct FastTwoExcitation {
    n: usize,
    bond: Vec<C64>,
    pre: C64,
}

impl FastTwoExcitation {
    /// Prepares the operator; only the waveguide kernel has the needed structure.
    pub fn new(chain: &ChainGeometry, kernel: &CouplingKernel) -> Result<Self, ModelError> {
        let CouplingKernel::Waveguide1D { k1d, gamma1d } = *kernel else {
            return Err(ModelError::UnsupportedKernel);
        };
        let z = chain.positions();
        let mut bond = vec![C64::new(1.0, 0.0); chain.n()];
        for i in 1..chain.n() {
            let phi = super::reduced_phase(k1d, z[i] - z[i - 1]);
            bond[i] = C64::new(phi.cos(), phi.sin());
        }
        Ok(Self { n: chain.n(), bond, pre: C64::new(0.0, -0.5 * gamma1d) })
    }

    /// Emitter count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Sector dimension.
    pub fn dim(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    /// `y = J x` for the one-excitation kernel matrix `J`, by forward and backward
    /// prefix recursions.
    pub fn apply_single(&self, x: &[C64], y: &mut [C64]) {
        let n = self.n;
        let mut f = C64::new(0.0, 0.0);
        for i in 0..n {
            f = self.bond[i] * f + x[i];
            y[i] = f;
        }
        let mut b = C64::new(0.0, 0.0);
        for i in (0..n).rev() {
            b = b + x[i];
            y[i] = self.pre * (y[i] + b - x[i]);
            b *= self.bond[i];
        }
    }

    /// Two-excitation product `y = H ψ`.
    pub fn apply(&self, psi: &[C64], out: &mut [C64]) {
        let n = self.n;
        assert_eq!(psi.len(), self.dim(), "state length");
        assert_eq!(out.len(), self.dim(), "output length");
        let mut x = vec![C64::new(0.0, 0.0); n * n];
        let mut idx = 0;
        for m in 0..n {
            for k in m + 1..n {
                x[m * n + k] = psi[idx];
                x[k * n + m] = psi[idx];
                idx += 1;
            }
        }
        let mut w = vec![C64::new(0.0, 0.0); n * n];
        for m in 0..n {
            self.apply_single(&x[m * n..(m + 1) * n], &mut w[m * n..(m + 1) * n]);
        }
        let mut idx = 0;
        for m in 0..n {
            for k in m + 1..n {
                out[idx] = w[m * n + k] + w[k * n + m];
                idx += 1;
            }
        }
    }
}

/// Two-excitation product `H ψ` in O(N²) operations.
pub fn apply_two_fast(
    chain: &ChainGeometry,
    kernel: &CouplingKernel,
    basis: &TwoExcitationBasis,
    psi: &[C64],
) -> Result<Vec<C64>, ModelError> {
    if basis.n() != chain.n() {
        return Err(ModelError::Dimension { expected: chain.n(), got: basis.n() });
    }
    if psi.len() != basis.dim() {
        return Err(ModelError::Dimension { expected: basis.dim(), got: psi.len() });
    }
    let op = FastTwoExcitation::new(chain, kernel)?;
    let mut out = vec![C64::new(0.0, 0.0); psi.len()];
    op.apply(psi, &mut out);
    Ok(out)
}
