#[allow(unused_imports)]
use num_traits::Float;
use crate::linalg::{norm2, CMatrix, C64};
use crate::model::FastTwoExcitation;
use alloc::vec;
use alloc::vec::Vec;

/// Matrix-vector product of a square operator.
pub trait LinearOperator {
    /// Dimension.
    fn dim(&self) -> usize;

    /// `y = H x`.
    fn apply(&self, x: &[C64], y: &mut [C64]);

    /// Rough 2-norm estimate from a few power steps.
    fn norm_estimate(&self) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 0.0;
        }
        let mut x: Vec<C64> = (0..n).map(|i| C64::new(1.0, (i as f64 * 0.618).sin())).collect();
        let mut y = vec![C64::new(0.0, 0.0); n];
        let mut est = 0.0;
        for _ in 0..4 {
            let nx = norm2(&x);
            self.apply(&x, &mut y);
            est = norm2(&y) / nx;
            core::mem::swap(&mut x, &mut y);
        }
        est
    }
}

/// Explicit matrix as an operator.
#[derive(Debug, Clone, Copy)]
pub struct DenseOperator<'a> {
    h: &'a CMatrix,
}

impl<'a> DenseOperator<'a> {
    /// Wraps a square matrix.
    pub fn new(h: &'a CMatrix) -> Self {
        Self { h }
    }
}

impl LinearOperator for DenseOperator<'_> {
    fn dim(&self) -> usize {
        self.h.rows()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.h.matvec_into(x, y);
    }
}

/// Two-excitation waveguide Hamiltonian applied in O(N²).
#[derive(Debug, Clone)]
pub struct TwoExcitationOperator {
    fast: FastTwoExcitation,
}

impl TwoExcitationOperator {
    /// Wraps the fast product.
    pub fn new(fast: FastTwoExcitation) -> Self {
        Self { fast }
    }
}

impl LinearOperator for TwoExcitationOperator {
    fn dim(&self) -> usize {
        self.fast.dim()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.fast.apply(x, y);
    }
}
