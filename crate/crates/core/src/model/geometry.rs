use super::{CouplingKernel, ModelError};
use alloc::vec;
use alloc::vec::Vec;

/// Emitter chain: `n` emitters with lattice spacing `d`, waveguide wavenumber `k1d`,
/// single-emitter rate `gamma1d`, and per-site position offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainGeometry {
    n: usize,
    d: f64,
    k1d: f64,
    gamma1d: f64,
    offsets: Vec<f64>,
}

impl ChainGeometry {
    /// Regular chain without disorder.
    pub fn new(n: usize, d: f64, k1d: f64, gamma1d: f64) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::InvalidChain("need at least one emitter"));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(ModelError::InvalidChain("lattice spacing must be positive"));
        }
        if !(gamma1d > 0.0 && gamma1d.is_finite()) {
            return Err(ModelError::InvalidChain("decay rate must be positive"));
        }
        if !k1d.is_finite() {
            return Err(ModelError::InvalidChain("wavenumber must be finite"));
        }
        Ok(Self { n, d, k1d, gamma1d, offsets: vec![0.0; n] })
    }

    /// Unit spacing and unit rate, parametrized by the dimensionless phase `kd`.
    pub fn uniform(n: usize, kd: f64) -> Result<Self, ModelError> {
        Self::new(n, 1.0, kd, 1.0)
    }

    /// Replaces the position offsets; each must satisfy `|offset| < d/2`.
    pub fn with_offsets(mut self, offsets: Vec<f64>) -> Result<Self, ModelError> {
        if offsets.len() != self.n {
            return Err(ModelError::Dimension { expected: self.n, got: offsets.len() });
        }
        if offsets.iter().any(|o| !o.is_finite() || o.abs() >= 0.5 * self.d) {
            return Err(ModelError::InvalidChain("offsets must lie strictly inside (-d/2, d/2)"));
        }
        self.offsets = offsets;
        Ok(self)
    }

    /// Emitter count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Lattice spacing.
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Waveguide wavenumber.
    pub fn k1d(&self) -> f64 {
        self.k1d
    }

    /// Dimensionless phase per lattice step.
    pub fn kd(&self) -> f64 {
        self.k1d * self.d
    }

    /// Single-emitter decay rate into the waveguide.
    pub fn gamma1d(&self) -> f64 {
        self.gamma1d
    }

    /// Position offsets.
    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// True when no site is displaced.
    pub fn is_regular(&self) -> bool {
        self.offsets.iter().all(|&o| o == 0.0)
    }

    /// Position of site `i`.
    pub fn position(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.d + self.offsets[i]
    }

    /// All positions.
    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.position(i)).collect()
    }

    /// Waveguide kernel with this chain's wavenumber and rate.
    pub fn waveguide_kernel(&self) -> CouplingKernel {
        CouplingKernel::Waveguide1D { k1d: self.k1d, gamma1d: self.gamma1d }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(ChainGeometry::new(0, 1.0, 0.3, 1.0).is_err());
        assert!(ChainGeometry::new(3, -1.0, 0.3, 1.0).is_err());
        assert!(ChainGeometry::new(3, 1.0, 0.3, 0.0).is_err());
        let c = ChainGeometry::uniform(3, 0.3).unwrap();
        assert!(c.clone().with_offsets(vec![0.0, 0.5, 0.0]).is_err());
        assert!(c.clone().with_offsets(vec![0.0, 0.1]).is_err());
        assert!(c.with_offsets(vec![0.1, -0.2, 0.49]).is_ok());
    }

    #[test]
    fn positions_strictly_increase_under_weak_disorder() {
        let c = ChainGeometry::uniform(4, 0.3).unwrap().with_offsets(vec![0.45, -0.45, 0.45, -0.45]).unwrap();
        let z = c.positions();
        assert!(z.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(z[0], 1.45);
    }
}
