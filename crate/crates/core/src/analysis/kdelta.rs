#[allow(unused_imports)]
use num_traits::Float;
use super::AnalysisError;
use crate::linalg::C64;
use crate::model::{ChainGeometry, TwoExcitationBasis};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Frame coefficients of a two-excitation state on `|K_j;Δ⟩`, `K_j = 2πj/(Nd)`.
///
/// For fixed `Δ` the `N` plane waves over the `N − Δ` pair centres form a tight
/// frame with bound `N/(N−Δ)`, so the minimum-norm least-squares coefficients are
/// `a(K,Δ) = ((N−Δ)/N)⟨K;Δ|ψ⟩` and the reconstruction residual vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct KDeltaDecomposition {
    /// Emitter count.
    pub n: usize,
    /// `K_j·d` in `(−π, π]`, ascending.
    pub k_grid: Vec<f64>,
    /// `amplitudes[Δ−1][j]`.
    pub amplitudes: Vec<Vec<C64>>,
    /// `Σ_Δ |a(K_j,Δ)|²` normalised to unit sum.
    pub k_marginal: Vec<f64>,
    /// `‖ψ_Δ‖²` (raw weight on separation `Δ`), index `Δ−1`.
    pub delta_marginal: Vec<f64>,
    /// Frame reconstruction residual relative to `‖ψ‖`.
    pub residual: f64,
}

impl KDeltaDecomposition {
    /// `Σ |a|²`.
    pub fn total_weight(&self) -> f64 {
        self.amplitudes.iter().flatten().map(|a| a.norm_sqr()).sum()
    }

    /// Separation (lattice units) with the largest weight.
    pub fn dominant_delta(&self) -> usize {
        argmax(&self.delta_marginal) + 1
    }

    /// `K·d` with the largest marginal.
    pub fn dominant_k(&self) -> f64 {
        self.k_grid[argmax(&self.k_marginal)]
    }

    /// K-marginal weight with `|K·d| < π/2`.
    pub fn central_k_weight(&self) -> f64 {
        self.k_grid.iter().zip(&self.k_marginal).filter(|(k, _)| k.abs() < 0.5 * PI).map(|(_, w)| w).sum()
    }

    /// Weight on odd separations relative to the total.
    pub fn odd_delta_weight(&self) -> f64 {
        let total: f64 = self.delta_marginal.iter().sum();
        self.delta_marginal.iter().step_by(2).sum::<f64>() / total
    }

    /// Weight beyond separation `delta` relative to the total.
    pub fn weight_beyond(&self, delta: usize) -> f64 {
        let total: f64 = self.delta_marginal.iter().sum();
        self.delta_marginal.iter().skip(delta).sum::<f64>() / total
    }
}

fn argmax(v: &[f64]) -> usize {
    v.iter().enumerate().fold(0, |best, (i, &x)| if x > v[best] { i } else { best })
}

/// Projects `state` (pair order of [`TwoExcitationBasis`]) onto the `|K;Δ⟩` frame.
pub fn k_delta_decompose(state: &[C64], chain: &ChainGeometry) -> Result<KDeltaDecomposition, AnalysisError> {
    let n = chain.n();
    let basis = TwoExcitationBasis::new(n);
    if state.len() != basis.dim() {
        return Err(AnalysisError::Dimension { expected: basis.dim(), got: state.len() });
    }
    let d = chain.d();
    let z = chain.positions();
    let mut j_order: Vec<i64> = (0..n as i64).map(|j| if 2 * j > n as i64 { j - n as i64 } else { j }).collect();
    j_order.sort();
    let k_grid: Vec<f64> = j_order.iter().map(|&j| 2.0 * PI * j as f64 / n as f64).collect();
    let mut by_delta: Vec<Vec<(f64, C64)>> = vec![Vec::new(); n.saturating_sub(1)];
    for ((a, b), &amp) in basis.pairs().zip(state) {
        by_delta[b - a - 1].push((0.5 * (z[a] + z[b]) / d, amp));
    }
    let mut amplitudes = Vec::with_capacity(by_delta.len());
    let mut delta_marginal = Vec::with_capacity(by_delta.len());
    let mut recon = 0.0;
    for (di, cell) in by_delta.iter().enumerate() {
        let delta = di + 1;
        let raw: f64 = cell.iter().map(|(_, a)| a.norm_sqr()).sum();
        delta_marginal.push(raw);
        let row: Vec<C64> = k_grid
            .iter()
            .map(|&k| {
                let s: C64 = cell.iter().map(|&(zc, a)| C64::from_polar(1.0, -k * zc) * a).sum();
                s * ((n - delta) as f64).sqrt() / n as f64
            })
            .collect();
        let mut err = 0.0;
        for &(zc, a) in cell {
            let back: C64 =
                k_grid.iter().zip(&row).map(|(&k, &c)| C64::from_polar(1.0, k * zc) * c).sum::<C64>() / ((n - delta) as f64).sqrt();
            err += (back - a).norm_sqr();
        }
        recon += err;
        amplitudes.push(row);
    }
    let mut k_marginal = vec![0.0; n];
    for row in &amplitudes {
        for (w, a) in k_marginal.iter_mut().zip(row) {
            *w += a.norm_sqr();
        }
    }
    let total: f64 = k_marginal.iter().sum();
    if total > 0.0 {
        k_marginal.iter_mut().for_each(|w| *w /= total);
    }
    let norm: f64 = delta_marginal.iter().sum();
    let residual = if norm > 0.0 { (recon / norm).sqrt() } else { 0.0 };
    Ok(KDeltaDecomposition { n, k_grid, amplitudes, k_marginal, delta_marginal, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::normalize;
    use crate::model::k_delta_state;
    use proptest::prelude::*;

    #[test]
    fn pure_frame_element() {
        let n = 24;
        let chain = ChainGeometry::uniform(n, 0.3).unwrap();
        for (j, delta) in [(0i64, 1usize), (12, 2), (-5, 3)] {
            let big_k = 2.0 * PI * j as f64 / n as f64;
            let mut psi = k_delta_state(&chain, big_k, delta).unwrap();
            normalize(&mut psi);
            let dec = k_delta_decompose(&psi, &chain).unwrap();
            assert_eq!(dec.dominant_delta(), delta);
            let kd = dec.dominant_k();
            assert!(((kd - big_k).rem_euclid(2.0 * PI)).min((big_k - kd).rem_euclid(2.0 * PI)) < 1e-12);
            let peak = dec.amplitudes[delta - 1].iter().map(|a| a.norm()).fold(0.0, f64::max);
            assert!((peak - (n - delta) as f64 / n as f64).abs() < 1e-12);
            assert!(dec.residual < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn weight_bounded_and_complete(n in 3usize..14, seed in proptest::collection::vec(-1.0f64..1.0, 200)) {
            let chain = ChainGeometry::uniform(n, 0.4).unwrap();
            let dim = n * (n - 1) / 2;
            let mut psi: Vec<C64> = (0..dim).map(|i| C64::new(seed[2 * i % 200], seed[(2 * i + 1) % 200])).collect();
            if normalize(&mut psi) == 0.0 { return Ok(()); }
            let dec = k_delta_decompose(&psi, &chain).unwrap();
            prop_assert!(dec.total_weight() <= 1.0 + 1e-10);
            prop_assert!(dec.residual < 1e-10);
            prop_assert!((dec.delta_marginal.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_wrong_length() {
        let chain = ChainGeometry::uniform(5, 0.4).unwrap();
        assert!(k_delta_decompose(&[C64::new(1.0, 0.0); 3], &chain).is_err());
    }
}
