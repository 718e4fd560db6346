use super::TheoryError;
use crate::eig::match_nearest;
use crate::linalg::{schur, CMatrix, C64};
use crate::model::{build_defect_relative_hamiltonian, build_relative_hamiltonian, RelativeModelSpec};
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

/// Even extension `ψ(−Δ) = ψ(Δ)` onto the defect index set, scaled by `1/√2`.
pub fn fold_even_extension(psi_rel: &[C64]) -> Vec<C64> {
    psi_rel.iter().rev().chain(psi_rel.iter()).map(|&x| x * FRAC_1_SQRT_2).collect()
}

/// Inverse of [`fold_even_extension`] on even vectors: symmetric part restricted to `Δ > 0`.
pub fn unfold_even_extension(psi_def: &[C64]) -> Vec<C64> {
    let m = psi_def.len() / 2;
    (0..m).map(|j| (psi_def[m + j] + psi_def[m - 1 - j]) * FRAC_1_SQRT_2).collect()
}

/// `Sᵀ ℋ^K_def S` with `S` the even-parity isometry; equals `ℋ^K / 2`.
pub fn even_parity_block(spec: &RelativeModelSpec) -> CMatrix {
    let h = build_defect_relative_hamiltonian(spec);
    let m = spec.m;
    CMatrix::from_fn(m, m, |i, j| {
        let (pi, ni, pj, nj) = (m + i, m - 1 - i, m + j, m - 1 - j);
        (h[(pi, pj)] + h[(pi, nj)] + h[(ni, pj)] + h[(ni, nj)]) * 0.5
    })
}

/// Worst deviations of the identities `spec(ℋ^K) = 2·spec(even block of ℋ^K_def)`
/// and `ℋ^K_def·fold(ψ) = fold(ℋ^K ψ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappingCheck {
    /// Largest matched eigenvalue distance.
    pub eigenvalue_mismatch: f64,
    /// Largest entrywise deviation `|2E − ℋ^K|`.
    pub matrix_mismatch: f64,
}

/// Checks the eigenvalue-halving identity for one parameter set.
pub fn halving_check(spec: &RelativeModelSpec) -> Result<MappingCheck, TheoryError> {
    let h = build_relative_hamiltonian(spec);
    let e = even_parity_block(spec);
    let mut matrix_mismatch: f64 = 0.0;
    for i in 0..spec.m {
        for j in 0..spec.m {
            matrix_mismatch = matrix_mismatch.max((e[(i, j)] * 2.0 - h[(i, j)]).norm());
        }
    }
    let rel = schur(&h)?.eigenvalues();
    let def: Vec<C64> = schur(&e)?.eigenvalues().into_iter().map(|x| x * 2.0).collect();
    let matched = match_nearest(&def, &rel).map_err(|_| TheoryError::Domain("eigenvalue matching failed"))?;
    let eigenvalue_mismatch = matched.iter().map(|&(_, d)| d).fold(0.0, f64::max);
    Ok(MappingCheck { eigenvalue_mismatch, matrix_mismatch })
}

/// Largest `‖ℋ^K_def·fold(ψ) − (λ/2)·fold(ψ)‖` over the unit eigenpairs `(λ, ψ)` of `ℋ^K`.
pub fn even_extension_residual(spec: &RelativeModelSpec) -> Result<f64, TheoryError> {
    let h = build_relative_hamiltonian(spec);
    let hdef = build_defect_relative_hamiltonian(spec);
    let pairs = crate::eig::eig_dense_all(&h, usize::MAX).map_err(|_| TheoryError::Domain("dense decomposition failed"))?;
    let mut worst: f64 = 0.0;
    for p in pairs.pairs() {
        let folded = fold_even_extension(&p.vector);
        let lhs = hdef.matvec(&folded);
        let rhs: Vec<C64> = folded.iter().map(|x| x * (p.lambda * 0.5)).collect();
        worst = worst.max(crate::linalg::distance(&lhs, &rhs));
    }
    Ok(worst)
}

/// Gauge map between the `K = π` defect model at `kd` and the `K = 0` model at `2kd`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityReduction {
    /// Original `k₁D·d`.
    pub kd: f64,
    /// Reduced wavenumber `2kd` folded into `[0, 2π)`.
    pub reduced_kd: f64,
}

/// Builds the reduction for `kd`.
pub fn parity_reduce(kd: f64) -> Result<ParityReduction, TheoryError> {
    if !(kd > 0.0 && kd.is_finite()) {
        return Err(TheoryError::Domain("kd must be positive"));
    }
    Ok(ParityReduction { kd, reduced_kd: num_traits::Euclid::rem_euclid(&(2.0 * kd), &(2.0 * PI)) })
}

impl ParityReduction {
    /// Gauge factor `(−1)^ξ` for reduced label `ξ`.
    pub fn gauge(xi: i64) -> f64 {
        if xi.rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Indices (in defect order with half-width `2m`) of even separations, labelled by `ξ = Δ/2`.
    pub fn even_indices(m: usize) -> Vec<(usize, i64)> {
        crate::model::defect_offsets(2 * m)
            .into_iter()
            .enumerate()
            .filter(|(_, d)| d % 2 == 0)
            .map(|(i, d)| (i, d / 2))
            .collect()
    }

    /// Gauged even-`Δ` block of `ℋ^π_def(kd)` with half-width `2m`.
    pub fn gauged_even_block(&self, m: usize, gamma: f64) -> Result<CMatrix, TheoryError> {
        let spec = RelativeModelSpec::new(PI, 2 * m, self.kd, gamma)?;
        let h = build_defect_relative_hamiltonian(&spec);
        let idx = Self::even_indices(m);
        Ok(CMatrix::from_fn(idx.len(), idx.len(), |a, b| {
            let (ia, xa) = idx[a];
            let (ib, xb) = idx[b];
            h[(ia, ib)] * (Self::gauge(xa) * Self::gauge(xb))
        }))
    }

    /// `ℋ⁰_def(2kd)` with half-width `m`.
    pub fn reduced_hamiltonian(&self, m: usize, gamma: f64) -> Result<CMatrix, TheoryError> {
        let spec = RelativeModelSpec::new(0.0, m, self.reduced_kd, gamma)?;
        Ok(build_defect_relative_hamiltonian(&spec))
    }

    /// Largest entrywise deviation between the two matrices.
    pub fn max_deviation(&self, m: usize, gamma: f64) -> Result<f64, TheoryError> {
        let a = self.gauged_even_block(m, gamma)?;
        let b = self.reduced_hamiltonian(m, gamma)?;
        Ok(a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
    }
}
