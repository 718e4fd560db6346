use super::{cot, expi, TheoryError};
use crate::linalg::C64;

/// Coefficients of `ℋ⁰|q⟩ = 2ω_q|q⟩ − iΓ(g⁰_q|k⟩ − h⁰_q|−k⟩)` on a chain of `n` emitters,
/// where `|q⟩ = Σ_{Δ=1}^{N−1} e^{iqΔ}|Δ⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCoefficients {
    /// `ω_q = ¼ Σ_± cot((kd ± q)/2)`.
    pub omega_q: C64,
    /// Coefficient of the co-propagating boundary wave.
    pub g0: C64,
    /// Coefficient of the counter-propagating boundary wave.
    pub h0: C64,
    /// Emitter count.
    pub n: usize,
    /// `k₁D·d`.
    pub kd: f64,
    /// `q·d`.
    pub q: C64,
}

/// `ω_q = ¼ Σ_± cot((kd ± q)/2)`.
pub fn omega_q(kd: f64, q: C64) -> C64 {
    let k = C64::new(kd, 0.0);
    (cot((k + q) * 0.5) + cot((k - q) * 0.5)) * 0.25
}

/// Evaluates `ω_q`, `g⁰_q`, `h⁰_q`.
pub fn boundary_coefficients(n: usize, kd: f64, q: C64) -> Result<BoundaryCoefficients, TheoryError> {
    if q.im < 0.0 {
        return Err(TheoryError::Domain("Im q must be non-negative"));
    }
    if n < 2 {
        return Err(TheoryError::Domain("need at least two emitters"));
    }
    let k = C64::new(kd, 0.0);
    let em = expi(q - k);
    let ep = expi(q + k);
    let epn = expi((q + k) * n as f64);
    let one = C64::new(1.0, 0.0);
    let g0 = em / (one - em) + (ep - epn) / (one - ep);
    let h0 = epn / (one - ep);
    Ok(BoundaryCoefficients { omega_q: omega_q(kd, q), g0, h0, n, kd, q })
}

/// Root of the large-chain condition `g⁰_q = 0`,
/// `e^{2ikd} = −(1 − e^{i(q+kd)})/(1 − e^{i(q−kd)})`, which is linear in `e^{iq}`.
pub fn boundary_root(kd: f64) -> C64 {
    let k = C64::new(kd, 0.0);
    let u = (C64::new(1.0, 0.0) + expi(k * 2.0)) / (expi(k) * 2.0);
    C64::new(0.0, -1.0) * u.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::distance;
    use crate::model::{build_relative_hamiltonian, RelativeModelSpec};
    use crate::theory::{asymptotic_dimer, DimerType};
    use alloc::vec::Vec;
    use core::f64::consts::PI;

    #[test]
    fn root_is_type_one_wavenumber_and_doubles_to_omega() {
        for i in 1..40 {
            let kd = i as f64 * 0.0125 * PI;
            let q = boundary_root(kd);
            let theory = asymptotic_dimer(kd, DimerType::TypeI).unwrap();
            assert!((q - theory.q).norm() < 1e-13);
            let w = omega_q(kd, q);
            assert!((w * 2.0 - C64::new(theory.omega, 0.0)).norm() < 1e-12, "kd={kd}");
            if kd.cos().powi(400) < 1e-12 {
                let b = boundary_coefficients(400, kd, q).unwrap();
                assert!(b.g0.norm() < 1e-10 && b.h0.norm() < 1e-10, "kd={kd}");
            }
        }
    }

    #[test]
    fn omega_even_in_q() {
        for (re, im) in [(0.3, 0.2), (-1.1, 0.7), (2.0, 0.05)] {
            let q = C64::new(re, im);
            assert!((omega_q(0.37, q) - omega_q(0.37, -q)).norm() < 1e-13);
        }
    }

    #[test]
    fn relative_hamiltonian_identity_is_exact() {
        for (n, kd, q) in [(12, 0.3, C64::new(0.4, 0.3)), (30, 0.2 * PI, C64::new(-0.2, 0.1)), (7, 1.1, C64::new(0.0, 0.8))] {
            let m = n - 1;
            let h = build_relative_hamiltonian(&RelativeModelSpec::new(0.0, m, kd, 1.0).unwrap());
            let wave = |p: C64| -> Vec<C64> { (1..=m).map(|d| expi(p * d as f64)).collect() };
            let vq = wave(q);
            let vk = wave(C64::new(kd, 0.0));
            let vmk = wave(C64::new(-kd, 0.0));
            let b = boundary_coefficients(n, kd, q).unwrap();
            let lhs = h.matvec(&vq);
            let rhs: Vec<C64> = (0..m)
                .map(|i| b.omega_q * 2.0 * vq[i] - C64::new(0.0, 1.0) * (b.g0 * vk[i] - b.h0 * vmk[i]))
                .collect();
            assert!(distance(&lhs, &rhs) < 1e-11, "n={n}");
        }
    }
}
