#[allow(unused_imports)]
use num_traits::Float;
use super::TheoryError;
use crate::linalg::C64;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

/// Dimer family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DimerType {
    /// Centre-of-excitation wavenumber 0, nearest-neighbour separation.
    TypeI,
    /// Centre-of-excitation wavenumber π/d, next-nearest-neighbour separation.
    TypeII,
}

impl DimerType {
    /// Short label.
    pub fn name(&self) -> &'static str {
        match self {
            DimerType::TypeI => "dimer-I",
            DimerType::TypeII => "dimer-II",
        }
    }

    /// Dominant separation in lattice units.
    pub fn dominant_separation(&self) -> usize {
        match self {
            DimerType::TypeI => 1,
            DimerType::TypeII => 2,
        }
    }

    /// Centre-of-excitation wavenumber `K·d`.
    pub fn big_k(&self) -> f64 {
        match self {
            DimerType::TypeI => 0.0,
            DimerType::TypeII => PI,
        }
    }
}

/// Infinite-chain dimer: relative wavenumber `q·d` (Im q > 0) and real eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerTheory {
    /// Family.
    pub kind: DimerType,
    /// Relative wavenumber `q·d`.
    pub q: C64,
    /// Asymptotic eigenvalue.
    pub omega: f64,
}

/// Closed forms `q_I = −i ln cos kd`, `ω_I = 2 cot kd`, and
/// `q_II = [π − i ln cos 2kd]/2`, `ω_II = 2 cot 2kd` (principal logarithm).
pub fn asymptotic_dimer(kd: f64, kind: DimerType) -> Result<DimerTheory, TheoryError> {
    if !(kd > 0.0 && kd < FRAC_PI_2) {
        return Err(TheoryError::Domain("kd must lie in (0, π/2)"));
    }
    match kind {
        DimerType::TypeI => {
            let c = kd.cos();
            Ok(DimerTheory { kind, q: C64::new(0.0, -c.ln()), omega: 2.0 * c / kd.sin() })
        }
        DimerType::TypeII => {
            let c2 = (2.0 * kd).cos();
            let log = C64::new(c2, 0.0).ln();
            let q = (C64::new(PI, 0.0) - C64::new(0.0, 1.0) * log) * 0.5;
            let omega = if (2.0 * kd - FRAC_PI_2).abs() < 1e-15 { 0.0 } else { 2.0 * c2 / (2.0 * kd).sin() };
            Ok(DimerTheory { kind, q, omega })
        }
    }
}

/// Normalized separation distribution on `Δ/d = 1..=delta_max` (index `Δ/d − 1`):
/// `p_I ∝ cos^{2Δ}(kd)`, `p_II ∝ cos^{Δ}(2kd)` on even `Δ` only.
pub fn dimer_profile_pdf(kd: f64, kind: DimerType, delta_max: usize) -> Result<Vec<f64>, TheoryError> {
    if !(kd > 0.0 && kd < FRAC_PI_2) {
        return Err(TheoryError::Domain("kd must lie in (0, π/2)"));
    }
    let lead = kind.dominant_separation();
    if delta_max < lead {
        return Err(TheoryError::Domain("delta_max below the dominant separation"));
    }
    let ratio = match kind {
        DimerType::TypeI => kd.cos().powi(2),
        DimerType::TypeII => (2.0 * kd).cos().abs(),
    };
    let mut p: Vec<f64> = (1..=delta_max)
        .map(|delta| {
            if kind == DimerType::TypeII && delta % 2 == 1 {
                0.0
            } else {
                ratio.powi((delta - lead) as i32)
            }
        })
        .collect();
    let total: f64 = p.iter().sum();
    for x in p.iter_mut() {
        *x /= total;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_pi_values() {
        let one = asymptotic_dimer(0.25 * PI, DimerType::TypeI).unwrap();
        assert!((one.omega - 2.0).abs() < 1e-14);
        let two = asymptotic_dimer(0.25 * PI, DimerType::TypeII).unwrap();
        assert!(two.omega.abs() < 1e-15);
        let p = dimer_profile_pdf(0.25 * PI, DimerType::TypeII, 12).unwrap();
        assert_eq!(p[1], 1.0);
        assert!(p.iter().enumerate().all(|(i, &x)| i == 1 || x < 1e-30));
    }

    #[test]
    fn tenth_pi_type_one_eigenvalue() {
        let d = asymptotic_dimer(0.1 * PI, DimerType::TypeI).unwrap();
        // 2 cot(π/10) = 2 sqrt(5 + 2 sqrt 5)
        let exact = 2.0 * (5.0 + 2.0 * 5f64.sqrt()).sqrt();
        assert!((d.omega - exact).abs() < 1e-13);
        assert!((d.omega - 6.15537).abs() < 1e-5);
    }

    #[test]
    fn imaginary_parts_positive_over_domain() {
        for i in 1..100 {
            let kd = i as f64 * FRAC_PI_2 / 100.0;
            let one = asymptotic_dimer(kd, DimerType::TypeI).unwrap();
            assert!(one.q.im > 0.0);
            assert!((one.q.im + kd.cos().ln()).abs() < 1e-15);
            let two = asymptotic_dimer(kd, DimerType::TypeII).unwrap();
            assert!(two.q.im > 0.0, "kd={kd}");
        }
        assert!(asymptotic_dimer(0.0, DimerType::TypeI).is_err());
        assert!(asymptotic_dimer(FRAC_PI_2, DimerType::TypeII).is_err());
    }

    #[test]
    fn profile_ratios() {
        let p = dimer_profile_pdf(0.25 * PI, DimerType::TypeI, 30).unwrap();
        for w in p.windows(2) {
            assert!((w[1] / w[0] - 0.5).abs() < 1e-12);
        }
        let p = dimer_profile_pdf(0.2 * PI, DimerType::TypeII, 30).unwrap();
        let expect = (0.4 * PI).cos().powi(2);
        assert!((p[3] / p[1] - expect).abs() < 1e-12);
        assert!((expect - 0.0955).abs() < 1e-4);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }
}
