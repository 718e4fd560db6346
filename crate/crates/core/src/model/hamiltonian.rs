#[allow(unused_imports)]
use num_traits::Float;
use super::{coupling_element, ChainGeometry, CouplingKernel, ModelError, TwoExcitationBasis};
use crate::linalg::{CMatrix, C64};
use alloc::vec::Vec;
use core::f64::consts::TAU;

/// Parameters of the relative-coordinate Hamiltonian at fixed centre-of-excitation
/// wavenumber. Lengths are in units of the lattice spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeModelSpec {
    /// `K·d`.
    pub big_k: f64,
    /// Largest separation index `M`.
    pub m: usize,
    /// `k₁D·d`.
    pub kd: f64,
    /// Single-emitter rate.
    pub gamma: f64,
}

impl RelativeModelSpec {
    /// Validated spec.
    pub fn new(big_k: f64, m: usize, kd: f64, gamma: f64) -> Result<Self, ModelError> {
        if m == 0 {
            return Err(ModelError::InvalidRelative("truncation M must be at least 1"));
        }
        if !(0.0..TAU).contains(&big_k) {
            return Err(ModelError::InvalidRelative("K·d must lie in [0, 2π)"));
        }
        if !(gamma > 0.0) || !kd.is_finite() {
            return Err(ModelError::InvalidRelative("rate must be positive and kd finite"));
        }
        Ok(Self { big_k, m, kd, gamma })
    }

    /// Spec derived from a regular chain, `M = N − 1`.
    pub fn from_chain(chain: &ChainGeometry, big_k: f64) -> Result<Self, ModelError> {
        Self::new(big_k, chain.n().saturating_sub(1), chain.kd(), chain.gamma1d())
    }
}

fn expi(x: f64) -> C64 {
    C64::new(x.cos(), x.sin())
}

fn wave(k: f64, r: f64) -> C64 {
    expi(super::reduced_phase(k, r))
}

/// One-excitation Hamiltonian `H[m][n] = J(|z_m − z_n|)`.
pub fn build_single_hamiltonian(chain: &ChainGeometry, kernel: &CouplingKernel) -> Result<CMatrix, ModelError> {
    let z = chain.positions();
    site_matrix(&z, kernel)
}

fn site_matrix(z: &[f64], kernel: &CouplingKernel) -> Result<CMatrix, ModelError> {
    let n = z.len();
    let mut h = CMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = kernel.self_term();
        for j in 0..i {
            let v = coupling_element(kernel, (z[i] - z[j]).abs())?;
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    Ok(h)
}

/// Hard-core two-excitation Hamiltonian in the pair basis.
pub fn build_two_hamiltonian(
    chain: &ChainGeometry,
    kernel: &CouplingKernel,
    basis: &TwoExcitationBasis,
) -> Result<CMatrix, ModelError> {
    if basis.n() != chain.n() {
        return Err(ModelError::Dimension { expected: chain.n(), got: basis.n() });
    }
    let j = build_single_hamiltonian(chain, kernel)?;
    let n = chain.n();
    let dim = basis.dim();
    let mut h = CMatrix::zeros(dim, dim);
    for (col, (m, k)) in basis.pairs().enumerate() {
        h[(col, col)] = j[(m, m)] + j[(k, k)];
        for a in 0..n {
            if a == m || a == k {
                continue;
            }
            // hop m -> a with k spectating, and k -> a with m spectating
            let r1 = basis.flatten(a, k).expect("valid pair");
            h[(r1, col)] += j[(a, m)];
            let r2 = basis.flatten(m, a).expect("valid pair");
            h[(r2, col)] += j[(a, k)];
        }
    }
    Ok(h)
}

/// One-excitation Hamiltonian of the chain with `site` left empty; remaining
/// emitters keep their positions.
pub fn build_missing_site_hamiltonian(
    chain: &ChainGeometry,
    kernel: &CouplingKernel,
    site: usize,
) -> Result<CMatrix, ModelError> {
    if site >= chain.n() {
        return Err(ModelError::SiteOutOfRange { site, n: chain.n() });
    }
    let z: Vec<f64> = chain.positions().into_iter().enumerate().filter(|&(i, _)| i != site).map(|(_, z)| z).collect();
    site_matrix(&z, kernel)
}

/// `ℋ^K` on separations `Δ/d = 1..M`.
pub fn build_relative_hamiltonian(spec: &RelativeModelSpec) -> CMatrix {
    let pre = C64::new(0.0, -0.5 * spec.gamma);
    CMatrix::from_fn(spec.m, spec.m, |i, j| {
        let (a, b) = ((i + 1) as f64, (j + 1) as f64);
        let half = 0.5 * spec.big_k;
        let (r, t) = ((a - b).abs(), a + b);
        let c = |x: f64| wave(half, x) + wave(-half, x);
        pre * (wave(spec.kd, r) * c(r) + wave(spec.kd, t) * c(t))
    })
}

/// Separation labels `−M..−1, 1..M` of the defect-model index set, in matrix order.
pub fn defect_offsets(m: usize) -> Vec<i64> {
    let m = m as i64;
    (-m..0).chain(1..=m).collect()
}

/// `ℋ^K_def` on separations `±1..±M` (ordered as [`defect_offsets`]).
pub fn build_defect_relative_hamiltonian(spec: &RelativeModelSpec) -> CMatrix {
    let pre = C64::new(0.0, -0.25 * spec.gamma);
    let labels = defect_offsets(spec.m);
    CMatrix::from_fn(labels.len(), labels.len(), |i, j| {
        let r = (labels[i] - labels[j]).abs() as f64;
        let half = 0.5 * spec.big_k;
        pre * wave(spec.kd, r) * (wave(half, r) + wave(-half, r))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::schur;
    use alloc::vec;
    use core::f64::consts::PI;

    fn wg(n: usize, kd: f64) -> (ChainGeometry, CouplingKernel) {
        let c = ChainGeometry::uniform(n, kd).unwrap();
        let k = c.waveguide_kernel();
        (c, k)
    }

    fn sorted_eigs(h: &CMatrix) -> Vec<C64> {
        let mut e = schur(h).unwrap().eigenvalues();
        e.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        e
    }

    #[test]
    fn single_emitter_and_pair() {
        let (c, k) = wg(1, 0.3);
        let h = build_single_hamiltonian(&c, &k).unwrap();
        assert_eq!(h[(0, 0)], C64::new(0.0, -0.5));
        let phi = 0.37 * PI;
        let (c, k) = wg(2, phi);
        let e = sorted_eigs(&build_single_hamiltonian(&c, &k).unwrap());
        let mut expect = vec![
            C64::new(0.0, -0.5) * (C64::new(1.0, 0.0) + expi(phi)),
            C64::new(0.0, -0.5) * (C64::new(1.0, 0.0) - expi(phi)),
        ];
        expect.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (a, b) in e.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn three_emitters_match_characteristic_roots() {
        let (c, k) = wg(3, 0.2 * PI);
        let h = build_single_hamiltonian(&c, &k).unwrap();
        // det(H − λ) = −λ³ + c2 λ² − c1 λ + c0 expanded independently
        let (a, b, e) = (h[(0, 0)], h[(0, 1)], h[(0, 2)]);
        let tr = a * 3.0;
        let minors = a * a * 3.0 - b * b * 2.0 - e * e;
        let det = a * a * a + b * b * e * 2.0 - a * (b * b * 2.0 + e * e);
        for lam in sorted_eigs(&h) {
            let p = -lam * lam * lam + tr * lam * lam - minors * lam + det;
            assert!(p.norm() < 1e-12, "{p}");
        }
    }

    #[test]
    fn two_excitation_pair_and_trace() {
        let (c, k) = wg(2, 0.3);
        let h = build_two_hamiltonian(&c, &k, &TwoExcitationBasis::new(2)).unwrap();
        assert_eq!(h.rows(), 1);
        assert!((h[(0, 0)] - C64::new(0.0, -1.0)).norm() < 1e-15);
        for n in [3, 7, 12] {
            let (c, k) = wg(n, 0.41);
            let h = build_two_hamiltonian(&c, &k, &TwoExcitationBasis::new(n)).unwrap();
            let expect = C64::new(0.0, -((n * (n - 1) / 2) as f64));
            assert!((h.trace() - expect).norm() < 1e-13 * expect.norm());
            assert!(h.asymmetry() <= 1e-14 * h.max_abs());
        }
    }

    #[test]
    fn two_excitation_matches_product_space_construction() {
        let n = 4;
        let (c, k) = wg(n, 0.25 * PI);
        let j = build_single_hamiltonian(&c, &k).unwrap();
        // full 2^n space, σ†_a σ_b on bit strings, projected on weight-two states
        let full = 1usize << n;
        let mut big = CMatrix::zeros(full, full);
        for s in 0..full {
            for a in 0..n {
                for b in 0..n {
                    if s & (1 << b) == 0 {
                        continue;
                    }
                    let t = s & !(1 << b);
                    if t & (1 << a) != 0 {
                        continue;
                    }
                    big[(t | (1 << a), s)] += j[(a, b)];
                }
            }
        }
        let states: Vec<usize> = (0..full).filter(|s: &usize| s.count_ones() == 2).collect();
        let projected = big.select(&states, &states);
        let h = build_two_hamiltonian(&c, &k, &TwoExcitationBasis::new(n)).unwrap();
        for (x, y) in sorted_eigs(&projected).iter().zip(sorted_eigs(&h).iter()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn missing_site_reduces_to_wider_pair() {
        let (c, k) = wg(3, 0.3);
        let h = build_missing_site_hamiltonian(&c, &k, 1).unwrap();
        let wide = ChainGeometry::new(2, 2.0, 0.3, 1.0).unwrap();
        let expect = build_single_hamiltonian(&wide, &wide.waveguide_kernel()).unwrap();
        assert!(crate::linalg::distance(h.as_slice(), expect.as_slice()) < 1e-15);
        assert!(build_missing_site_hamiltonian(&c, &k, 3).is_err());
    }

    #[test]
    fn relative_hamiltonian_closed_forms() {
        let kd = 0.3;
        let h = build_relative_hamiltonian(&RelativeModelSpec::new(0.0, 1, kd, 1.0).unwrap());
        let expect = C64::new(0.0, -1.0) * (C64::new(1.0, 0.0) + expi(2.0 * kd));
        assert!((h[(0, 0)] - expect).norm() < 1e-15);
        let h = build_relative_hamiltonian(&RelativeModelSpec::new(0.0, 6, kd, 1.0).unwrap());
        for i in 0..6 {
            for j in 0..6 {
                let (a, b) = ((i + 1) as f64, (j + 1) as f64);
                let e = C64::new(0.0, -1.0) * (expi(kd * (a - b).abs()) + expi(kd * (a + b)));
                assert!((h[(i, j)] - e).norm() < 1e-14);
            }
        }
        assert!(h.asymmetry() < 1e-15);
    }

    #[test]
    fn k_pi_decouples_odd_separations() {
        let spec = RelativeModelSpec::new(PI, 20, 0.2 * PI, 1.0).unwrap();
        let h = build_relative_hamiltonian(&spec);
        let hd = build_defect_relative_hamiltonian(&spec);
        for i in 0..20 {
            for j in 0..20 {
                if (i + j) % 2 == 1 {
                    assert!(h[(i, j)].norm() < 1e-14);
                }
            }
        }
        let labels = defect_offsets(20);
        for i in 0..40 {
            for j in 0..40 {
                if (labels[i] - labels[j]).abs() % 2 == 1 {
                    assert!(hd[(i, j)].norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn defect_model_reduces_to_defect_chain_at_k_zero() {
        let kd = 0.23 * PI;
        let spec = RelativeModelSpec::new(0.0, 4, kd, 1.0).unwrap();
        let hd = build_defect_relative_hamiltonian(&spec);
        let labels = defect_offsets(4);
        for i in 0..8 {
            for j in 0..8 {
                let e = C64::new(0.0, -0.5) * expi(kd * (labels[i] - labels[j]).abs() as f64);
                assert!((hd[(i, j)] - e).norm() < 1e-15);
                assert!((hd[(i, j)] - hd[(7 - i, 7 - j)]).norm() < 1e-15);
            }
        }
        let spec = RelativeModelSpec::new(0.0, 1, kd, 1.0).unwrap();
        let hd = build_defect_relative_hamiltonian(&spec);
        let v = hd.matvec(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        let lam = C64::new(0.0, -0.5) * (C64::new(1.0, 0.0) + expi(2.0 * kd));
        assert!((v[0] - lam).norm() < 1e-15 && (v[1] - lam).norm() < 1e-15);
    }

    #[test]
    fn relative_spec_validation() {
        assert!(RelativeModelSpec::new(0.0, 0, 0.3, 1.0).is_err());
        assert!(RelativeModelSpec::new(TAU, 3, 0.3, 1.0).is_err());
        assert!(RelativeModelSpec::new(-0.1, 3, 0.3, 1.0).is_err());
    }
}
