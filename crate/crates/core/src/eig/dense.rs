use super::{EigError, EigenPair, Sector, SolverMode, Spectrum, SpectrumMeta};
use crate::linalg::{distance, normalize, schur, CMatrix, Schur, C64};
use alloc::vec;
use alloc::vec::Vec;

/// Every eigenpair of a dense matrix, with residuals.
pub fn eig_dense_all(h: &CMatrix, dense_cap: usize) -> Result<Spectrum, EigError> {
    let pairs = eig_dense_select(h, dense_cap, |_, _| true)?;
    let meta = SpectrumMeta::new(h.rows(), f64::NAN, Sector::Generic, SolverMode::DenseAll);
    Ok(Spectrum::new(pairs, meta))
}

/// Dense decomposition keeping only eigenpairs accepted by `keep(index, λ)`;
/// eigenvectors are formed only for those.
pub fn eig_dense_select(
    h: &CMatrix,
    dense_cap: usize,
    mut keep: impl FnMut(usize, C64) -> bool,
) -> Result<Vec<EigenPair>, EigError> {
    let n = h.rows();
    if n > dense_cap {
        return Err(EigError::DenseCapExceeded { dim: n, cap: dense_cap });
    }
    if !h.is_square() {
        return Err(crate::linalg::LinalgError::Dimension { expected: n, got: h.cols() }.into());
    }
    let s = schur(h)?;
    Ok(vectors_from_schur(h, &s, |k| keep(k, s.t[(k, k)])))
}

/// Eigenpairs for the diagonal positions of an existing Schur form accepted by `keep`.
pub(crate) fn vectors_from_schur(h: &CMatrix, s: &Schur, mut keep: impl FnMut(usize) -> bool) -> Vec<EigenPair> {
    let n = h.rows();
    let t = &s.t;
    let smin = (f64::EPSILON * t.max_abs()).max(f64::MIN_POSITIVE);
    let mut out = Vec::new();
    let mut col = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        let lam = t[(k, k)];
        if !keep(k) {
            continue;
        }
        col[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let row = t.row(i);
            let mut acc = C64::new(0.0, 0.0);
            for j in i + 1..=k {
                acc += row[j] * col[j];
            }
            let mut den = row[i] - lam;
            if den.norm() < smin {
                den = C64::new(smin, 0.0);
            }
            col[i] = -acc / den;
        }
        let mut v = vec![C64::new(0.0, 0.0); n];
        for (r, vr) in v.iter_mut().enumerate() {
            let qrow = s.q.row(r);
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..=k {
                acc += qrow[j] * col[j];
            }
            *vr = acc;
        }
        normalize(&mut v);
        let hv = h.matvec(&v);
        let lv: Vec<C64> = v.iter().map(|x| x * lam).collect();
        let residual = distance(&hv, &lv);
        out.push(EigenPair { lambda: lam, vector: v, residual });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_single_hamiltonian, build_two_hamiltonian, ChainGeometry, TwoExcitationBasis};
    use core::f64::consts::PI;

    #[test]
    fn one_by_one() {
        let h = CMatrix::from_fn(1, 1, |_, _| C64::new(0.0, -0.5));
        let s = eig_dense_all(&h, 10).unwrap();
        assert_eq!(s.pairs()[0].lambda, C64::new(0.0, -0.5));
        assert_eq!(s.pairs()[0].decay_rate(), 1.0);
    }

    #[test]
    fn pair_chain_closed_form() {
        let phi = 0.3 * PI;
        let c = ChainGeometry::uniform(2, phi).unwrap();
        let s = eig_dense_all(&build_single_hamiltonian(&c, &c.waveguide_kernel()).unwrap(), 10).unwrap();
        let e = C64::new(phi.cos(), phi.sin());
        let minus = C64::new(0.0, -0.5) * (C64::new(1.0, 0.0) - e);
        let plus = C64::new(0.0, -0.5) * (C64::new(1.0, 0.0) + e);
        assert!((s.pairs()[0].lambda - minus).norm() < 1e-14);
        assert!((s.pairs()[1].lambda - plus).norm() < 1e-14);
    }

    #[test]
    fn two_excitation_spectrum_obeys_trace_and_residuals() {
        let n = 20;
        let c = ChainGeometry::uniform(n, 0.3 * PI).unwrap();
        let h = build_two_hamiltonian(&c, &c.waveguide_kernel(), &TwoExcitationBasis::new(n)).unwrap();
        let s = eig_dense_all(&h, 6000).unwrap();
        let sum: C64 = s.eigenvalues().iter().sum();
        assert!((sum - C64::new(0.0, -190.0)).norm() < 1e-10 * 190.0);
        let hn = h.max_abs() * (h.rows() as f64).sqrt();
        for p in s.pairs() {
            assert!(p.residual <= 1e-9 * hn);
            assert!(p.lambda.im <= 1e-10);
        }
        let rates: Vec<f64> = s.pairs().iter().map(|p| p.decay_rate()).collect();
        assert!(rates.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn cap_is_enforced() {
        let h = CMatrix::identity(5);
        assert!(matches!(eig_dense_all(&h, 4), Err(EigError::DenseCapExceeded { dim: 5, cap: 4 })));
    }
}
