#[allow(unused_imports)]
use num_traits::Float;
use super::{ChainGeometry, FastTwoExcitation, ModelError, RelativeModelSpec, TwoExcitationBasis};
use crate::linalg::C64;
use crate::model::build_relative_hamiltonian;
use alloc::vec;
use alloc::vec::Vec;

/// Unnormalized `|K;Δ⟩ = Σ_{Z_c} e^{iK Z_c} |Z_c − Δ/2, Z_c + Δ/2⟩` with `Δ = delta·d`
/// and `K` given as `K·d`.
pub fn k_delta_state(chain: &ChainGeometry, big_k: f64, delta: usize) -> Result<Vec<C64>, ModelError> {
    let n = chain.n();
    if delta == 0 || delta >= n {
        return Err(ModelError::InvalidRelative("separation must lie in 1..N-1"));
    }
    let basis = TwoExcitationBasis::new(n);
    let z = chain.positions();
    let k = big_k / chain.d();
    let mut v = vec![C64::new(0.0, 0.0); basis.dim()];
    for j in 0..n - delta {
        let zc = 0.5 * (z[j] + z[j + delta]);
        let idx = basis.flatten(j, j + delta).expect("valid pair");
        v[idx] = C64::new((k * zc).cos(), (k * zc).sin());
    }
    Ok(v)
}

/// `H_eff|K;Δ⟩ − Σ_{Δ′} ℋ^K_{Δ,Δ′}|K;Δ′⟩` expanded on site pairs, for the waveguide kernel.
pub fn tails_residual(chain: &ChainGeometry, big_k: f64, delta: usize) -> Result<Vec<C64>, ModelError> {
    let n = chain.n();
    let state = k_delta_state(chain, big_k, delta)?;
    let op = FastTwoExcitation::new(chain, &chain.waveguide_kernel())?;
    let mut out = vec![C64::new(0.0, 0.0); state.len()];
    op.apply(&state, &mut out);
    let k_reduced = num_traits::Euclid::rem_euclid(&big_k, &core::f64::consts::TAU);
    let spec = RelativeModelSpec::new(k_reduced, n - 1, chain.kd(), chain.gamma1d())?;
    let rel = build_relative_hamiltonian(&spec);
    for dp in 1..n {
        let coef = rel[(delta - 1, dp - 1)];
        let other = k_delta_state(chain, big_k, dp)?;
        for (o, s) in out.iter_mut().zip(&other) {
            *o -= coef * s;
        }
    }
    Ok(out)
}
