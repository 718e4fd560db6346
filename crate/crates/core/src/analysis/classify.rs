#[allow(unused_imports)]
use num_traits::Float;
use super::{k_delta_decompose, AnalysisError, KDeltaDecomposition};
use crate::eig::{eig_dense_all, EigenPair};
use crate::linalg::{norm2, C64};
use crate::model::{build_single_hamiltonian, ChainGeometry, TwoExcitationBasis};
use crate::theory::{asymptotic_dimer, DimerType};
use alloc::vec::Vec;

/// Classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateLabel {
    /// Type-I dimer.
    DimerI,
    /// Type-II dimer.
    DimerII,
    /// Antisymmetrised pair of one-excitation modes.
    Fermionic,
    /// Anything else.
    Other,
}

impl StateLabel {
    /// Short label.
    pub fn name(&self) -> &'static str {
        match self {
            StateLabel::DimerI => "dimer-I",
            StateLabel::DimerII => "dimer-II",
            StateLabel::Fermionic => "fermionic",
            StateLabel::Other => "other",
        }
    }

    /// Dimer family, if any.
    pub fn dimer(&self) -> Option<DimerType> {
        match self {
            StateLabel::DimerI => Some(DimerType::TypeI),
            StateLabel::DimerII => Some(DimerType::TypeII),
            _ => None,
        }
    }
}

impl From<DimerType> for StateLabel {
    fn from(t: DimerType) -> Self {
        match t {
            DimerType::TypeI => StateLabel::DimerI,
            DimerType::TypeII => StateLabel::DimerII,
        }
    }
}

/// Classification thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassThresholds {
    /// Maximal `|Re λ − ω_type|` for a dimer label.
    pub eigenvalue_window: f64,
    /// Minimal overlap with an antisymmetrised one-excitation pair.
    pub overlap: f64,
    /// Minimal K-marginal weight in the dimer's half of the Brillouin zone.
    pub k_concentration: f64,
    /// Number of most subradiant one-excitation modes used to build pairs.
    pub fermion_modes: usize,
}

impl Default for ClassThresholds {
    fn default() -> Self {
        ClassThresholds { eigenvalue_window: 0.5, overlap: 0.9, k_concentration: 0.5, fermion_modes: 8 }
    }
}

/// Label with the metrics it was derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct StateClass {
    /// Assigned label.
    pub label: StateLabel,
    /// `|Re λ − ω_I|` (NaN when undefined).
    pub distance_i: f64,
    /// `|Re λ − ω_II|` (NaN when undefined).
    pub distance_ii: f64,
    /// Dominant separation.
    pub dominant_delta: usize,
    /// Dominant `K·d`.
    pub dominant_k: f64,
    /// K-marginal weight with `|K·d| < π/2`.
    pub central_k_weight: f64,
    /// Weight on odd separations.
    pub odd_delta_weight: f64,
    /// Best overlap with an antisymmetrised one-excitation pair.
    pub fermion_overlap: f64,
    /// Thresholds used.
    pub thresholds: ClassThresholds,
}

/// Classifier bound to one chain; caches the one-excitation modes.
#[derive(Debug, Clone)]
pub struct Classifier {
    chain: ChainGeometry,
    thresholds: ClassThresholds,
    omega_i: f64,
    omega_ii: f64,
    modes: Vec<Vec<C64>>,
}

impl Classifier {
    /// Builds the classifier with default thresholds.
    pub fn new(chain: &ChainGeometry) -> Result<Self, AnalysisError> {
        Self::with_thresholds(chain, ClassThresholds::default())
    }

    /// Builds the classifier.
    pub fn with_thresholds(chain: &ChainGeometry, thresholds: ClassThresholds) -> Result<Self, AnalysisError> {
        let h = build_single_hamiltonian(chain, &chain.waveguide_kernel())?;
        let spec = eig_dense_all(&h, usize::MAX)?;
        let modes = spec.into_pairs().into_iter().take(thresholds.fermion_modes).map(|p| p.vector).collect();
        let omega = |t| asymptotic_dimer(chain.kd(), t).map(|d| d.omega * chain.gamma1d()).unwrap_or(f64::NAN);
        Ok(Classifier {
            chain: chain.clone(),
            thresholds,
            omega_i: omega(DimerType::TypeI),
            omega_ii: omega(DimerType::TypeII),
            modes,
        })
    }

    /// Asymptotic eigenvalue of a dimer family on this chain.
    pub fn omega(&self, kind: DimerType) -> f64 {
        match kind {
            DimerType::TypeI => self.omega_i,
            DimerType::TypeII => self.omega_ii,
        }
    }

    /// Best `|⟨u_a ∧ u_b|ψ⟩|/(‖u_a ∧ u_b‖‖ψ‖)` over the cached modes.
    pub fn fermion_overlap(&self, state: &[C64]) -> f64 {
        let basis = TwoExcitationBasis::new(self.chain.n());
        let sn = norm2(state);
        if sn == 0.0 {
            return 0.0;
        }
        let mut best: f64 = 0.0;
        for a in 0..self.modes.len() {
            for b in a + 1..self.modes.len() {
                let (u, v) = (&self.modes[a], &self.modes[b]);
                let mut dot = C64::new(0.0, 0.0);
                let mut nn = 0.0;
                for ((m, n), &s) in basis.pairs().zip(state) {
                    let phi = u[m] * v[n] - u[n] * v[m];
                    dot += phi.conj() * s;
                    nn += phi.norm_sqr();
                }
                if nn > 0.0 {
                    best = best.max(dot.norm() / (nn.sqrt() * sn));
                }
            }
        }
        best
    }

    /// Classifies a two-excitation eigenpair.
    pub fn classify(&self, pair: &EigenPair) -> Result<StateClass, AnalysisError> {
        let dec = k_delta_decompose(&pair.vector, &self.chain)?;
        Ok(self.classify_with(pair, &dec))
    }

    /// Classifies using a precomputed decomposition.
    pub fn classify_with(&self, pair: &EigenPair, dec: &KDeltaDecomposition) -> StateClass {
        let t = self.thresholds;
        let re = pair.lambda.re;
        let distance_i = (re - self.omega_i).abs();
        let distance_ii = (re - self.omega_ii).abs();
        let central = dec.central_k_weight();
        let dominant_delta = dec.dominant_delta();
        let fermion_overlap = self.fermion_overlap(&pair.vector);
        let label = if distance_i < t.eigenvalue_window && dominant_delta == 1 && central >= t.k_concentration {
            StateLabel::DimerI
        } else if distance_ii < t.eigenvalue_window && dominant_delta == 2 && 1.0 - central >= t.k_concentration {
            StateLabel::DimerII
        } else if fermion_overlap >= t.overlap {
            StateLabel::Fermionic
        } else {
            StateLabel::Other
        };
        StateClass {
            label,
            distance_i,
            distance_ii,
            dominant_delta,
            dominant_k: dec.dominant_k(),
            central_k_weight: central,
            odd_delta_weight: dec.odd_delta_weight(),
            fermion_overlap,
            thresholds: t,
        }
    }
}

/// One-shot classification with default thresholds.
pub fn classify_state(pair: &EigenPair, chain: &ChainGeometry) -> Result<StateClass, AnalysisError> {
    Classifier::new(chain)?.classify(pair)
}

/// Sum of the two smallest one-excitation decay rates.
pub fn fermionic_reference(chain: &ChainGeometry) -> Result<f64, AnalysisError> {
    let h = build_single_hamiltonian(chain, &chain.waveguide_kernel())?;
    let spec = eig_dense_all(&h, usize::MAX)?;
    Ok(spec.pairs().iter().take(2).map(|p| p.decay_rate()).sum())
}

/// Index of the smallest decay rate among pairs labelled `label`; ties go to the
/// smaller `|Re λ − reference|`.
pub fn most_subradiant(
    pairs: &[EigenPair],
    classes: &[StateClass],
    label: StateLabel,
    reference: f64,
) -> Result<usize, AnalysisError> {
    pairs
        .iter()
        .zip(classes)
        .enumerate()
        .filter(|(_, (_, c))| c.label == label)
        .min_by(|(_, (a, _)), (_, (b, _))| {
            a.decay_rate()
                .total_cmp(&b.decay_rate())
                .then((a.lambda.re - reference).abs().total_cmp(&(b.lambda.re - reference).abs()))
        })
        .map(|(i, _)| i)
        .ok_or(AnalysisError::EmptySelection(label.name()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::normalize;
    use alloc::vec;
    use core::f64::consts::PI;
    use rand::{Rng, SeedableRng};

    fn pair_from(vector: Vec<C64>, lambda: C64) -> EigenPair {
        EigenPair { lambda, vector, residual: 0.0 }
    }

    #[test]
    fn antisymmetrised_pair_is_fermionic() {
        let chain = ChainGeometry::uniform(16, 0.2 * PI).unwrap();
        let h = build_single_hamiltonian(&chain, &chain.waveguide_kernel()).unwrap();
        let one = eig_dense_all(&h, 100).unwrap();
        let (u, v) = (&one.pairs()[0].vector, &one.pairs()[1].vector);
        let basis = TwoExcitationBasis::new(16);
        let mut psi: Vec<C64> = basis.pairs().map(|(m, n)| u[m] * v[n] - u[n] * v[m]).collect();
        normalize(&mut psi);
        let lam = one.pairs()[0].lambda + one.pairs()[1].lambda;
        let c = classify_state(&pair_from(psi.clone(), lam), &chain).unwrap();
        assert_eq!(c.label, StateLabel::Fermionic);
        assert!(c.fermion_overlap > 1.0 - 1e-12);
        let phase = C64::from_polar(1.0, 1.234);
        let rotated: Vec<C64> = psi.iter().map(|x| x * phase).collect();
        let c2 = classify_state(&pair_from(rotated, lam), &chain).unwrap();
        assert_eq!(c2.label, c.label);
        assert!((c2.fermion_overlap - c.fermion_overlap).abs() < 1e-12);
        assert!((c2.central_k_weight - c.central_k_weight).abs() < 1e-12);
    }

    #[test]
    fn random_vector_is_other() {
        let chain = ChainGeometry::uniform(14, 0.2 * PI).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut psi: Vec<C64> = (0..91).map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        normalize(&mut psi);
        let c = classify_state(&pair_from(psi, C64::new(9.0, -1.0)), &chain).unwrap();
        assert_eq!(c.label, StateLabel::Other);
    }

    #[test]
    fn two_site_reference() {
        let chain = ChainGeometry::uniform(2, 0.37).unwrap();
        assert!((fermionic_reference(&chain).unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn reference_decreases_with_n() {
        let r: Vec<f64> = (20..=100)
            .step_by(20)
            .map(|n| fermionic_reference(&ChainGeometry::uniform(n, 0.2 * PI).unwrap()).unwrap())
            .collect();
        assert!(r.windows(2).all(|w| w[1] < w[0]), "{r:?}");
    }

    #[test]
    fn empty_filter_errors() {
        let chain = ChainGeometry::uniform(4, 0.3).unwrap();
        let p = pair_from(vec![C64::new(1.0, 0.0); 6], C64::new(0.0, -0.1));
        let mut c = classify_state(&p, &chain).unwrap();
        c.label = StateLabel::DimerI;
        assert!(most_subradiant(&[p.clone()], &[c.clone()], StateLabel::Other, 0.0).is_err());
        assert_eq!(most_subradiant(&[p], &[c], StateLabel::DimerI, 0.0).unwrap(), 0);
    }
}
