use super::{most_subradiant, AnalysisError, Classifier, StateClass, StateLabel};
use crate::eig::{eig_target_two_excitation, EigenPair, SolverConfig};
use crate::linalg::C64;
use crate::model::ChainGeometry;
use crate::theory::DimerType;
use alloc::vec::Vec;

/// Most subradiant classified dimer found by a targeted search.
#[derive(Debug, Clone, PartialEq)]
pub struct DimerHit {
    /// Eigenpair.
    pub pair: EigenPair,
    /// Its classification.
    pub class: StateClass,
    /// Eigenpairs inspected in the final attempt.
    pub inspected: usize,
}

/// Shift-invert around `ω_type`, classify the returned pairs and keep the most
/// subradiant one carrying the dimer label; the eigenvalue count is widened
/// (10, 24, 48) until one is found.
pub fn find_dimer(
    chain: &ChainGeometry,
    kind: DimerType,
    base: &SolverConfig,
    classifier: &Classifier,
) -> Result<DimerHit, AnalysisError> {
    let omega = classifier.omega(kind);
    if !omega.is_finite() {
        return Err(AnalysisError::EmptySelection(kind.name()));
    }
    let label = StateLabel::from(kind);
    let dim = chain.n() * (chain.n() - 1) / 2;
    for count in [10usize, 24, 48] {
        let count = count.min(dim.saturating_sub(1)).max(1);
        let mut config = base.clone();
        config.target = C64::new(omega, 0.0);
        config.count = count;
        config.max_subspace = (4 * count).max(20).min(dim);
        let spectrum = eig_target_two_excitation(chain, &config)?;
        let pairs = spectrum.into_pairs();
        let classes = pairs.iter().map(|p| classifier.classify(p)).collect::<Result<Vec<_>, _>>()?;
        if let Ok(i) = most_subradiant(&pairs, &classes, label, omega) {
            let inspected = pairs.len();
            return Ok(DimerHit { pair: pairs[i].clone(), class: classes[i].clone(), inspected });
        }
        if count + 1 >= dim {
            break;
        }
    }
    Err(AnalysisError::EmptySelection(label.name()))
}

/// Groups subradiant pairs (`rate < rate_max`) into branches: sorted by `Re λ`,
/// split where consecutive real parts differ by more than `gap`.
pub fn cluster_branches(pairs: &[EigenPair], rate_max: f64, gap: f64) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..pairs.len()).filter(|&i| pairs[i].decay_rate() < rate_max).collect();
    idx.sort_by(|&a, &b| pairs[a].lambda.re.total_cmp(&pairs[b].lambda.re));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match out.last_mut() {
            Some(branch) if pairs[i].lambda.re - pairs[*branch.last().expect("non-empty")].lambda.re <= gap => {
                branch.push(i)
            }
            _ => out.push(alloc::vec![i]),
        }
    }
    out
}

/// Index of the vector with the largest weight on sites within `radius` of `defect`;
/// `sites[i]` is the lattice label of component `i`.
pub fn localized_state(pairs: &[EigenPair], sites: &[usize], defect: usize, radius: usize) -> Option<usize> {
    let weight = |p: &EigenPair| -> f64 {
        p.vector.iter().zip(sites).filter(|(_, &s)| s.abs_diff(defect) <= radius).map(|(v, _)| v.norm_sqr()).sum()
    };
    (0..pairs.len()).max_by(|&a, &b| weight(&pairs[a]).total_cmp(&weight(&pairs[b])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(re: f64, rate: f64, vector: Vec<C64>) -> EigenPair {
        EigenPair { lambda: C64::new(re, -0.5 * rate), vector, residual: 0.0 }
    }

    #[test]
    fn branches_split_at_gaps() {
        let pairs = vec![p(1.0, 0.01, vec![]), p(1.1, 0.02, vec![]), p(2.0, 0.01, vec![]), p(1.05, 0.5, vec![])];
        assert_eq!(cluster_branches(&pairs, 0.05, 0.2), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn localisation_picks_peak() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let far = p(0.0, 0.1, vec![one, zero, zero, zero]);
        let near = p(0.0, 0.1, vec![zero, zero, one, zero]);
        assert_eq!(localized_state(&[far, near], &[0, 10, 20, 30], 21, 2), Some(1));
    }
}
