//! Non-Hermitian eigensolvers: full dense decomposition and a shift-invert
//! Krylov-Schur engine with direct or iterative inner solves.

mod dense;
mod gmres;
mod krylov;
mod matching;
mod operator;
mod shift;

pub use dense::{eig_dense_all, eig_dense_select};
pub use gmres::{gmres, GmresConfig, GmresOutcome};
pub use krylov::krylov_schur;
pub use matching::{match_nearest, MatchError};
pub use operator::{DenseOperator, LinearOperator, TwoExcitationOperator};
pub use shift::{DenseShiftInverse, KroneckerInverse, MatrixFreeShiftInverse, ShiftInverse, StructuredShiftInverse};

use crate::linalg::{distance, LinalgError, C64};
use crate::model::{ChainGeometry, FastTwoExcitation, ModelError, TwoExcitationBasis};
use alloc::vec;
use alloc::vec::Vec;

/// Eigenvalue with a unit right eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    /// Complex frequency in units of the single-emitter rate.
    pub lambda: C64,
    /// Unit eigenvector.
    pub vector: Vec<C64>,
    /// `‖H v − λ v‖₂` recorded when the pair was produced.
    pub residual: f64,
}

impl EigenPair {
    /// Decay rate `−2 Im λ`.
    pub fn decay_rate(&self) -> f64 {
        -2.0 * self.lambda.im
    }
}

/// Solver strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMode {
    /// Full dense decomposition.
    DenseAll,
    /// Shift-invert with an exact factorization of `H − σ`.
    ShiftInvertDirect,
    /// Shift-invert with preconditioned GMRES inner solves.
    ShiftInvertMatrixFree,
}

impl SolverMode {
    /// Short name used in records and on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            SolverMode::DenseAll => "dense",
            SolverMode::ShiftInvertDirect => "si-direct",
            SolverMode::ShiftInvertMatrixFree => "si-matfree",
        }
    }
}

/// Targeted-solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Shift `σ`.
    pub target: C64,
    /// Eigenpairs requested.
    pub count: usize,
    /// Largest Krylov basis.
    pub max_subspace: usize,
    /// Residual tolerance on `‖H v − λ v‖₂`.
    pub tol: f64,
    /// Restart budget.
    pub max_restarts: usize,
    /// Strategy.
    pub mode: SolverMode,
    /// Seed of the starting vector.
    pub seed: u64,
    /// Largest dimension handled by dense factorizations.
    pub dense_cap: usize,
}

impl SolverConfig {
    /// Defaults around a shift: subspace `max(4·count, 20)`, tolerance `1e−10`, 200 restarts.
    pub fn new(target: C64, count: usize) -> Self {
        Self {
            target,
            count,
            max_subspace: (4 * count).max(20),
            tol: 1e-10,
            max_restarts: 200,
            mode: SolverMode::ShiftInvertDirect,
            seed: 0,
            dense_cap: 6000,
        }
    }

    /// Same settings with another mode.
    pub fn with_mode(mut self, mode: SolverMode) -> Self {
        self.mode = mode;
        self
    }

    /// Same settings with another tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Same settings with another seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<(), EigError> {
        if self.count == 0 || self.count > self.max_subspace {
            return Err(EigError::InvalidConfig("need 1 <= count <= max_subspace"));
        }
        if !(self.tol > 0.0) {
            return Err(EigError::InvalidConfig("tolerance must be positive"));
        }
        Ok(())
    }
}

/// Hilbert-space sector a spectrum belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// One excitation on the full chain.
    Single,
    /// Two hard-core excitations.
    Two,
    /// One excitation with one site removed.
    MissingSite,
    /// Relative-coordinate model.
    Relative,
    /// Anything else.
    Generic,
}

impl Sector {
    /// Short name used in records.
    pub fn name(&self) -> &'static str {
        match self {
            Sector::Single => "one",
            Sector::Two => "two",
            Sector::MissingSite => "defect",
            Sector::Relative => "relative",
            Sector::Generic => "generic",
        }
    }
}

/// Provenance of a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMeta {
    /// Emitter count.
    pub n: usize,
    /// `k₁D·d`.
    pub kd: f64,
    /// Sector.
    pub sector: Sector,
    /// Solver used.
    pub mode: SolverMode,
    /// Wall time in seconds, filled in by callers that can measure it.
    pub wall_time_s: Option<f64>,
}

impl SpectrumMeta {
    /// Metadata without timing.
    pub fn new(n: usize, kd: f64, sector: Sector, mode: SolverMode) -> Self {
        Self { n, kd, sector, mode, wall_time_s: None }
    }
}

/// Eigenpairs sorted by ascending decay rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pairs: Vec<EigenPair>,
    /// Provenance.
    pub meta: SpectrumMeta,
}

impl Spectrum {
    /// Sorts the pairs by decay rate, then by real part.
    pub fn new(mut pairs: Vec<EigenPair>, meta: SpectrumMeta) -> Self {
        pairs.sort_by(|a, b| {
            a.decay_rate()
                .total_cmp(&b.decay_rate())
                .then(a.lambda.re.total_cmp(&b.lambda.re))
        });
        Self { pairs, meta }
    }

    /// Sorted pairs.
    pub fn pairs(&self) -> &[EigenPair] {
        &self.pairs
    }

    /// Consumes into the sorted pairs.
    pub fn into_pairs(self) -> Vec<EigenPair> {
        self.pairs
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// True when empty.
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Eigenvalues in stored order.
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.pairs.iter().map(|p| p.lambda).collect()
    }

    /// Most slowly decaying pair.
    pub fn most_subradiant(&self) -> Option<&EigenPair> {
        self.pairs.first()
    }
}

/// Eigensolver failures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EigError {
    /// Dense kernel failure.
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    /// Model construction failure.
    #[error(transparent)]
    Model(#[from] ModelError),
    /// Dimension above the dense cap.
    #[error("dimension {dim} exceeds dense cap {cap}")]
    DenseCapExceeded {
        /// Problem size.
        dim: usize,
        /// Configured cap.
        cap: usize,
    },
    /// Restart budget exhausted.
    #[error("Krylov-Schur did not converge in {restarts} restarts (best residuals {best:?})")]
    NotConverged {
        /// Restarts performed.
        restarts: usize,
        /// Best residual estimates of the wanted pairs.
        best: Vec<f64>,
    },
    /// Inner iterative solve stalled.
    #[error("inner solve stagnated at relative residual {residual:.3e} after {iterations} iterations")]
    InnerStagnation {
        /// Iterations performed.
        iterations: usize,
        /// Relative residual reached.
        residual: f64,
    },
    /// Settings out of range.
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(&'static str),
}

/// Recomputes `‖H v − λ v‖₂`.
pub fn residual_norm(op: &dyn LinearOperator, pair: &EigenPair) -> f64 {
    let mut hv = vec![C64::new(0.0, 0.0); pair.vector.len()];
    op.apply(&pair.vector, &mut hv);
    let lv: Vec<C64> = pair.vector.iter().map(|x| x * pair.lambda).collect();
    distance(&hv, &lv)
}

/// `count` eigenpairs of the operator nearest `config.target`.
pub fn eig_target(
    op: &dyn LinearOperator,
    inverse: &dyn ShiftInverse,
    config: &SolverConfig,
) -> Result<Vec<EigenPair>, EigError> {
    config.validate()?;
    krylov_schur(op, inverse, config)
}

/// Targeted two-excitation spectrum of a waveguide chain, using the inner solver
/// selected by `config.mode` (`DenseAll` runs the full decomposition and keeps the
/// `count` eigenvalues nearest the target).
pub fn eig_target_two_excitation(chain: &ChainGeometry, config: &SolverConfig) -> Result<Spectrum, EigError> {
    config.validate()?;
    let basis = TwoExcitationBasis::new(chain.n());
    let meta = SpectrumMeta::new(chain.n(), chain.kd(), Sector::Two, config.mode);
    let kernel = chain.waveguide_kernel();
    let pairs = match config.mode {
        SolverMode::DenseAll => {
            let h = crate::model::build_two_hamiltonian(chain, &kernel, &basis)?;
            nearest_dense(&h, config)?
        }
        SolverMode::ShiftInvertDirect => {
            let op = TwoExcitationOperator::new(FastTwoExcitation::new(chain, &kernel)?);
            let inv = StructuredShiftInverse::new(chain, config.target)?;
            eig_target(&op, &inv, config)?
        }
        SolverMode::ShiftInvertMatrixFree => {
            let op = TwoExcitationOperator::new(FastTwoExcitation::new(chain, &kernel)?);
            let inv = MatrixFreeShiftInverse::new(chain, config.target, inner_tolerance(config.tol))?;
            eig_target(&op, &inv, config)?
        }
    };
    Ok(Spectrum::new(pairs, meta))
}

/// Targeted spectrum of an explicit matrix.
pub fn eig_target_dense(h: &crate::linalg::CMatrix, config: &SolverConfig, meta: SpectrumMeta) -> Result<Spectrum, EigError> {
    config.validate()?;
    let pairs = match config.mode {
        SolverMode::DenseAll => nearest_dense(h, config)?,
        _ => {
            if h.rows() > config.dense_cap {
                return Err(EigError::DenseCapExceeded { dim: h.rows(), cap: config.dense_cap });
            }
            let op = DenseOperator::new(h);
            let inv = DenseShiftInverse::new(h, config.target)?;
            eig_target(&op, &inv, config)?
        }
    };
    Ok(Spectrum::new(pairs, meta))
}

fn nearest_dense(h: &crate::linalg::CMatrix, config: &SolverConfig) -> Result<Vec<EigenPair>, EigError> {
    if h.rows() > config.dense_cap {
        return Err(EigError::DenseCapExceeded { dim: h.rows(), cap: config.dense_cap });
    }
    let target = config.target;
    let s = crate::linalg::schur(h)?;
    let all = s.eigenvalues();
    let mut order: Vec<usize> = (0..all.len()).collect();
    order.sort_by(|&a, &b| (all[a] - target).norm().total_cmp(&(all[b] - target).norm()));
    let mut keep = vec![false; all.len()];
    for &i in order.iter().take(config.count) {
        keep[i] = true;
    }
    Ok(dense::vectors_from_schur(h, &s, |i| keep[i]))
}

/// Inner tolerance of the iterative shift-invert solves: three orders below the
/// outer tolerance, floored where preconditioned GMRES stagnates.
pub fn inner_tolerance(tol: f64) -> f64 {
    (1e-3 * tol).max(1e-12)
}
