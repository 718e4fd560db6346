use super::gmres::{gmres, GmresConfig};
use super::EigError;
use crate::linalg::{schur, solve_triangular_sylvester, CMatrix, Lu, C64};
use crate::model::{build_single_hamiltonian, ChainGeometry, FastTwoExcitation};
use alloc::vec::Vec;
use core::cell::Cell;

/// Application of `(H − σ)⁻¹`.
pub trait ShiftInverse {
    /// Dimension.
    fn dim(&self) -> usize;

    /// The shift `σ`.
    fn shift(&self) -> C64;

    /// `x = (H − σ)⁻¹ b`.
    fn solve(&self, b: &[C64], x: &mut [C64]) -> Result<(), EigError>;
}

/// Dense LU of `H − σ`, factored once.
#[derive(Debug, Clone)]
pub struct DenseShiftInverse {
    lu: Lu,
    sigma: C64,
}

impl DenseShiftInverse {
    /// Factors `H − σ`.
    pub fn new(h: &CMatrix, sigma: C64) -> Result<Self, EigError> {
        Ok(Self { lu: Lu::factor(&h.shifted(sigma))?, sigma })
    }
}

impl ShiftInverse for DenseShiftInverse {
    fn dim(&self) -> usize {
        self.lu.dim()
    }

    fn shift(&self) -> C64 {
        self.sigma
    }

    fn solve(&self, b: &[C64], x: &mut [C64]) -> Result<(), EigError> {
        x.copy_from_slice(b);
        self.lu.solve_in_place(x);
        Ok(())
    }
}

/// Inverse of `X ↦ J X + X J − σ X` on all `N×N` matrices, `J` the one-excitation
/// kernel matrix, through a complex Schur factorization of `J`.
#[derive(Debug, Clone)]
pub struct KroneckerInverse {
    t: CMatrix,
    q: CMatrix,
    qh: CMatrix,
    sigma: C64,
}

impl KroneckerInverse {
    /// Factors the one-excitation matrix of the chain.
    pub fn new(chain: &ChainGeometry, sigma: C64) -> Result<Self, EigError> {
        let j = build_single_hamiltonian(chain, &chain.waveguide_kernel())?;
        Self::from_single(&j, sigma)
    }

    /// Factors an explicit one-excitation matrix.
    pub fn from_single(j: &CMatrix, sigma: C64) -> Result<Self, EigError> {
        let s = schur(j)?;
        let qh = s.q.adjoint();
        Ok(Self { t: s.t, q: s.q, qh, sigma })
    }

    /// Chain length.
    pub fn n(&self) -> usize {
        self.t.rows()
    }

    /// `X` solving `J X + X J − σ X = R`.
    pub fn solve_full(&self, r: &CMatrix) -> CMatrix {
        let z = self.solve_schur_basis(&self.qh.matmul(r).matmul(&self.q).transpose());
        self.q.matmul(&z.transpose()).matmul(&self.qh)
    }

    fn solve_schur_basis(&self, c_cols: &CMatrix) -> CMatrix {
        let mut z = c_cols.clone();
        solve_triangular_sylvester(&self.t, self.sigma, &mut z);
        z
    }

    /// Diagonal of `X` solving the equation with right side `e_m e_mᵀ`, for every `m`,
    /// as the matrix `C[p][m] = X_pp`.
    fn diagonal_responses(&self) -> CMatrix {
        let n = self.n();
        let mut cap = CMatrix::zeros(n, n);
        let mut rhs = CMatrix::zeros(n, n);
        for m in 0..n {
            let qm = self.q.row(m);
            for b in 0..n {
                for a in 0..n {
                    rhs[(b, a)] = qm[a].conj() * qm[b];
                }
            }
            let z = self.solve_schur_basis(&rhs).transpose();
            let w = z.matmul(&self.qh);
            for p in 0..n {
                let qp = self.q.row(p);
                let mut s = C64::new(0.0, 0.0);
                for a in 0..n {
                    s += qp[a] * w[(a, p)];
                }
                cap[(p, m)] = s;
            }
        }
        cap
    }
}

/// Symmetric zero-diagonal matrix holding pair amplitudes.
pub(crate) fn embed_pairs(n: usize, v: &[C64]) -> CMatrix {
    let mut x = CMatrix::zeros(n, n);
    let mut idx = 0;
    for m in 0..n {
        for k in m + 1..n {
            x[(m, k)] = v[idx];
            x[(k, m)] = v[idx];
            idx += 1;
        }
    }
    x
}

/// Pair amplitudes from the symmetrized strict upper triangle.
pub(crate) fn extract_pairs(x: &CMatrix, out: &mut [C64]) {
    let n = x.rows();
    let mut idx = 0;
    for m in 0..n {
        for k in m + 1..n {
            out[idx] = (x[(m, k)] + x[(k, m)]) * 0.5;
            idx += 1;
        }
    }
}

/// Exact `(H − σ)⁻¹` in the hard-core two-excitation sector: the Kronecker-sum
/// inverse corrected by an `N×N` capacitance system that removes double occupancy.
/// O(N⁴) setup, O(N³) per solve, O(N²) memory.
#[derive(Debug, Clone)]
pub struct StructuredShiftInverse {
    kron: KroneckerInverse,
    capacitance: Lu,
}

impl StructuredShiftInverse {
    /// Factors for the chain's waveguide Hamiltonian.
    pub fn new(chain: &ChainGeometry, sigma: C64) -> Result<Self, EigError> {
        let kron = KroneckerInverse::new(chain, sigma)?;
        let capacitance = Lu::factor(&kron.diagonal_responses())?;
        Ok(Self { kron, capacitance })
    }
}

impl ShiftInverse for StructuredShiftInverse {
    fn dim(&self) -> usize {
        let n = self.kron.n();
        n * (n - 1) / 2
    }

    fn shift(&self) -> C64 {
        self.kron.sigma
    }

    fn solve(&self, b: &[C64], x: &mut [C64]) -> Result<(), EigError> {
        let n = self.kron.n();
        let mut r = embed_pairs(n, b);
        let y = self.kron.solve_full(&r);
        let diag: Vec<C64> = (0..n).map(|p| -y[(p, p)]).collect();
        let t = self.capacitance.solve(&diag);
        for (p, tp) in t.into_iter().enumerate() {
            r[(p, p)] = tp;
        }
        let full = self.kron.solve_full(&r);
        extract_pairs(&full, x);
        Ok(())
    }
}

/// `(H − σ)⁻¹` by restarted GMRES on the fast two-excitation product, right
/// preconditioned with the Kronecker-sum inverse.
#[derive(Debug)]
pub struct MatrixFreeShiftInverse {
    op: FastTwoExcitation,
    kron: KroneckerInverse,
    config: GmresConfig,
    iterations: Cell<usize>,
    solves: Cell<usize>,
}

impl MatrixFreeShiftInverse {
    /// Prepares the inner solver with relative tolerance `inner_tol`.
    pub fn new(chain: &ChainGeometry, sigma: C64, inner_tol: f64) -> Result<Self, EigError> {
        let op = FastTwoExcitation::new(chain, &chain.waveguide_kernel())?;
        let kron = KroneckerInverse::new(chain, sigma)?;
        let restart = (chain.n() + 50).min(op.dim().max(1));
        let config = GmresConfig { tol: inner_tol, restart, max_iter: 20 * restart };
        Ok(Self { op, kron, config, iterations: Cell::new(0), solves: Cell::new(0) })
    }

    /// Total inner iterations and solves so far.
    pub fn stats(&self) -> (usize, usize) {
        (self.iterations.get(), self.solves.get())
    }
}

impl ShiftInverse for MatrixFreeShiftInverse {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn shift(&self) -> C64 {
        self.kron.sigma
    }

    fn solve(&self, b: &[C64], x: &mut [C64]) -> Result<(), EigError> {
        let n = self.kron.n();
        let sigma = self.kron.sigma;
        let apply = |v: &[C64], out: &mut [C64]| {
            self.op.apply(v, out);
            for (o, vi) in out.iter_mut().zip(v) {
                *o -= sigma * vi;
            }
        };
        let precond = |v: &[C64], out: &mut [C64]| {
            let full = self.kron.solve_full(&embed_pairs(n, v));
            extract_pairs(&full, out);
        };
        let outcome = gmres(&apply, &precond, b, &self.config);
        self.iterations.set(self.iterations.get() + outcome.iterations);
        self.solves.set(self.solves.get() + 1);
        if !outcome.converged && outcome.residual > 1e3 * self.config.tol.max(1e-12) {
            return Err(EigError::InnerStagnation { iterations: outcome.iterations, residual: outcome.residual });
        }
        x.copy_from_slice(&outcome.x);
        Ok(())
    }
}
