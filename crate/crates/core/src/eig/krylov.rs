use super::{EigError, EigenPair, LinearOperator, ShiftInverse, SolverConfig};
use crate::linalg::{axpy, distance, dotc, norm2, normalize, schur, triangular_eigenvectors, CMatrix, C64};
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n).map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    normalize(&mut v);
    v
}

/// Orthogonalizes `w` against `basis` (two classical Gram-Schmidt passes) and
/// accumulates the coefficients into `coef`.
fn orthogonalize(basis: &[Vec<C64>], w: &mut [C64], coef: &mut [C64]) {
    for _ in 0..2 {
        let h: Vec<C64> = basis.iter().map(|v| dotc(v, w)).collect();
        for (v, hi) in basis.iter().zip(&h) {
            axpy(-*hi, v, w);
        }
        for (c, hi) in coef.iter_mut().zip(&h) {
            *c += hi;
        }
    }
}

/// Shift-invert Krylov-Schur iteration returning the `count` eigenpairs nearest
/// the shift, each with an explicitly verified residual.
pub fn krylov_schur(op: &dyn LinearOperator, inverse: &dyn ShiftInverse, config: &SolverConfig) -> Result<Vec<EigenPair>, EigError> {
    let n = op.dim();
    if inverse.dim() != n {
        return Err(EigError::InvalidConfig("operator and inverse dimensions differ"));
    }
    let sigma = inverse.shift();
    let nev = config.count.min(n);
    let m = config.max_subspace.min(n);
    if nev == 0 {
        return Ok(Vec::new());
    }
    let norm_est = op.norm_estimate() + sigma.norm();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m + 1);
    basis.push(random_unit(n, &mut rng));
    let mut s = CMatrix::zeros(m, m);
    let mut b_row = vec![C64::new(0.0, 0.0); m];
    let mut k = 0;
    let mut ritz_tol = config.tol;
    let mut best = vec![f64::INFINITY; nev];
    let mut w = vec![C64::new(0.0, 0.0); n];
    for restart in 0..=config.max_restarts {
        for j in k..m {
            inverse.solve(&basis[j], &mut w)?;
            let mut coef = vec![C64::new(0.0, 0.0); j + 1];
            orthogonalize(&basis, &mut w, &mut coef);
            for (i, c) in coef.into_iter().enumerate() {
                s[(i, j)] = c;
            }
            let mut beta = norm2(&w);
            if beta <= 1e-13 * norm2(&coef_norm_ref(&s, j)) {
                // invariant subspace: continue with a fresh orthogonal direction
                beta = 0.0;
                let mut fresh = random_unit(n, &mut rng);
                let mut dump = vec![C64::new(0.0, 0.0); j + 1];
                orthogonalize(&basis, &mut fresh, &mut dump);
                normalize(&mut fresh);
                w.copy_from_slice(&fresh);
            } else {
                for x in w.iter_mut() {
                    *x /= beta;
                }
            }
            if j + 1 < m {
                s[(j + 1, j)] = C64::new(beta, 0.0);
            } else {
                for x in b_row.iter_mut() {
                    *x = C64::new(0.0, 0.0);
                }
                b_row[m - 1] = C64::new(beta, 0.0);
            }
            if basis.len() < m + 1 {
                basis.push(w.clone());
            }
        }
        let mut sch = schur(&s)?;
        let theta = sch.eigenvalues();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| theta[b].norm().total_cmp(&theta[a].norm()));
        let y = triangular_eigenvectors(&sch.t);
        let bq: Vec<C64> = (0..m).map(|c| (0..m).map(|r| b_row[r] * sch.q[(r, c)]).sum()).collect();
        let mut estimates = Vec::with_capacity(nev);
        for &i in order.iter().take(nev) {
            let col: Vec<C64> = (0..m).map(|r| y[(r, i)]).collect();
            let yn = norm2(&col);
            let proj: C64 = (0..m).map(|r| bq[r] * col[r]).sum::<C64>() / yn;
            estimates.push(norm_est * proj.norm() / theta[i].norm().max(f64::MIN_POSITIVE));
        }
        for (b, e) in best.iter_mut().zip(&estimates) {
            *b = e.min(*b);
        }
        let all_converged = estimates.iter().all(|&e| e <= ritz_tol) || m == n;
        if all_converged {
            let mut pairs = Vec::with_capacity(nev);
            let mut worst: f64 = 0.0;
            for &i in order.iter().take(nev) {
                let qy: Vec<C64> = (0..m).map(|r| (0..m).map(|c| sch.q[(r, c)] * y[(c, i)]).sum()).collect();
                let mut x = vec![C64::new(0.0, 0.0); n];
                for (v, c) in basis.iter().zip(&qy) {
                    axpy(*c, v, &mut x);
                }
                normalize(&mut x);
                let lambda = sigma + C64::new(1.0, 0.0) / theta[i];
                let mut hx = vec![C64::new(0.0, 0.0); n];
                op.apply(&x, &mut hx);
                let lx: Vec<C64> = x.iter().map(|v| v * lambda).collect();
                let residual = distance(&hx, &lx);
                worst = worst.max(residual);
                pairs.push(EigenPair { lambda, vector: x, residual });
            }
            if worst <= config.tol || m == n {
                return Ok(pairs);
            }
            ritz_tol *= 0.1;
            if ritz_tol < 1e-6 * config.tol {
                return Err(EigError::NotConverged { restarts: restart, best: pairs.iter().map(|p| p.residual).collect() });
            }
        }
        if restart == config.max_restarts {
            break;
        }
        let keep = (nev + (m - nev) / 2).clamp(nev, m - 1);
        let mut select = vec![false; m];
        for &i in order.iter().take(keep) {
            select[i] = true;
        }
        sch.reorder(&select);
        let bq: Vec<C64> = (0..m).map(|c| (0..m).map(|r| b_row[r] * sch.q[(r, c)]).sum()).collect();
        let mut new_basis: Vec<Vec<C64>> = Vec::with_capacity(m + 1);
        for c in 0..keep {
            let mut v = vec![C64::new(0.0, 0.0); n];
            for (r, old) in basis.iter().take(m).enumerate() {
                axpy(sch.q[(r, c)], old, &mut v);
            }
            new_basis.push(v);
        }
        new_basis.push(basis[m].clone());
        basis = new_basis;
        s = CMatrix::zeros(m, m);
        for r in 0..keep {
            for c in r..keep {
                s[(r, c)] = sch.t[(r, c)];
            }
        }
        for c in 0..keep {
            s[(keep, c)] = bq[c];
        }
        k = keep;
    }
    Err(EigError::NotConverged { restarts: config.max_restarts, best })
}

fn coef_norm_ref(s: &CMatrix, j: usize) -> Vec<C64> {
    (0..=j).map(|i| s[(i, j)]).collect()
}
